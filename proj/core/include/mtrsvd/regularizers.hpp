#pragma once

#include <functional>
#include <vector>

#include "mtrsvd/types.hpp"

namespace mtrsvd {

enum class RegKind { L1, L2, L3, Identity };

/// Matrix-free apply / apply-transpose contract with declared shape.
struct LinearOperator {
  Index rows = 0;
  Index cols = 0;
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> apply_transpose;
};

/// Sparse banded operator stored as diagonal-offset bands, optionally
/// stacked in row blocks (L3 = [L1; L2]). Every row has at most 3
/// nonzeros; apply costs O(n).
class BandedOperator {
 public:
  struct Band {
    Index offset;  // column offset relative to the block row index
    double coeff;
  };
  struct Block {
    Index row_begin;
    Index rows;
    std::vector<Band> bands;
  };

  BandedOperator(Index rows, Index cols, std::vector<Block> blocks);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Vector apply(const Vector& x) const;
  Vector apply_transpose(const Vector& y) const;
  Matrix dense() const;

 private:
  Index rows_;
  Index cols_;
  std::vector<Block> blocks_;
};

/// First-difference, second-difference, stacked, or identity operator on
/// n unknowns. Shapes: (n-1) x n, (n-2) x n, (2n-3) x n, n x n.
BandedOperator build_regularizer(RegKind kind, Index n);

LinearOperator as_operator(const BandedOperator& L);

/// Matrix-free realization of L(I - Vk Vk^T). Never densifies the product:
/// apply(x) = L(x - Vk(Vk^T x)), apply_transpose(y) = (I - Vk Vk^T)(L^T y).
/// Vk may have zero columns, in which case the operator coincides with L.
LinearOperator projected_regularizer(const BandedOperator& L, const Matrix& Vk);

RegKind reg_kind_from_string(const std::string& s);
std::string to_string(RegKind kind);

}  // namespace mtrsvd
