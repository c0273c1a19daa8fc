#include "mtrsvd/regularizers.hpp"

#include <stdexcept>

namespace mtrsvd {

BandedOperator::BandedOperator(Index rows, Index cols, std::vector<Block> blocks)
    : rows_(rows), cols_(cols), blocks_(std::move(blocks)) {}

Vector BandedOperator::apply(const Vector& x) const {
  if (x.size() != cols_) {
    throw std::invalid_argument("BandedOperator::apply: dimension mismatch");
  }
  Vector y = Vector::Zero(rows_);
  for (const Block& block : blocks_) {
    for (Index i = 0; i < block.rows; ++i) {
      double acc = 0.0;
      for (const Band& band : block.bands) {
        acc += band.coeff * x(i + band.offset);
      }
      y(block.row_begin + i) = acc;
    }
  }
  return y;
}

Vector BandedOperator::apply_transpose(const Vector& y) const {
  if (y.size() != rows_) {
    throw std::invalid_argument(
        "BandedOperator::apply_transpose: dimension mismatch");
  }
  Vector x = Vector::Zero(cols_);
  for (const Block& block : blocks_) {
    for (Index i = 0; i < block.rows; ++i) {
      const double yi = y(block.row_begin + i);
      for (const Band& band : block.bands) {
        x(i + band.offset) += band.coeff * yi;
      }
    }
  }
  return x;
}

Matrix BandedOperator::dense() const {
  Matrix D = Matrix::Zero(rows_, cols_);
  for (const Block& block : blocks_) {
    for (Index i = 0; i < block.rows; ++i) {
      for (const Band& band : block.bands) {
        D(block.row_begin + i, i + band.offset) = band.coeff;
      }
    }
  }
  return D;
}

BandedOperator build_regularizer(RegKind kind, Index n) {
  if (n < 3) {
    throw std::invalid_argument("build_regularizer: n must be >= 3");
  }
  using Block = BandedOperator::Block;
  const std::vector<BandedOperator::Band> first{{0, 1.0}, {1, -1.0}};
  const std::vector<BandedOperator::Band> second{{0, -1.0}, {1, 2.0}, {2, -1.0}};
  switch (kind) {
    case RegKind::L1:
      return BandedOperator(n - 1, n, {Block{0, n - 1, first}});
    case RegKind::L2:
      return BandedOperator(n - 2, n, {Block{0, n - 2, second}});
    case RegKind::L3:
      return BandedOperator(2 * n - 3, n,
                            {Block{0, n - 1, first}, Block{n - 1, n - 2, second}});
    case RegKind::Identity:
      return BandedOperator(n, n, {Block{0, n, {{0, 1.0}}}});
  }
  throw std::invalid_argument("build_regularizer: unknown kind");
}

LinearOperator as_operator(const BandedOperator& L) {
  LinearOperator op;
  op.rows = L.rows();
  op.cols = L.cols();
  op.apply = [&L](const Vector& x) { return L.apply(x); };
  op.apply_transpose = [&L](const Vector& y) { return L.apply_transpose(y); };
  return op;
}

LinearOperator projected_regularizer(const BandedOperator& L, const Matrix& Vk) {
  if (Vk.size() > 0 && Vk.rows() != L.cols()) {
    throw std::invalid_argument("projected_regularizer: Vk row count != n");
  }
  LinearOperator op;
  op.rows = L.rows();
  op.cols = L.cols();
  if (Vk.cols() == 0) {
    op.apply = [&L](const Vector& x) { return L.apply(x); };
    op.apply_transpose = [&L](const Vector& y) { return L.apply_transpose(y); };
    return op;
  }
  // Vk is captured by value so the operator stays valid if the caller's
  // factor object goes out of scope; L must outlive the operator.
  op.apply = [&L, Vk](const Vector& x) {
    Vector projected = x - Vk * (Vk.transpose() * x);
    return L.apply(projected);
  };
  op.apply_transpose = [&L, Vk](const Vector& y) {
    Vector w = L.apply_transpose(y);
    return Vector(w - Vk * (Vk.transpose() * w));
  };
  return op;
}

RegKind reg_kind_from_string(const std::string& s) {
  if (s == "L1" || s == "l1") return RegKind::L1;
  if (s == "L2" || s == "l2") return RegKind::L2;
  if (s == "L3" || s == "l3") return RegKind::L3;
  if (s == "identity" || s == "I") return RegKind::Identity;
  throw std::invalid_argument("unknown regularizer kind: " + s);
}

std::string to_string(RegKind kind) {
  switch (kind) {
    case RegKind::L1: return "L1";
    case RegKind::L2: return "L2";
    case RegKind::L3: return "L3";
    case RegKind::Identity: return "identity";
  }
  return "?";
}

}  // namespace mtrsvd
