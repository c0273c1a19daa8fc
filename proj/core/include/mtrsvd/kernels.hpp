#pragma once

#include <utility>

#include "mtrsvd/types.hpp"

namespace mtrsvd {

/// Compact SVD factors: U (m x r) and V (n x r) column-orthonormal,
/// sigma strictly positive and non-increasing.
struct SvdFactors {
  Matrix U;
  Vector sigma;
  Matrix V;

  Index rank() const { return sigma.size(); }
};

/// Deterministic i.i.d. standard normal matrix from a seeded mt19937_64
/// stream via the Box-Muller transform. Entries are emitted in
/// column-major order.
Matrix gaussian_matrix(Index rows, Index cols, RandomSeed seed);

/// Thin (economy) Householder QR, rows >= cols. The diagonal of R is
/// normalized to be nonnegative so the factorization is unique and
/// reproducible.
std::pair<Matrix, Matrix> householder_qr(const Matrix& Y);

/// Compact SVD. Singular values below 1e-14 * sigma_1 * max(m, n) are
/// dropped. Each U column has its largest-magnitude entry fixed positive.
SvdFactors compact_svd(const Matrix& B);

/// Largest singular value (dense, desk scale only).
double spectral_norm(const Matrix& A);

}  // namespace mtrsvd
