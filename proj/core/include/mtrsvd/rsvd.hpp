#pragma once

#include "mtrsvd/kernels.hpp"
#include "mtrsvd/types.hpp"

namespace mtrsvd {

/// Rank-l randomized SVD of A. For the overdetermined variant
/// Utilde * diag(sigma_tilde) * Vtilde^T = Q Q^T A; for the
/// underdetermined variant it equals A Q Q^T.
struct RsvdResult {
  Matrix Utilde;       // m x l
  Vector sigma_tilde;  // length l, non-increasing positive
  Matrix Vtilde;       // n x l
  Matrix Q;            // range-capture basis (m x l or n x l)
  Index k = 0;         // target rank
  Index q = 0;         // oversampling, l = k + q
  RandomSeed seed;

  Index l() const { return sigma_tilde.size(); }
};

/// Rank-k truncation of an RsvdResult.
struct TrsvdApproximation {
  Matrix Uk;      // m x k
  Vector Sigmak;  // length k
  Matrix Vk;      // n x k
  double sigma_tilde_next = 0.0;  // (k+1)-th value of the rank-l factorization

  Index k() const { return Sigmak.size(); }
};

/// Sketch A with a Gaussian matrix, orthonormalize Y = A*Omega, and factor
/// the small projected matrix B = Q^T A. Requires m >= n, q >= 4, k+q < n.
RsvdResult rsvd_overdetermined(const Matrix& A, Index k, Index q, RandomSeed seed);

/// Mirror variant for m <= n: Y = Omega*A, Q from QR of Y^T, B = A*Q.
/// Equivalent to applying the overdetermined variant to A^T with the
/// factors swapped.
RsvdResult rsvd_underdetermined(const Matrix& A, Index k, Index q, RandomSeed seed);

/// Leading-k truncation; sigma_tilde_next = sigma_tilde[k]. Requires
/// 1 <= k <= l-1.
TrsvdApproximation truncate(const RsvdResult& r, Index k);

}  // namespace mtrsvd
