#include "mtrsvd/rsvd.hpp"

#include <stdexcept>

namespace mtrsvd {

namespace {

void check_parameters(Index k, Index q, Index small_dim) {
  if (k < 1) throw std::invalid_argument("rsvd: k must be >= 1");
  if (q < 4) throw std::invalid_argument("rsvd: oversampling q must be >= 4");
  if (k + q >= small_dim) {
    throw std::invalid_argument("rsvd: k + q must be < min(m, n)");
  }
}

}  // namespace

RsvdResult rsvd_overdetermined(const Matrix& A, Index k, Index q, RandomSeed seed) {
  if (A.rows() < A.cols()) {
    throw std::invalid_argument(
        "rsvd_overdetermined: m < n; use rsvd_underdetermined");
  }
  check_parameters(k, q, A.cols());
  const Index l = k + q;

  Matrix omega = gaussian_matrix(A.cols(), l, seed);
  Matrix Y = A * omega;
  auto [Q, R] = householder_qr(Y);
  Matrix B = Q.transpose() * A;  // l x n
  SvdFactors f = compact_svd(B);

  RsvdResult r;
  r.Utilde = Q * f.U;
  r.sigma_tilde = f.sigma;
  r.Vtilde = f.V;
  r.Q = std::move(Q);
  r.k = k;
  r.q = q;
  r.seed = seed;
  return r;
}

RsvdResult rsvd_underdetermined(const Matrix& A, Index k, Index q, RandomSeed seed) {
  if (A.rows() > A.cols()) {
    throw std::invalid_argument(
        "rsvd_underdetermined: m > n; use rsvd_overdetermined");
  }
  check_parameters(k, q, A.rows());
  const Index l = k + q;

  // Omega is l x m; drawn as the transpose of an m x l Gaussian so the
  // seed-to-Omega mapping matches the overdetermined variant on A^T.
  Matrix omega = gaussian_matrix(A.rows(), l, seed).transpose();
  Matrix Y = omega * A;  // l x n
  auto [Q, R] = householder_qr(Y.transpose());
  Matrix B = A * Q;  // m x l
  SvdFactors f = compact_svd(B);

  RsvdResult r;
  r.Utilde = f.U;
  r.sigma_tilde = f.sigma;
  r.Vtilde = Q * f.V;
  r.Q = std::move(Q);
  r.k = k;
  r.q = q;
  r.seed = seed;
  return r;
}

TrsvdApproximation truncate(const RsvdResult& r, Index k) {
  // The sketch can be rank deficient, in which case l is the compact rank
  // and truncating at k = l is legal with sigma_tilde_next = 0.
  const Index l = r.l();
  const Index limit = (l < r.k + r.q) ? l : l - 1;
  if (k < 1 || k > limit) {
    throw std::invalid_argument("truncate: requires 1 <= k <= l - 1");
  }
  TrsvdApproximation a;
  a.Uk = r.Utilde.leftCols(k);
  a.Sigmak = r.sigma_tilde.head(k);
  a.Vk = r.Vtilde.leftCols(k);
  a.sigma_tilde_next = (k < l) ? r.sigma_tilde(k) : 0.0;
  return a;
}

}  // namespace mtrsvd
