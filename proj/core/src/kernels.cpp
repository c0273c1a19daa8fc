#include "mtrsvd/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace mtrsvd {

namespace {

// Uniform in (0, 1]; the open lower end keeps log() finite in Box-Muller.
double next_uniform(std::mt19937_64& rng) {
  return 1.0 - (rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Matrix gaussian_matrix(Index rows, Index cols, RandomSeed seed) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("gaussian_matrix: dimensions must be >= 1");
  }
  std::mt19937_64 rng(seed.value);
  Matrix out(rows, cols);
  double* data = out.data();
  const Index count = rows * cols;
  constexpr double two_pi = 6.283185307179586476925286766559;
  Index i = 0;
  while (i < count) {
    const double u1 = next_uniform(rng);
    const double u2 = next_uniform(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    data[i++] = radius * std::cos(two_pi * u2);
    if (i < count) data[i++] = radius * std::sin(two_pi * u2);
  }
  return out;
}

std::pair<Matrix, Matrix> householder_qr(const Matrix& Y) {
  if (Y.rows() < Y.cols()) {
    throw std::invalid_argument("householder_qr: requires rows >= cols");
  }
  Eigen::HouseholderQR<Matrix> qr(Y);
  Matrix Q = qr.householderQ() * Matrix::Identity(Y.rows(), Y.cols());
  Matrix R = qr.matrixQR()
                 .topRows(Y.cols())
                 .template triangularView<Eigen::Upper>();
  // Normalize to a nonnegative diagonal of R so the factorization is unique.
  for (Index j = 0; j < R.rows(); ++j) {
    if (R(j, j) < 0.0) {
      R.row(j) = -R.row(j);
      Q.col(j) = -Q.col(j);
    }
  }
  return {std::move(Q), std::move(R)};
}

SvdFactors compact_svd(const Matrix& B) {
  if (!B.allFinite()) {
    throw std::invalid_argument("compact_svd: input has non-finite entries");
  }
  Eigen::BDCSVD<Matrix> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff =
      s.size() > 0 ? 1e-14 * s(0) * static_cast<double>(std::max(B.rows(), B.cols()))
                   : 0.0;
  Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;

  SvdFactors f;
  f.U = svd.matrixU().leftCols(r);
  f.sigma = s.head(r);
  f.V = svd.matrixV().leftCols(r);
  // Fix each U column's largest-magnitude entry positive.
  for (Index j = 0; j < r; ++j) {
    Index imax = 0;
    f.U.col(j).cwiseAbs().maxCoeff(&imax);
    if (f.U(imax, j) < 0.0) {
      f.U.col(j) = -f.U.col(j);
      f.V.col(j) = -f.V.col(j);
    }
  }
  return f;
}

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

}  // namespace mtrsvd
