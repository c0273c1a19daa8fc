#include "mtrsvd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

namespace mtrsvd {

Vector minimum_norm_solution(const TrsvdApproximation& approx, const Vector& b) {
  if (b.size() != approx.Uk.rows()) {
    throw std::invalid_argument("minimum_norm_solution: b dimension mismatch");
  }
  Vector coeffs = approx.Uk.transpose() * b;
  coeffs.array() /= approx.Sigmak.array();
  return approx.Vk * coeffs;
}

MtrsvdSolution mtrsvd_solve_from(const TrsvdApproximation& approx, const Vector& b,
                                 const BandedOperator& L, Index q,
                                 const MtrsvdOptions& opts) {
  MtrsvdSolution sol;
  sol.k = approx.k();
  sol.q = q;
  sol.x_k = minimum_norm_solution(approx, b);

  const Vector rhs = L.apply(sol.x_k);
  LinearOperator op = projected_regularizer(L, approx.Vk);
  int max_it = opts.max_iterations;
  if (max_it <= 0) max_it = static_cast<int>(2 * (L.cols() - sol.k));
  sol.inner = lsqr_solve(op, rhs, opts.tol, max_it, opts.reorthogonalize);
  sol.z_k = sol.inner.solution;
  sol.x_Lk = sol.x_k - sol.z_k;
  return sol;
}

MtrsvdSolution mtrsvd_solve(const Matrix& A, const Vector& b, const BandedOperator& L,
                            Index k, Index q, RandomSeed seed,
                            const MtrsvdOptions& opts) {
  // Square matrices go through the overdetermined path.
  RsvdResult sketch = (A.rows() >= A.cols())
                          ? rsvd_overdetermined(A, k, q, seed)
                          : rsvd_underdetermined(A, k, q, seed);
  return mtrsvd_solve_from(truncate(sketch, k), b, L, q, opts);
}

SemiConvergenceReport semiconvergence_scan(const NoisyProblem& problem,
                                           const BandedOperator& L, Index q,
                                           double tol, Index k_max, RandomSeed seed,
                                           bool x_true_known) {
  const Matrix& A = problem.base.A;
  if (k_max + q >= std::min(A.rows(), A.cols())) {
    throw std::invalid_argument("semiconvergence_scan: k_max + q too large");
  }
  const double Lx_true_norm =
      x_true_known ? L.apply(problem.base.x_true).norm() : 0.0;

  MtrsvdOptions opts;
  opts.tol = tol;

  SemiConvergenceReport report;
  report.records.reserve(k_max);
  for (Index k = 1; k <= k_max; ++k) {
    RsvdResult sketch = (A.rows() >= A.cols())
                            ? rsvd_overdetermined(A, k, q, sketch_seed(seed, k + q))
                            : rsvd_underdetermined(A, k, q, sketch_seed(seed, k + q));
    // The numerical rank of the sketch caps the reachable truncation index.
    if (sketch.l() < k) break;
    MtrsvdSolution sol = mtrsvd_solve_from(truncate(sketch, k), problem.b, L, q, opts);
    ScanRecord rec;
    rec.k = k;
    rec.relative_L_error =
        x_true_known
            ? L.apply(sol.x_Lk - problem.base.x_true).norm() / Lx_true_norm
            : std::numeric_limits<double>::quiet_NaN();
    rec.residual = (A * sol.x_Lk - problem.b).norm();
    rec.seminorm = L.apply(sol.x_Lk).norm();
    rec.inner_iterations = sol.inner.iterations;
    rec.inner_converged = sol.inner.converged;
    report.records.push_back(rec);
  }

  if (x_true_known) {
    report.selection_method = SelectionMethod::APriori;
    Index best = 1;
    double best_err = report.records.front().relative_L_error;
    for (const ScanRecord& rec : report.records) {
      if (rec.relative_L_error < best_err) {
        best_err = rec.relative_L_error;
        best = rec.k;
      }
    }
    report.k0 = best;
  } else {
    report.selection_method = SelectionMethod::LCurve;
    std::vector<std::pair<double, double>> points;
    points.reserve(report.records.size());
    for (const ScanRecord& rec : report.records) {
      points.emplace_back(rec.residual, rec.seminorm);
    }
    auto corner = lcurve_corner(points);
    report.k0 = corner ? static_cast<Index>(*corner) + 1 : 1;
  }
  return report;
}

std::optional<std::size_t> lcurve_corner(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) {
    throw std::invalid_argument("lcurve_corner: need at least 4 points");
  }
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first <= 0.0 || points[i].second <= 0.0) {
      throw std::invalid_argument("lcurve_corner: points must be positive");
    }
    xs[i] = std::log10(points[i].first);
    ys[i] = std::log10(points[i].second);
  }
  // Normalize both log axes to [0, 1] so the curvature comparison is not
  // dominated by whichever axis happens to span more decades.
  for (std::vector<double>* axis : {&xs, &ys}) {
    const auto [lo_it, hi_it] = std::minmax_element(axis->begin(), axis->end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi > lo) {
      for (double& value : *axis) value = (value - lo) / (hi - lo);
    }
  }
  // Discrete curvature from the circumscribed circle of each interior
  // vertex and its neighbors: kappa = 4 * area / (|ab| |bc| |ca|).
  double best_curv = 0.0;
  std::size_t best_index = 0;
  bool found = false;
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const double ax = xs[i - 1], ay = ys[i - 1];
    const double bx = xs[i], by = ys[i];
    const double cx = xs[i + 1], cy = ys[i + 1];
    const double area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    const double ab = std::hypot(bx - ax, by - ay);
    const double bc = std::hypot(cx - bx, cy - by);
    const double ca = std::hypot(cx - ax, cy - ay);
    if (ab == 0.0 || bc == 0.0 || ca == 0.0) continue;
    const double curv = 2.0 * std::abs(area2) / (ab * bc * ca);
    if (!found || curv > best_curv) {
      best_curv = curv;
      best_index = i;
      found = true;
    }
  }
  if (!found || best_curv < 1e-10) return std::nullopt;  // collinear in log scale
  return best_index;
}

Vector dense_projected_solution(const BandedOperator& L, const Matrix& Vk,
                                const Vector& x_k) {
  Matrix M = L.dense();
  if (Vk.cols() > 0) {
    M -= (M * Vk) * Vk.transpose();
  }
  const Vector rhs = L.apply(x_k);
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? 1e-10 * s(0) : 0.0;
  Vector coeffs = svd.matrixU().transpose() * rhs;
  for (Index j = 0; j < s.size(); ++j) {
    coeffs(j) = (s(j) > cutoff) ? coeffs(j) / s(j) : 0.0;
  }
  return svd.matrixV() * coeffs;
}

Vector dense_oracle_solution(const Matrix& A, const Vector& b,
                             const BandedOperator& L, Index k) {
  if (std::min(A.rows(), A.cols()) > 512) {
    throw std::invalid_argument("dense_oracle_solution: desk scale only (<= 512)");
  }
  SvdFactors f = compact_svd(A);
  if (k < 1 || k > f.rank()) {
    throw std::invalid_argument("dense_oracle_solution: invalid k");
  }
  TrsvdApproximation exact;
  exact.Uk = f.U.leftCols(k);
  exact.Sigmak = f.sigma.head(k);
  exact.Vk = f.V.leftCols(k);
  exact.sigma_tilde_next = (k < f.rank()) ? f.sigma(k) : 0.0;

  Vector x_k = minimum_norm_solution(exact, b);
  return x_k - dense_projected_solution(L, exact.Vk, x_k);
}

}  // namespace mtrsvd
