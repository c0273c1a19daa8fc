#pragma once

#include <optional>
#include <vector>

#include "mtrsvd/lsqr.hpp"
#include "mtrsvd/problems.hpp"
#include "mtrsvd/regularizers.hpp"
#include "mtrsvd/rsvd.hpp"

namespace mtrsvd {

struct MtrsvdOptions {
  double tol = 1e-6;
  int max_iterations = 0;  // <= 0: 2 * (n - k)
  bool reorthogonalize = true;
};

struct MtrsvdSolution {
  Vector x_k;
  Vector z_k;
  Vector x_Lk;  // x_k - z_k
  Index k = 0;
  Index q = 0;
  LsqrOutcome inner;
};

/// x_k = Vk * Sigmak^{-1} * Uk^T * b, the minimum 2-norm solution of
/// min ||A_k x - b|| for the truncated factors.
Vector minimum_norm_solution(const TrsvdApproximation& approx, const Vector& b);

/// Seed used for the fresh sketch at width l during scans.
inline RandomSeed sketch_seed(RandomSeed run_seed, Index l) {
  return derive_seed(run_seed, static_cast<std::uint64_t>(l));
}

/// One regularized solve at truncation index k: TRSVD approximation,
/// minimum-norm x_k, LSQR correction z_k, and x_{L,k} = x_k - z_k.
/// Square matrices are routed through the overdetermined sketch.
MtrsvdSolution mtrsvd_solve(const Matrix& A, const Vector& b, const BandedOperator& L,
                            Index k, Index q, RandomSeed seed,
                            const MtrsvdOptions& opts = {});

/// Same, reusing an already computed truncation (avoids re-sketching).
MtrsvdSolution mtrsvd_solve_from(const TrsvdApproximation& approx, const Vector& b,
                                 const BandedOperator& L, Index q,
                                 const MtrsvdOptions& opts = {});

struct ScanRecord {
  Index k = 0;
  double relative_L_error = 0.0;  // NaN when x_true unknown
  double residual = 0.0;          // ||A x - b||
  double seminorm = 0.0;          // ||L x||
  int inner_iterations = 0;
  bool inner_converged = true;
};

enum class SelectionMethod { APriori, LCurve };

struct SemiConvergenceReport {
  std::vector<ScanRecord> records;  // k = 1..k_max contiguously
  Index k0 = 0;
  SelectionMethod selection_method = SelectionMethod::APriori;
};

/// Run mtrsvd_solve for k = 1..k_max with a fresh sketch at l = k + q per
/// step. k0 is the argmin of the relative L-error when x_true is known,
/// otherwise the L-curve corner.
SemiConvergenceReport semiconvergence_scan(const NoisyProblem& problem,
                                           const BandedOperator& L, Index q,
                                           double tol, Index k_max, RandomSeed seed,
                                           bool x_true_known = true);

/// Index of maximum discrete curvature of the log-log polyline of
/// (residual, seminorm) points. Throws on fewer than 4 points; returns
/// nullopt when the log points are collinear (no corner).
std::optional<std::size_t> lcurve_corner(
    const std::vector<std::pair<double, double>>& points);

/// Brute-force reference: exact dense SVD, best rank-k A_k, x_k = A_k^+ b,
/// and the correction via a dense pseudoinverse of L(I - Vk Vk^T).
/// Guarded to min(m, n) <= 512.
Vector dense_oracle_solution(const Matrix& A, const Vector& b,
                             const BandedOperator& L, Index k);

/// Dense-pseudoinverse correction on given factors; the oracle side of the
/// LSQR-vs-dense equivalence checks.
Vector dense_projected_solution(const BandedOperator& L, const Matrix& Vk,
                                const Vector& x_k);

}  // namespace mtrsvd
