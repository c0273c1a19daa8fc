#pragma once

#include <optional>
#include <vector>

#include "mtrsvd/regularizers.hpp"
#include "mtrsvd/types.hpp"

namespace mtrsvd {

/// Golub-Kahan bidiagonalization state. With full reorthogonalization the
/// stored left/right vectors stay orthonormal to ~1e-10.
struct BidiagState {
  std::vector<Vector> Uhat;   // left Lanczos vectors
  std::vector<Vector> Vhat;   // right Lanczos vectors
  std::vector<double> alphas;
  std::vector<double> betas;  // beta_{j+1} values
  bool reorthogonalize = true;
  bool breakdown = false;
  double scale = 0.0;  // running magnitude for the breakdown threshold
};

/// Initialize with a unit-norm starting left vector u1.
BidiagState bidiag_init(const Vector& u1, bool reorthogonalize);

/// Append one recurrence step (two operator applications). Returns false
/// on breakdown (an exact invariant subspace was found); the state is left
/// usable and the breakdown flag is set.
bool lanczos_bidiag_step(const LinearOperator& op, BidiagState& state);

struct LsqrOutcome {
  Vector solution;
  int iterations = 0;
  double final_relative_criterion = 0.0;
  bool converged = false;
  std::vector<double> residual_norms;  // per-iteration estimates, non-increasing
};

/// LSQR for min ||op z - rhs||, started from zero so the minimum 2-norm
/// solution is approached. Stops when ||op^T r|| / (||op|| ||r||) <= tol,
/// with ||op|| estimated from the accumulating bidiagonal matrix.
/// max_iterations <= 0 selects the default 2 * cols.
LsqrOutcome lsqr_solve(const LinearOperator& op, const Vector& rhs, double tol,
                       int max_iterations = 0, bool reorthogonalize = true);

/// Closed-form relative-error bound on ||z - z_bar|| / ||z|| from the
/// stopping tolerance and the conditioning of the projected operator.
/// Returns nullopt when eta = tol * kappa >= 1 (bound inapplicable).
/// With sharper = true the (kappa + 1) factor is replaced by kappa.
std::optional<double> perturbation_diagnostic(double op_norm, double kappa_LV,
                                              double residual_norm, double z_norm,
                                              double tol, bool sharper = false);

}  // namespace mtrsvd
