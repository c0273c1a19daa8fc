#include "mtrsvd/lsqr.hpp"

#include <cmath>
#include <stdexcept>

namespace mtrsvd {

namespace {

constexpr double kBreakdownFactor = 1e-14;

void reorthogonalize_against(Vector& w, const std::vector<Vector>& basis) {
  // Modified Gram-Schmidt against all stored vectors.
  for (const Vector& b : basis) {
    w -= b.dot(w) * b;
  }
}

// Largest singular value of the lower-bidiagonal matrix with diagonal
// alphas and subdiagonal betas, by power iteration on B^T B. The matrix is
// tiny relative to the outer problem, so a fixed iteration count suffices.
double bidiag_sigma_max(const std::vector<double>& alphas,
                        const std::vector<double>& betas) {
  const std::size_t j = alphas.size();
  if (j == 0) return 0.0;
  Vector x = Vector::Ones(static_cast<Index>(j));
  x.normalize();
  double norm = 0.0;
  for (int it = 0; it < 20; ++it) {
    // y = B x (length j+1), then x' = B^T y.
    Vector y = Vector::Zero(static_cast<Index>(j + 1));
    for (std::size_t i = 0; i < j; ++i) {
      y(static_cast<Index>(i)) += alphas[i] * x(static_cast<Index>(i));
      if (i < betas.size()) {
        y(static_cast<Index>(i + 1)) += betas[i] * x(static_cast<Index>(i));
      }
    }
    Vector xn = Vector::Zero(static_cast<Index>(j));
    for (std::size_t i = 0; i < j; ++i) {
      xn(static_cast<Index>(i)) += alphas[i] * y(static_cast<Index>(i));
      if (i < betas.size()) {
        xn(static_cast<Index>(i)) += betas[i] * y(static_cast<Index>(i + 1));
      }
    }
    norm = std::sqrt(xn.norm());
    if (norm == 0.0) return 0.0;
    x = xn / xn.norm();
  }
  return norm;
}

}  // namespace

BidiagState bidiag_init(const Vector& u1, bool reorthogonalize) {
  BidiagState state;
  state.reorthogonalize = reorthogonalize;
  state.Uhat.push_back(u1);
  state.scale = u1.norm();
  return state;
}

bool lanczos_bidiag_step(const LinearOperator& op, BidiagState& state) {
  if (state.breakdown) return false;
  const Vector& u_j = state.Uhat.back();
  Vector p = op.apply_transpose(u_j);
  if (!state.Vhat.empty()) {
    p -= state.betas.back() * state.Vhat.back();
  }
  if (state.reorthogonalize) reorthogonalize_against(p, state.Vhat);

  const double alpha = p.norm();
  state.scale = std::max(state.scale, alpha);
  if (alpha <= kBreakdownFactor * state.scale) {
    state.breakdown = true;
    return false;
  }
  state.alphas.push_back(alpha);
  state.Vhat.push_back(p / alpha);

  Vector r = op.apply(state.Vhat.back()) - alpha * u_j;
  if (state.reorthogonalize) reorthogonalize_against(r, state.Uhat);

  const double beta = r.norm();
  state.scale = std::max(state.scale, beta);
  if (beta <= kBreakdownFactor * state.scale) {
    state.breakdown = true;
    return false;
  }
  state.betas.push_back(beta);
  state.Uhat.push_back(r / beta);
  return true;
}

LsqrOutcome lsqr_solve(const LinearOperator& op, const Vector& rhs, double tol,
                       int max_iterations, bool reorthogonalize) {
  if (tol <= 0.0) throw std::invalid_argument("lsqr_solve: tol must be > 0");
  if (rhs.size() != op.rows) {
    throw std::invalid_argument("lsqr_solve: rhs dimension mismatch");
  }
  if (max_iterations <= 0) max_iterations = static_cast<int>(2 * op.cols);

  LsqrOutcome out;
  out.solution = Vector::Zero(op.cols);

  const double beta1 = rhs.norm();
  if (beta1 == 0.0) {
    out.converged = true;
    return out;
  }

  std::vector<Vector> u_basis;
  std::vector<Vector> v_basis;
  std::vector<double> alphas;
  std::vector<double> betas;

  Vector u = rhs / beta1;
  Vector p = op.apply_transpose(u);
  double alpha = p.norm();
  double scale = std::max(beta1, alpha);
  if (alpha <= kBreakdownFactor * scale) {
    // rhs is orthogonal to the range of op: z = 0 is the solution.
    out.converged = true;
    return out;
  }
  Vector v = p / alpha;
  alphas.push_back(alpha);
  if (reorthogonalize) {
    u_basis.push_back(u);
    v_basis.push_back(v);
  }

  Vector w = v;
  double phibar = beta1;
  double rhobar = alpha;

  for (int iter = 1; iter <= max_iterations; ++iter) {
    Vector u_next = op.apply(v) - alpha * u;
    if (reorthogonalize) reorthogonalize_against(u_next, u_basis);
    const double beta = u_next.norm();
    scale = std::max(scale, beta);

    double alpha_next = 0.0;
    bool breakdown = beta <= kBreakdownFactor * scale;
    if (!breakdown) {
      u = u_next / beta;
      if (reorthogonalize) u_basis.push_back(u);
      betas.push_back(beta);

      Vector v_next = op.apply_transpose(u) - beta * v;
      if (reorthogonalize) reorthogonalize_against(v_next, v_basis);
      alpha_next = v_next.norm();
      scale = std::max(scale, alpha_next);
      if (alpha_next <= kBreakdownFactor * scale) {
        breakdown = true;
      } else {
        v = v_next / alpha_next;
        if (reorthogonalize) v_basis.push_back(v);
        alphas.push_back(alpha_next);
      }
    }

    // Givens rotation eliminating the subdiagonal beta.
    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha_next;
    rhobar = -c * alpha_next;
    const double phi = c * phibar;
    phibar = s * phibar;

    out.solution += (phi / rho) * w;
    w = v - (theta / rho) * w;
    out.iterations = iter;

    if (!out.solution.allFinite()) {
      throw std::runtime_error("lsqr_solve: numerical failure (non-finite iterate)");
    }

    const double rnorm = phibar;
    out.residual_norms.push_back(rnorm);

    if (breakdown) {
      // Exact invariant subspace found; the iterate is the exact solution.
      out.final_relative_criterion = 0.0;
      out.converged = true;
      return out;
    }

    const double arnorm = phibar * alpha_next * std::abs(c);
    const double op_norm_est = bidiag_sigma_max(alphas, betas);
    const double denom = op_norm_est * rnorm;
    const double criterion = denom > 0.0 ? arnorm / denom : 0.0;
    out.final_relative_criterion = criterion;
    if (criterion <= tol || rnorm <= 1e-15 * beta1) {
      out.converged = true;
      return out;
    }
  }
  out.converged = false;
  return out;
}

std::optional<double> perturbation_diagnostic(double op_norm, double kappa_LV,
                                              double residual_norm, double z_norm,
                                              double tol, bool sharper) {
  if (op_norm <= 0.0 || kappa_LV <= 0.0 || z_norm <= 0.0 || residual_norm < 0.0 ||
      tol < 0.0) {
    throw std::invalid_argument("perturbation_diagnostic: invalid inputs");
  }
  const double eta = tol * kappa_LV;
  if (eta >= 1.0) return std::nullopt;
  const double factor = sharper ? kappa_LV : kappa_LV + 1.0;
  return (tol * kappa_LV / (1.0 - eta)) *
         (2.0 + factor * residual_norm / (op_norm * z_norm));
}

}  // namespace mtrsvd
