#include "mtrsvd/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "mtrsvd/kernels.hpp"
#include "mtrsvd/rsvd.hpp"

namespace mtrsvd {

double failure_probability(BoundName name, Index q) {
  switch (name) {
    case BoundName::BasicLogQ:
    case BoundName::Simplified9Sqrt:
      return 3.0 * std::pow(static_cast<double>(q), -static_cast<double>(q));
    case BoundName::BasicExpQ:
    case BoundName::SimplifiedExpQ:
    case BoundName::SevereRefined:
    case BoundName::ModerateRefined:
      return 3.0 * std::exp(-static_cast<double>(q));
    case BoundName::TrsvdCoarse:
    case BoundName::TrsvdImproved:
      return 1.0;  // deterministic given the sketch
  }
  return 1.0;
}

namespace {

double tail_norm(const Vector& sigma, Index k) {
  // (sum_{j > k} sigma_j^2)^{1/2}
  return std::sqrt(sigma.tail(sigma.size() - k).squaredNorm());
}

double exp_q_leading(Index k, Index q) {
  return 1.0 + 16.0 * std::sqrt(1.0 + static_cast<double>(k) /
                                          static_cast<double>(q + 1));
}

// Full spectrum of A including exact zeros; the bounds reference sigma_j
// for j up to min(m, n), which compact_svd drops.
Vector padded_spectrum(const Matrix& A) {
  SvdFactors dense = compact_svd(A);
  Vector sigma = Vector::Zero(std::min(A.rows(), A.cols()));
  sigma.head(dense.rank()) = dense.sigma;
  return sigma;
}

}  // namespace

double eval_bound(BoundName name, const Vector& sigma, Index k, Index q, Index n,
                  const BoundInputs& extra) {
  if (q < 4) throw std::invalid_argument("eval_bound: q must be >= 4");
  if (k < 1 || k + q >= n) throw std::invalid_argument("eval_bound: k + q must be < n");
  if (k >= sigma.size()) throw std::invalid_argument("eval_bound: spectrum too short");
  const double s_next = sigma(k);  // sigma_{k+1}, 1-based
  const double kq = static_cast<double>(k + q);
  const double nk = static_cast<double>(n - k);

  switch (name) {
    case BoundName::BasicLogQ:
      return (1.0 + 6.0 * std::sqrt(kq * static_cast<double>(q) *
                                    std::log(static_cast<double>(q)))) *
                 s_next +
             3.0 * std::sqrt(kq) * tail_norm(sigma, k);
    case BoundName::Simplified9Sqrt:
      return (1.0 + 9.0 * std::sqrt(kq * nk)) * s_next;
    case BoundName::BasicExpQ:
      return exp_q_leading(k, q) * s_next +
             (8.0 * std::sqrt(kq) / static_cast<double>(q + 1)) *
                 tail_norm(sigma, k);
    case BoundName::SimplifiedExpQ:
      return (exp_q_leading(k, q) +
              8.0 * std::sqrt(kq * nk) / static_cast<double>(q + 1)) *
             s_next;
    case BoundName::SevereRefined: {
      if (!extra.rho) throw std::invalid_argument("eval_bound: rho required");
      const double r2 = std::pow(*extra.rho, -2.0);
      // Closed geometric tail sum from the proof chain.
      const double tail =
          r2 * (1.0 - std::pow(r2, static_cast<double>(n - k - 1))) / (1.0 - r2);
      return (exp_q_leading(k, q) + (8.0 * std::sqrt(kq) /
                                     static_cast<double>(q + 1)) *
                                        std::sqrt(1.0 + tail)) *
             s_next;
    }
    case BoundName::ModerateRefined: {
      if (!extra.alpha) throw std::invalid_argument("eval_bound: alpha required");
      const double a = *extra.alpha;
      if (a <= 0.5) throw std::invalid_argument("eval_bound: alpha must be > 1/2");
      const double kd = static_cast<double>(k);
      const double tail = std::sqrt(kd / (2.0 * a - 1.0)) *
                          std::pow((kd + 1.0) / kd, a);
      return (exp_q_leading(k, q) +
              (8.0 * std::sqrt(kq) / static_cast<double>(q + 1)) * tail) *
             s_next;
    }
    case BoundName::TrsvdCoarse:
      if (!extra.projection_error) {
        throw std::invalid_argument("eval_bound: projection_error required");
      }
      return s_next + *extra.projection_error;
    case BoundName::TrsvdImproved:
      if (!extra.projection_error || !extra.sigma_tilde_next) {
        throw std::invalid_argument(
            "eval_bound: projection_error and sigma_tilde_next required");
      }
      return *extra.sigma_tilde_next + *extra.projection_error;
  }
  throw std::invalid_argument("eval_bound: unknown bound");
}

double fit_geometric_rho(const Vector& sigma, Index j_begin, Index j_end) {
  // log sigma_j = log C - j log rho; least-squares slope over the window.
  const Index count = j_end - j_begin + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Index j = j_begin; j <= j_end; ++j) {
    const double x = static_cast<double>(j);
    const double y = std::log(sigma(j - 1));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double nd = static_cast<double>(count);
  const double slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
  return std::exp(-slope);
}

std::pair<double, double> fit_algebraic_alpha_zeta(const Vector& sigma,
                                                   Index j_begin, Index j_end) {
  // log sigma_j = log zeta - alpha log j.
  const Index count = j_end - j_begin + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Index j = j_begin; j <= j_end; ++j) {
    const double x = std::log(static_cast<double>(j));
    const double y = std::log(sigma(j - 1));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double nd = static_cast<double>(count);
  const double slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / nd;
  return {-slope, std::exp(intercept)};
}

std::vector<BoundCheckRecord> empirical_bound_check(const Matrix& A, BoundName spec,
                                                    Index k, Index q, int trials,
                                                    RandomSeed seed,
                                                    const BoundInputs& extra) {
  if (std::min(A.rows(), A.cols()) > 512) {
    throw std::invalid_argument("empirical_bound_check: desk scale only (<= 512)");
  }
  const bool overdetermined = A.rows() >= A.cols();
  // The bound statements are written for the overdetermined sketch; the
  // underdetermined case applies them to A^T, so n is the long dimension.
  const Index n_bound = std::max(A.rows(), A.cols());
  const Vector sigma = padded_spectrum(A);
  const bool trsvd = spec == BoundName::TrsvdCoarse || spec == BoundName::TrsvdImproved;

  std::vector<BoundCheckRecord> records;
  records.reserve(trials);
  for (int trial = 0; trial < trials; ++trial) {
    const RandomSeed trial_seed =
        derive_seed(seed, 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(trial + 1));
    RsvdResult sketch = overdetermined
                            ? rsvd_overdetermined(A, k, q, trial_seed)
                            : rsvd_underdetermined(A, k, q, trial_seed);
    const Matrix projection =
        overdetermined ? Matrix(A - sketch.Q * (sketch.Q.transpose() * A))
                       : Matrix(A - (A * sketch.Q) * sketch.Q.transpose());
    const double projection_error = spectral_norm(projection);

    BoundCheckRecord rec;
    rec.k = k;
    rec.q = q;
    rec.seed = trial_seed;
    if (trsvd) {
      TrsvdApproximation trunc = truncate(sketch, k);
      rec.observed_error = spectral_norm(
          A - trunc.Uk * trunc.Sigmak.asDiagonal() * trunc.Vk.transpose());
      BoundInputs inputs = extra;
      inputs.projection_error = projection_error;
      inputs.sigma_tilde_next = trunc.sigma_tilde_next;
      rec.bound_value = eval_bound(spec, sigma, k, q, n_bound, inputs);
    } else {
      rec.observed_error = projection_error;
      rec.bound_value = eval_bound(spec, sigma, k, q, n_bound, extra);
    }
    // Roundoff slack matters when the bound is exactly zero (exact-rank case).
    rec.held = rec.observed_error <= rec.bound_value + 1e-12 * sigma(0);
    records.push_back(rec);
  }
  return records;
}

std::vector<SharpnessRow> sharpness_report(const Matrix& A,
                                           const std::vector<Index>& k_range,
                                           const std::vector<Index>& q_range,
                                           RandomSeed seed,
                                           const BoundInputs& extra) {
  const bool overdetermined = A.rows() >= A.cols();
  const Index n_bound = std::max(A.rows(), A.cols());
  const Vector sigma = padded_spectrum(A);

  // Refined bound selection: severe when rho is supplied, else moderate.
  const bool severe = extra.rho.has_value();
  BoundInputs inputs = extra;
  if (!severe && !inputs.alpha) {
    Index hi = sigma.size();
    while (hi > 1 && sigma(hi - 1) <= 0.0) --hi;
    auto [alpha, zeta] = fit_algebraic_alpha_zeta(sigma, 2, std::min<Index>(hi, 60));
    inputs.alpha = alpha;
  }

  std::vector<SharpnessRow> rows;
  for (Index q : q_range) {
    for (Index k : k_range) {
      if (k + q >= std::min(A.rows(), A.cols())) continue;
      const RandomSeed cell_seed =
          derive_seed(seed, (static_cast<std::uint64_t>(k) << 32) |
                                static_cast<std::uint64_t>(q));
      RsvdResult sketch = overdetermined
                              ? rsvd_overdetermined(A, k, q, cell_seed)
                              : rsvd_underdetermined(A, k, q, cell_seed);
      const Matrix projection =
          overdetermined ? Matrix(A - sketch.Q * (sketch.Q.transpose() * A))
                         : Matrix(A - (A * sketch.Q) * sketch.Q.transpose());
      SharpnessRow row;
      row.k = k;
      row.q = q;
      row.observed = spectral_norm(projection);
      row.simplified_9sqrt =
          eval_bound(BoundName::Simplified9Sqrt, sigma, k, q, n_bound);
      row.simplified_expq =
          eval_bound(BoundName::SimplifiedExpQ, sigma, k, q, n_bound);
      row.refined = eval_bound(
          severe ? BoundName::SevereRefined : BoundName::ModerateRefined,
          sigma, k, q, n_bound, inputs);
      row.refined_is_severe = severe;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string to_string(BoundName name) {
  switch (name) {
    case BoundName::BasicLogQ: return "basic_logq";
    case BoundName::Simplified9Sqrt: return "simplified_9sqrt";
    case BoundName::BasicExpQ: return "basic_expq";
    case BoundName::SimplifiedExpQ: return "simplified_expq";
    case BoundName::SevereRefined: return "severe_refined";
    case BoundName::ModerateRefined: return "moderate_refined";
    case BoundName::TrsvdCoarse: return "trsvd_coarse";
    case BoundName::TrsvdImproved: return "trsvd_improved";
  }
  return "?";
}

BoundName bound_name_from_string(const std::string& s) {
  if (s == "basic_logq") return BoundName::BasicLogQ;
  if (s == "simplified_9sqrt") return BoundName::Simplified9Sqrt;
  if (s == "basic_expq") return BoundName::BasicExpQ;
  if (s == "simplified_expq") return BoundName::SimplifiedExpQ;
  if (s == "severe_refined") return BoundName::SevereRefined;
  if (s == "moderate_refined") return BoundName::ModerateRefined;
  if (s == "trsvd_coarse") return BoundName::TrsvdCoarse;
  if (s == "trsvd_improved") return BoundName::TrsvdImproved;
  throw std::invalid_argument("unknown bound name: " + s);
}

}  // namespace mtrsvd
