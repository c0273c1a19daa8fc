#include "mtrsvd/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mtrsvd/kernels.hpp"

namespace mtrsvd {

namespace {

using std::numbers::pi;

// One dimensional image restoration model on [-pi/2, pi/2], midpoint
// quadrature. Severely ill-posed.
IllPosedProblem make_shaw(Index n) {
  if (n % 2 != 0) throw std::invalid_argument("shaw: n must be even");
  const double h = pi / static_cast<double>(n);
  Vector s(n);
  for (Index i = 0; i < n; ++i) {
    s(i) = (static_cast<double>(i) + 0.5) * h - pi / 2.0;
  }
  Matrix A(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double co = std::cos(s(i)) + std::cos(s(j));
      const double u = pi * (std::sin(s(i)) + std::sin(s(j)));
      const double sinc = (u != 0.0) ? std::sin(u) / u : 1.0;
      A(i, j) = h * co * co * sinc * sinc;
    }
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    const double t = s(i);
    x(i) = 2.0 * std::exp(-6.0 * (t - 0.8) * (t - 0.8)) +
           std::exp(-2.0 * (t + 0.5) * (t + 0.5));
  }
  return {std::move(A), Vector(), std::move(x), "shaw", Illposedness::Severe};
}

// One dimensional gravity surveying problem on [0, 1], source depth 0.25.
// Severely ill-posed.
IllPosedProblem make_gravity(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  const double depth = 0.25;
  Vector t(n);
  for (Index i = 0; i < n; ++i) t(i) = (static_cast<double>(i) + 0.5) * h;
  Matrix A(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double dst = t(i) - t(j);
      A(i, j) = h * depth / std::pow(depth * depth + dst * dst, 1.5);
    }
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    x(i) = std::sin(pi * t(i)) + 0.5 * std::sin(2.0 * pi * t(i));
  }
  return {std::move(A), Vector(), std::move(x), "gravity", Illposedness::Severe};
}

// Inverse heat equation: lower-triangular Toeplitz discretization of the
// Volterra kernel, unit diffusivity. Moderately ill-posed.
IllPosedProblem make_heat(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  const double c = h / (2.0 * std::sqrt(pi));
  Matrix A = Matrix::Zero(n, n);
  Vector column(n);
  for (Index i = 0; i < n; ++i) {
    const double tau = (static_cast<double>(i) + 0.5) * h;
    column(i) = c * std::pow(tau, -1.5) * std::exp(-1.0 / (4.0 * tau));
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      A(i, j) = column(i - j);
    }
  }
  // Hump-shaped initial temperature profile.
  Vector x = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i + 1) * 20.0 / static_cast<double>(n);
    if (ti < 2.0) {
      x(i) = 0.75 * ti * ti / 4.0;
    } else if (ti < 3.0) {
      x(i) = 0.75 + (ti - 2.0) * (3.0 - ti);
    } else {
      x(i) = 0.75 * std::exp(-(ti - 3.0) * 2.0);
    }
  }
  return {std::move(A), Vector(), std::move(x), "heat", Illposedness::Moderate};
}

// Computation of the second derivative via the Green's function kernel of
// -d^2/dt^2 on [0, 1], x_true(t) = e^t. Mildly ill-posed.
IllPosedProblem make_deriv2(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  Vector t(n);
  for (Index i = 0; i < n; ++i) t(i) = (static_cast<double>(i) + 0.5) * h;
  Matrix A(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double si = t(i), tj = t(j);
      A(i, j) = h * (si < tj ? si * (tj - 1.0) : tj * (si - 1.0));
    }
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = std::exp(t(i));
  return {std::move(A), Vector(), std::move(x), "deriv2", Illposedness::Mild};
}

}  // namespace

IllPosedProblem generate(const std::string& name, Index n) {
  if (n < 16) throw std::invalid_argument("generate: n must be >= 16");
  IllPosedProblem p;
  if (name == "shaw") {
    p = make_shaw(n);
  } else if (name == "gravity") {
    p = make_gravity(n);
  } else if (name == "heat") {
    p = make_heat(n);
  } else if (name == "deriv2") {
    p = make_deriv2(n);
  } else {
    throw std::invalid_argument("generate: unsupported problem '" + name + "'");
  }
  // Consistency by construction.
  p.b_true = p.A * p.x_true;
  return p;
}

NoisyProblem add_noise(const IllPosedProblem& p, double epsilon, RandomSeed seed) {
  if (epsilon <= 0.0) throw std::invalid_argument("add_noise: epsilon must be > 0");
  Vector e = gaussian_matrix(p.b_true.size(), 1, seed).col(0);
  e *= epsilon * p.b_true.norm() / e.norm();
  NoisyProblem noisy;
  noisy.base = p;
  noisy.b = p.b_true + e;
  noisy.epsilon = epsilon;
  noisy.noise_seed = seed;
  return noisy;
}

Vector prescribed_spectrum(const Spectrum& spec, Index count) {
  Vector sigma(count);
  if (spec.kind == Spectrum::Kind::Geometric) {
    if (spec.rho <= 1.0) {
      throw std::invalid_argument("synthetic spectrum: rho must be > 1");
    }
    for (Index j = 0; j < count; ++j) {
      sigma(j) = std::pow(spec.rho, -static_cast<double>(j + 1));
    }
  } else {
    if (spec.alpha <= 0.5) {
      throw std::invalid_argument("synthetic spectrum: alpha must be > 1/2");
    }
    if (spec.zeta <= 0.0) {
      throw std::invalid_argument("synthetic spectrum: zeta must be > 0");
    }
    for (Index j = 0; j < count; ++j) {
      sigma(j) = spec.zeta * std::pow(static_cast<double>(j + 1), -spec.alpha);
    }
  }
  return sigma;
}

Matrix synthetic_spectrum_matrix(const Spectrum& spec, Index m, Index n,
                                 RandomSeed seed) {
  const Index s = std::min(m, n);
  Vector sigma = prescribed_spectrum(spec, s);
  auto [U, Ru] = householder_qr(gaussian_matrix(m, s, derive_seed(seed, 0x5eedu)));
  auto [V, Rv] = householder_qr(gaussian_matrix(n, s, derive_seed(seed, 0xfeedu)));
  return U * sigma.asDiagonal() * V.transpose();
}

}  // namespace mtrsvd
