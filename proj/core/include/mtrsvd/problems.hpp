#pragma once

#include <string>

#include "mtrsvd/types.hpp"

namespace mtrsvd {

enum class Illposedness { Severe, Moderate, Mild };

/// Square discretization of a first-kind Fredholm integral equation with a
/// known true solution. Consistent by construction: b_true = A * x_true.
struct IllPosedProblem {
  Matrix A;
  Vector b_true;
  Vector x_true;
  std::string name;
  Illposedness declared_illposedness = Illposedness::Moderate;
};

/// Problem with a noisy right-hand side b = b_true + e, where e is Gaussian
/// rescaled so that ||e|| / ||b_true|| equals epsilon exactly.
struct NoisyProblem {
  IllPosedProblem base;
  Vector b;
  double epsilon = 0.0;
  RandomSeed noise_seed;
};

/// shaw | gravity | heat | deriv2 at size n x n (n >= 16; even for shaw).
IllPosedProblem generate(const std::string& name, Index n);

NoisyProblem add_noise(const IllPosedProblem& p, double epsilon, RandomSeed seed);

/// Prescribed-spectrum matrix with Haar-random orthonormal factors.
struct Spectrum {
  enum class Kind { Geometric, Algebraic } kind;
  double rho = 2.0;    // geometric: sigma_j = rho^{-j}, rho > 1
  double alpha = 1.0;  // algebraic: sigma_j = zeta * j^{-alpha}, alpha > 1/2
  double zeta = 1.0;

  static Spectrum geometric(double rho) { return {Kind::Geometric, rho, 0, 0}; }
  static Spectrum algebraic(double alpha, double zeta) {
    return {Kind::Algebraic, 0, alpha, zeta};
  }
};

Matrix synthetic_spectrum_matrix(const Spectrum& spec, Index m, Index n,
                                 RandomSeed seed);

/// The singular values the synthetic constructor prescribes.
Vector prescribed_spectrum(const Spectrum& spec, Index count);

}  // namespace mtrsvd
