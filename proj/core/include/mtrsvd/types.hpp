#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace mtrsvd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Seed for the deterministic Gaussian stream. Identical seeds reproduce
/// identical matrices bit-for-bit on one platform.
struct RandomSeed {
  std::uint64_t value = 0;
};

/// Derive a child seed from a run seed and a salt (sketch width, trial
/// index, ...). XOR keeps the rule trivially documented and reproducible.
inline RandomSeed derive_seed(RandomSeed seed, std::uint64_t salt) {
  return RandomSeed{seed.value ^ salt};
}

}  // namespace mtrsvd
