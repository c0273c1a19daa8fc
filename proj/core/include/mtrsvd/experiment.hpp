#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtrsvd/regularizers.hpp"
#include "mtrsvd/types.hpp"

namespace mtrsvd {

/// One entry of the problem list: a generator name ("shaw", "gravity",
/// "heat", "deriv2"), a synthetic spectrum ("geometric:RHO" or
/// "algebraic:ALPHA[:ZETA]"), or external files.
struct ProblemSpec {
  std::string name;
  std::optional<std::filesystem::path> matrix_path;  // Matrix Market A
  std::optional<std::filesystem::path> rhs_path;     // plain-text b
  std::optional<std::filesystem::path> xtrue_path;   // plain-text x_true
};

struct BoundsSection {
  std::vector<std::string> specs;  // bound names, e.g. "basic_expq"
  std::vector<Index> ks;
  std::vector<Index> qs;
  int trials = 200;
};

struct ExperimentConfig {
  enum class Mode { Scan, OracleCompare, Bounds, Sharpness };

  Mode mode = Mode::Scan;
  std::vector<ProblemSpec> problems;
  Index n = 256;
  RegKind L_kind = RegKind::L1;
  std::vector<double> epsilons;
  Index q_default = 9;
  std::map<std::string, Index> q_per_problem;
  double tol = 1e-6;
  Index k_max_default = 20;
  std::map<std::string, Index> k_max_per_problem;
  std::vector<std::uint64_t> seeds;
  BoundsSection bounds;

  Index q_for(const std::string& problem) const;
  Index k_max_for(const std::string& problem) const;

  /// Parse the structured config file (JSON dialect) and validate every
  /// downstream parameter constraint before any run starts.
  static ExperimentConfig load(const std::filesystem::path& path);

  void validate() const;
};

/// Execute the configured experiment; writes results.csv (scan),
/// per-cell curve .dat files, deviations.csv (oracle-compare),
/// bounds.csv (bounds) or sharpness_<problem>.csv (sharpness) under
/// out_dir. Deterministic given the config, regardless of thread count.
/// Returns 0 on success.
int run_experiment(const ExperimentConfig& config,
                   const std::filesystem::path& out_dir, int threads = 1,
                   std::optional<std::uint64_t> seed_override = std::nullopt);

/// Aggregate results.csv into summary.csv: one row per config cell with
/// median/min/max best error, median k0 and median total inner iterations.
void summarize(const std::filesystem::path& results_path,
               const std::filesystem::path& out_path);

extern const char* const kResultsHeader;

}  // namespace mtrsvd
