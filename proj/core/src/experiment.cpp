#include "mtrsvd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mtrsvd/bounds.hpp"
#include "mtrsvd/io.hpp"
#include "mtrsvd/kernels.hpp"
#include "mtrsvd/problems.hpp"
#include "mtrsvd/solver.hpp"

namespace mtrsvd {

const char* const kResultsHeader =
    "problem,n,L,epsilon,q,seed,k,relative_L_error,residual,seminorm,"
    "inner_iterations,is_k0";

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::optional<Spectrum> parse_spectrum(const std::string& name) {
  auto parse_tail = [](const std::string& tail) {
    std::vector<double> vals;
    std::istringstream in(tail);
    std::string item;
    while (std::getline(in, item, ':')) vals.push_back(std::stod(item));
    return vals;
  };
  if (name.rfind("geometric:", 0) == 0) {
    auto vals = parse_tail(name.substr(10));
    if (vals.size() != 1) {
      throw std::invalid_argument("problem '" + name + "': expected geometric:RHO");
    }
    return Spectrum::geometric(vals[0]);
  }
  if (name.rfind("algebraic:", 0) == 0) {
    auto vals = parse_tail(name.substr(10));
    if (vals.empty() || vals.size() > 2) {
      throw std::invalid_argument("problem '" + name +
                                  "': expected algebraic:ALPHA[:ZETA]");
    }
    return Spectrum::algebraic(vals[0], vals.size() == 2 ? vals[1] : 1.0);
  }
  return std::nullopt;
}

bool is_generator(const std::string& name) {
  return name == "shaw" || name == "gravity" || name == "heat" || name == "deriv2";
}

IllPosedProblem build_problem(const ProblemSpec& spec, Index n) {
  if (spec.matrix_path) {
    IllPosedProblem p;
    p.A = io::read_matrix_market(*spec.matrix_path);
    p.name = spec.name;
    p.declared_illposedness = Illposedness::Moderate;
    if (spec.xtrue_path) {
      p.x_true = io::read_vector(*spec.xtrue_path);
      if (p.x_true.size() != p.A.cols()) {
        throw std::runtime_error("x_true dimension mismatch for " + spec.name);
      }
      p.b_true = p.A * p.x_true;
    }
    if (spec.rhs_path) {
      p.b_true = io::read_vector(*spec.rhs_path);
      if (p.b_true.size() != p.A.rows()) {
        throw std::runtime_error("rhs dimension mismatch for " + spec.name);
      }
    }
    if (p.b_true.size() == 0) {
      throw std::runtime_error("problem " + spec.name + " needs rhs or x_true");
    }
    return p;
  }
  if (auto spectrum = parse_spectrum(spec.name)) {
    IllPosedProblem p;
    // The matrix is pinned by the problem name alone so that every run
    // seed sees the same instance.
    p.A = synthetic_spectrum_matrix(*spectrum, n, n, RandomSeed{fnv1a(spec.name)});
    p.x_true = Vector(n);
    for (Index i = 0; i < n; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      p.x_true(i) = std::sin(std::acos(-1.0) * t) +
                    0.5 * std::sin(2.0 * std::acos(-1.0) * t);
    }
    p.b_true = p.A * p.x_true;
    p.name = spec.name;
    p.declared_illposedness = spectrum->kind == Spectrum::Kind::Geometric
                                  ? Illposedness::Severe
                                  : Illposedness::Moderate;
    return p;
  }
  return generate(spec.name, n);
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (c == ':' || c == '/' || c == '.') c = '_';
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return (v.size() % 2 == 1) ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct ScanCell {
  std::size_t problem_index;
  double epsilon;
  std::uint64_t seed;
};

struct ScanCellResult {
  SemiConvergenceReport report;
  bool x_true_known = true;
  std::string error;
};

void write_scan_outputs(const ExperimentConfig& config,
                        const std::filesystem::path& out_dir,
                        const std::vector<ScanCell>& cells,
                        const std::vector<ScanCellResult>& results,
                        std::ofstream& csv) {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!results[c].error.empty()) continue;
    const ProblemSpec& spec = config.problems[cells[c].problem_index];
    const Index q = config.q_for(spec.name);
    const std::string base =
        sanitize(spec.name) + "_n" + std::to_string(config.n) + "_" +
        to_string(config.L_kind) + "_eps" + io::format_double(cells[c].epsilon) +
        "_q" + std::to_string(q) + "_seed" + std::to_string(cells[c].seed);

    const SemiConvergenceReport& report = results[c].report;
    std::ofstream err_dat(out_dir / (base + "_error.dat"));
    std::ofstream iter_dat(out_dir / (base + "_iters.dat"));
    for (const ScanRecord& rec : report.records) {
      csv << spec.name << ',' << config.n << ',' << to_string(config.L_kind)
          << ',' << io::format_double(cells[c].epsilon) << ',' << q << ','
          << cells[c].seed << ',' << rec.k << ','
          << io::format_double(rec.relative_L_error) << ','
          << io::format_double(rec.residual) << ','
          << io::format_double(rec.seminorm) << ',' << rec.inner_iterations
          << ',' << (rec.k == report.k0 ? 1 : 0) << '\n';
      err_dat << rec.k << ' ' << io::format_double(rec.relative_L_error) << '\n';
      iter_dat << rec.k << ' ' << rec.inner_iterations << '\n';
    }
  }
}

int run_scan(const ExperimentConfig& config, const std::filesystem::path& out_dir,
             int threads) {
  std::vector<IllPosedProblem> problems;
  problems.reserve(config.problems.size());
  for (const ProblemSpec& spec : config.problems) {
    problems.push_back(build_problem(spec, config.n));
  }

  std::vector<ScanCell> cells;
  for (std::size_t p = 0; p < config.problems.size(); ++p) {
    for (double eps : config.epsilons) {
      for (std::uint64_t seed : config.seeds) {
        cells.push_back({p, eps, seed});
      }
    }
  }

  std::vector<ScanCellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next.fetch_add(1); c < cells.size();
         c = next.fetch_add(1)) {
      const ScanCell& cell = cells[c];
      const IllPosedProblem& base = problems[cell.problem_index];
      try {
        BandedOperator L = build_regularizer(config.L_kind, base.A.cols());
        NoisyProblem noisy = add_noise(base, cell.epsilon,
                                       derive_seed(RandomSeed{cell.seed}, 0xabcdefull));
        const bool known = base.x_true.size() > 0;
        results[c].x_true_known = known;
        results[c].report = semiconvergence_scan(
            noisy, L, config.q_for(base.name), config.tol,
            config.k_max_for(base.name), RandomSeed{cell.seed}, known);
      } catch (const std::exception& e) {
        results[c].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::max(1, threads);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ofstream csv(out_dir / "results.csv");
  csv << kResultsHeader << '\n';
  write_scan_outputs(config, out_dir, cells, results, csv);

  int status = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!results[c].error.empty()) {
      std::cerr << "cell " << config.problems[cells[c].problem_index].name
                << " eps=" << cells[c].epsilon << " seed=" << cells[c].seed
                << " failed: " << results[c].error << '\n';
      status = 1;
    }
  }
  return status;
}

int run_oracle_compare(const ExperimentConfig& config,
                       const std::filesystem::path& out_dir) {
  std::ofstream csv(out_dir / "deviations.csv");
  csv << "problem,n,L,q,seed,k,deviation\n";
  MtrsvdOptions opts;
  opts.tol = config.tol;

  double overall_max = 0.0;
  for (const ProblemSpec& spec : config.problems) {
    IllPosedProblem p = build_problem(spec, config.n);
    BandedOperator L = build_regularizer(config.L_kind, p.A.cols());
    const Index q = config.q_for(spec.name);
    const Index k_max =
        std::min(config.k_max_for(spec.name),
                 std::min(p.A.rows(), p.A.cols()) - q - 1);
    for (std::uint64_t seed : config.seeds) {
      for (Index k = 1; k <= k_max; ++k) {
        RsvdResult sketch =
            (p.A.rows() >= p.A.cols())
                ? rsvd_overdetermined(p.A, k, q,
                                      sketch_seed(RandomSeed{seed}, k + q))
                : rsvd_underdetermined(p.A, k, q,
                                       sketch_seed(RandomSeed{seed}, k + q));
        if (sketch.l() < k) break;
        TrsvdApproximation approx = truncate(sketch, k);
        MtrsvdSolution sol = mtrsvd_solve_from(approx, p.b_true, L, q, opts);
        // Same truncated approximation, projected step solved densely.
        Vector x_dense =
            sol.x_k - dense_projected_solution(L, approx.Vk, sol.x_k);
        const double deviation =
            (sol.x_Lk - x_dense).norm() / sol.x_Lk.norm();
        overall_max = std::max(overall_max, deviation);
        csv << spec.name << ',' << config.n << ',' << to_string(config.L_kind)
            << ',' << q << ',' << seed << ',' << k << ','
            << io::format_double(deviation) << '\n';
      }
    }
  }
  std::cout << "max relative deviation: " << io::format_double(overall_max)
            << '\n';
  return 0;
}

BoundInputs inputs_for(const std::string& name, const Matrix& A) {
  BoundInputs extra;
  if (auto spectrum = parse_spectrum(name)) {
    if (spectrum->kind == Spectrum::Kind::Geometric) {
      extra.rho = spectrum->rho;
    } else {
      extra.alpha = spectrum->alpha;
    }
    return extra;
  }
  SvdFactors f = compact_svd(A);
  const Index hi = std::min<Index>(f.sigma.size(), 40);
  extra.rho = fit_geometric_rho(f.sigma, 2, hi);
  extra.alpha = fit_algebraic_alpha_zeta(f.sigma, 2, hi).first;
  return extra;
}

int run_bounds(const ExperimentConfig& config,
               const std::filesystem::path& out_dir, std::uint64_t seed) {
  std::ofstream csv(out_dir / "bounds.csv");
  csv << "problem,bound,k,q,trial,observed,bound_value,held\n";
  for (const ProblemSpec& spec : config.problems) {
    IllPosedProblem p = build_problem(spec, config.n);
    BoundInputs extra = inputs_for(spec.name, p.A);
    for (const std::string& bound : config.bounds.specs) {
      const BoundName name = bound_name_from_string(bound);
      for (Index q : config.bounds.qs) {
        for (Index k : config.bounds.ks) {
          if (k + q >= std::min(p.A.rows(), p.A.cols())) continue;
          auto records = empirical_bound_check(
              p.A, name, k, q, config.bounds.trials,
              derive_seed(RandomSeed{seed}, fnv1a(spec.name + "/" + bound)),
              extra);
          for (std::size_t trial = 0; trial < records.size(); ++trial) {
            const BoundCheckRecord& rec = records[trial];
            csv << spec.name << ',' << bound << ',' << rec.k << ',' << rec.q
                << ',' << trial << ',' << io::format_double(rec.observed_error)
                << ',' << io::format_double(rec.bound_value) << ','
                << (rec.held ? 1 : 0) << '\n';
          }
        }
      }
    }
  }
  return 0;
}

int run_sharpness(const ExperimentConfig& config,
                  const std::filesystem::path& out_dir, std::uint64_t seed) {
  for (const ProblemSpec& spec : config.problems) {
    IllPosedProblem p = build_problem(spec, config.n);
    BoundInputs extra;
    if (auto spectrum = parse_spectrum(spec.name)) {
      if (spectrum->kind == Spectrum::Kind::Geometric) {
        extra.rho = spectrum->rho;
      } else {
        extra.alpha = spectrum->alpha;
      }
    } else if (p.declared_illposedness == Illposedness::Severe) {
      SvdFactors f = compact_svd(p.A);
      extra.rho =
          fit_geometric_rho(f.sigma, 2, std::min<Index>(f.sigma.size(), 40));
    }
    auto rows = sharpness_report(p.A, config.bounds.ks, config.bounds.qs,
                                 derive_seed(RandomSeed{seed}, fnv1a(spec.name)),
                                 extra);
    std::ofstream csv(out_dir / ("sharpness_" + sanitize(spec.name) + ".csv"));
    csv << "k,q,observed,simplified_9sqrt,simplified_expq,refined,refined_kind\n";
    for (const SharpnessRow& row : rows) {
      csv << row.k << ',' << row.q << ',' << io::format_double(row.observed)
          << ',' << io::format_double(row.simplified_9sqrt) << ','
          << io::format_double(row.simplified_expq) << ','
          << io::format_double(row.refined) << ','
          << (row.refined_is_severe ? "severe" : "moderate") << '\n';
    }
  }
  return 0;
}

std::map<std::string, Index> parse_index_map(const json& node, Index& fallback) {
  std::map<std::string, Index> per_problem;
  if (node.is_number()) {
    fallback = node.get<Index>();
  } else if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      if (key == "default") {
        fallback = value.get<Index>();
      } else {
        per_problem[key] = value.get<Index>();
      }
    }
  } else {
    throw std::invalid_argument("expected number or object");
  }
  return per_problem;
}

}  // namespace

Index ExperimentConfig::q_for(const std::string& problem) const {
  auto it = q_per_problem.find(problem);
  return it != q_per_problem.end() ? it->second : q_default;
}

Index ExperimentConfig::k_max_for(const std::string& problem) const {
  auto it = k_max_per_problem.find(problem);
  return it != k_max_per_problem.end() ? it->second : k_max_default;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  json doc = json::parse(in);

  ExperimentConfig config;
  const std::string mode = doc.value("mode", "scan");
  if (mode == "scan") {
    config.mode = Mode::Scan;
  } else if (mode == "oracle-compare") {
    config.mode = Mode::OracleCompare;
  } else if (mode == "bounds") {
    config.mode = Mode::Bounds;
  } else if (mode == "sharpness") {
    config.mode = Mode::Sharpness;
  } else {
    throw std::invalid_argument("unknown mode: " + mode);
  }

  for (const json& entry : doc.value("problems", json::array())) {
    ProblemSpec spec;
    if (entry.is_string()) {
      spec.name = entry.get<std::string>();
    } else {
      spec.name = entry.at("name").get<std::string>();
      if (entry.contains("matrix")) {
        spec.matrix_path = path.parent_path() / entry["matrix"].get<std::string>();
      }
      if (entry.contains("rhs")) {
        spec.rhs_path = path.parent_path() / entry["rhs"].get<std::string>();
      }
      if (entry.contains("xtrue")) {
        spec.xtrue_path = path.parent_path() / entry["xtrue"].get<std::string>();
      }
    }
    config.problems.push_back(std::move(spec));
  }

  config.n = doc.value("n", Index{256});
  config.L_kind = reg_kind_from_string(doc.value("L", std::string("L1")));
  config.epsilons = doc.value("epsilons", std::vector<double>{});
  if (doc.contains("q")) {
    config.q_per_problem = parse_index_map(doc["q"], config.q_default);
  }
  config.tol = doc.value("tol", 1e-6);
  if (doc.contains("k_max")) {
    config.k_max_per_problem = parse_index_map(doc["k_max"], config.k_max_default);
  }
  config.seeds = doc.value("seeds", std::vector<std::uint64_t>{});

  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    config.bounds.specs = b.value("specs", std::vector<std::string>{});
    config.bounds.ks = b.value("ks", std::vector<Index>{});
    config.bounds.qs = b.value("qs", std::vector<Index>{});
    config.bounds.trials = b.value("trials", 200);
  }

  config.validate();
  return config;
}

void ExperimentConfig::validate() const {
  if (problems.empty()) throw std::invalid_argument("config: empty problems list");
  if (n < 16) throw std::invalid_argument("config: n must be >= 16");
  if (tol <= 0.0) throw std::invalid_argument("config: tol must be > 0");
  for (const ProblemSpec& spec : problems) {
    if (spec.matrix_path) continue;
    if (!is_generator(spec.name) && !parse_spectrum(spec.name)) {
      throw std::invalid_argument("config: unknown problem '" + spec.name + "'");
    }
  }
  if (mode == Mode::Scan || mode == Mode::OracleCompare) {
    if (seeds.empty()) throw std::invalid_argument("config: seeds required");
    for (const ProblemSpec& spec : problems) {
      const Index q = q_for(spec.name);
      const Index k_max = k_max_for(spec.name);
      if (q < 4) throw std::invalid_argument("config: q must be >= 4");
      if (k_max < 1) throw std::invalid_argument("config: k_max must be >= 1");
      if (!spec.matrix_path && k_max + q >= n) {
        throw std::invalid_argument("config: k_max + q must be < n");
      }
    }
  }
  if (mode == Mode::Scan) {
    if (epsilons.empty()) throw std::invalid_argument("config: epsilons required");
    for (double eps : epsilons) {
      if (eps <= 0.0) throw std::invalid_argument("config: epsilons must be > 0");
    }
  }
  if (mode == Mode::Bounds || mode == Mode::Sharpness) {
    if (bounds.ks.empty() || bounds.qs.empty()) {
      throw std::invalid_argument("config: bounds.ks and bounds.qs required");
    }
    for (Index q : bounds.qs) {
      if (q < 4) throw std::invalid_argument("config: bounds q must be >= 4");
    }
    if (mode == Mode::Bounds) {
      if (bounds.specs.empty()) {
        throw std::invalid_argument("config: bounds.specs required");
      }
      for (const std::string& s : bounds.specs) bound_name_from_string(s);
      if (bounds.trials < 1) {
        throw std::invalid_argument("config: bounds.trials must be >= 1");
      }
    }
  }
}

int run_experiment(const ExperimentConfig& config,
                   const std::filesystem::path& out_dir, int threads,
                   std::optional<std::uint64_t> seed_override) {
  ExperimentConfig cfg = config;
  if (seed_override) {
    cfg.seeds = {*seed_override};
  }
  cfg.validate();
  std::filesystem::create_directories(out_dir);

  const std::uint64_t harness_seed = cfg.seeds.empty() ? 0 : cfg.seeds.front();
  switch (cfg.mode) {
    case ExperimentConfig::Mode::Scan:
      return run_scan(cfg, out_dir, threads);
    case ExperimentConfig::Mode::OracleCompare:
      return run_oracle_compare(cfg, out_dir);
    case ExperimentConfig::Mode::Bounds:
      return run_bounds(cfg, out_dir, harness_seed);
    case ExperimentConfig::Mode::Sharpness:
      return run_sharpness(cfg, out_dir, harness_seed);
  }
  return 1;
}

void summarize(const std::filesystem::path& results_path,
               const std::filesystem::path& out_path) {
  auto rows = io::read_csv(results_path);
  if (rows.empty() || rows.front() != [] {
        std::vector<std::string> header;
        std::istringstream in(kResultsHeader);
        std::string field;
        while (std::getline(in, field, ',')) header.push_back(field);
        return header;
      }()) {
    throw std::runtime_error("results file has unexpected header: " +
                             results_path.string());
  }

  struct SeedStats {
    double best_error = std::numeric_limits<double>::infinity();
    Index k0 = 0;
    long long total_inner = 0;
  };
  // Cell key -> seed -> stats, insertion ordered by first appearance.
  std::vector<std::string> cell_order;
  std::map<std::string, std::map<std::string, SeedStats>> cells;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    const std::string cell = f[0] + "," + f[1] + "," + f[2] + "," + f[3] + "," + f[4];
    if (cells.find(cell) == cells.end()) cell_order.push_back(cell);
    SeedStats& stats = cells[cell][f[5]];
    const double err = std::stod(f[7]);
    if (err < stats.best_error) stats.best_error = err;
    stats.total_inner += std::stoll(f[10]);
    if (f[11] == "1") stats.k0 = static_cast<Index>(std::stoll(f[6]));
  }

  std::ofstream out(out_path);
  out << "problem,n,L,epsilon,q,seeds,median_best_error,min_best_error,"
         "max_best_error,median_k0,median_total_inner_iterations\n";
  for (const std::string& cell : cell_order) {
    std::vector<double> best, k0s, inners;
    for (const auto& [seed, stats] : cells[cell]) {
      best.push_back(stats.best_error);
      k0s.push_back(static_cast<double>(stats.k0));
      inners.push_back(static_cast<double>(stats.total_inner));
    }
    out << cell << ',' << best.size() << ',' << io::format_double(median(best))
        << ',' << io::format_double(*std::min_element(best.begin(), best.end()))
        << ',' << io::format_double(*std::max_element(best.begin(), best.end()))
        << ',' << io::format_double(median(k0s)) << ','
        << io::format_double(median(inners)) << '\n';
  }
}

}  // namespace mtrsvd
