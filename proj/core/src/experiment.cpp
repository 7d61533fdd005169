#include "tkz/experiment.hpp"

#include "key_value.hpp"
#include "tkz/error.hpp"
#include "tkz/random.hpp"
#include "tkz/tensor_io.hpp"
#include "tkz/trace.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace tkz {

namespace fs = std::filesystem;

ExperimentConfig ExperimentConfig::parse(std::istream& in, const fs::path& base_dir,
                                         const std::string& source) {
  using detail::KeyValue;
  const std::vector<KeyValue> kvs = detail::parse_key_values(in, source);
  ExperimentConfig cfg;
  // The family fixes the defaults the other generator keys override.
  for (const auto& kv : kvs) {
    if (kv.key == "family") cfg.gen = GenSpec::defaults(parse_family(kv.value));
  }
  std::vector<std::string> seen;
  for (const auto& kv : kvs) {
    if (std::find(seen.begin(), seen.end(), kv.key) != seen.end()) {
      throw ParseError(source + ":" + std::to_string(kv.line) + ": duplicate key '" + kv.key +
                       "'");
    }
    seen.push_back(kv.key);
    const std::string& k = kv.key;
    if (k == "family") continue;
    else if (k == "m_eq") cfg.gen.m_eq = detail::parse_size(kv);
    else if (k == "m_ineq") cfg.gen.m_ineq = detail::parse_size(kv);
    else if (k == "l") cfg.gen.l = detail::parse_size(kv);
    else if (k == "p") cfg.gen.p = detail::parse_size(kv);
    else if (k == "n") cfg.gen.n = detail::parse_size(kv);
    else if (k == "block_size") cfg.gen.block_size = detail::parse_size(kv);
    else if (k == "seed") cfg.gen.seed = detail::parse_u64(kv);
    else if (k == "kernel_size") cfg.gen.kernel_size = detail::parse_size(kv);
    else if (k == "kernel_sigma") cfg.gen.kernel_sigma = detail::parse_double(kv);
    else if (k == "noisy") cfg.gen.noisy = detail::parse_bool(kv);
    else if (k == "epsilon") cfg.gen.epsilon = detail::parse_double(kv);
    else if (k == "noise_amplitude") cfg.gen.noise_amplitude = detail::parse_double(kv);
    else if (k == "problem") cfg.problem_dir = base_dir / kv.value;
    else if (k == "solver") cfg.solver = kv.value;
    else if (k == "mixed_form") cfg.mixed_form = detail::parse_bool(kv);
    else if (k == "alpha") cfg.solver_config.step = StepPolicy::coefficient(detail::parse_double(kv));
    else if (k == "step") cfg.solver_config.step = StepPolicy::explicit_sizes(detail::parse_doubles(kv));
    else if (k == "iters") cfg.solver_config.max_iters = detail::parse_size(kv);
    else if (k == "tol") cfg.solver_config.residual_tol = detail::parse_double(kv);
    else if (k == "log_stride") cfg.solver_config.log_stride = detail::parse_size(kv);
    else if (k == "init") cfg.init = kv.value;
    else if (k == "init_std") cfg.init_std = detail::parse_double(kv);
    else if (k == "trials") cfg.trials = detail::parse_size(kv);
    else if (k == "threads") cfg.threads = detail::parse_size(kv);
    else if (k == "out_dir") cfg.out_dir = base_dir / kv.value;
    else {
      throw ParseError(source + ":" + std::to_string(kv.line) + ": unknown key '" + k + "'");
    }
  }
  if (std::find(seen.begin(), seen.end(), "alpha") != seen.end() &&
      std::find(seen.begin(), seen.end(), "step") != seen.end()) {
    throw ParseError(source + ": 'alpha' and 'step' are mutually exclusive");
  }
  if (cfg.solver != "bmrk" && cfg.solver != "trkl" && cfg.solver != "trklb") {
    throw ParseError(source + ": unknown solver '" + cfg.solver + "'");
  }
  if (cfg.init != "zero" && cfg.init != "random" && cfg.init != "rhs") {
    throw ParseError(source + ": init must be zero, random or rhs");
  }
  if (cfg.mixed_form && cfg.solver != "trkl") {
    throw ParseError(source + ": mixed_form requires solver = trkl");
  }
  if (cfg.trials == 0) throw ParseError(source + ": trials must be positive");
  if (cfg.solver_config.log_stride == 0) throw ParseError(source + ": log_stride must be positive");
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return parse(in, path.parent_path(), path.string());
}

SolveResult run_solver(const std::string& name, const FeasibilityProblem& problem,
                       const Tensor3& x0, const SolverConfig& config,
                       const LogObserver& observer) {
  if (name == "bmrk") return bmrk_solve(problem, x0, config, observer);
  if (name == "trkl") return trkl_solve(problem, x0, config, observer);
  if (name == "trklb") return trklb_solve(problem, x0, config, observer);
  throw InvalidProblem("unknown solver '" + name + "'");
}

Tensor3 initial_iterate(const std::string& init, const FeasibilityProblem& problem,
                        double std, std::uint64_t seed) {
  Tensor3 x = problem.zero_iterate();
  if (init == "zero") return x;
  if (init == "random") {
    Rng rng(seed);
    for (double& v : x.data()) v = std * rng.normal();
    return x;
  }
  if (init == "rhs") {
    if (!problem.rhs().same_shape(x)) {
      throw DimensionError("init = rhs needs B with the iterate's shape l x p x n");
    }
    return problem.rhs();
  }
  throw InvalidProblem("unknown init '" + init + "'");
}

std::vector<SummaryRow> median_summary(const std::vector<RunTrace>& traces) {
  std::vector<std::size_t> iters;
  for (const auto& t : traces)
    for (const auto& r : t.rows) iters.push_back(r.iteration);
  std::sort(iters.begin(), iters.end());
  iters.erase(std::unique(iters.begin(), iters.end()), iters.end());

  std::vector<SummaryRow> out;
  std::vector<std::size_t> cursor(traces.size(), 0);
  std::vector<double> values;
  for (std::size_t it : iters) {
    values.clear();
    for (std::size_t j = 0; j < traces.size(); ++j) {
      const auto& rows = traces[j].rows;
      if (rows.empty() || rows.front().iteration > it) continue;
      while (cursor[j] + 1 < rows.size() && rows[cursor[j] + 1].iteration <= it) ++cursor[j];
      values.push_back(rows[cursor[j]].residual);
    }
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size();
    const double med = k % 2 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
    out.push_back({it, med});
  }
  return out;
}

namespace {

RunTrace run_one(const ExperimentConfig& cfg, std::size_t trial) {
  const std::uint64_t seed_j = cfg.gen.seed + trial;
  GenSpec spec = cfg.gen;
  spec.seed = seed_j;
  GeneratedProblem gp = cfg.problem_dir ? load_problem(*cfg.problem_dir) : generate(spec);
  const FeasibilityProblem problem =
      cfg.mixed_form ? bounds_as_rows(gp.problem) : std::move(gp.problem);
  SolverConfig sc = cfg.solver_config;
  sc.seed = mix_seed(seed_j);
  const Tensor3 x0 = initial_iterate(cfg.init, problem, cfg.init_std, mix_seed(sc.seed));
  return run_solver(cfg.solver, problem, x0, sc).trace;
}

std::string trial_name(std::size_t j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trial_%03zu.csv", j);
  return buf;
}

}  // namespace

ExperimentResult run_trials(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.traces.resize(cfg.trials);
  std::size_t threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  threads = std::clamp<std::size_t>(threads, 1, cfg.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < cfg.trials; j = next++) {
      try {
        result.traces[j] = run_one(cfg, j);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.trials;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  result.summary = median_summary(result.traces);
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    for (std::size_t j = 0; j < cfg.trials; ++j) {
      save_trace(cfg.out_dir / trial_name(j), result.traces[j]);
    }
    std::ofstream out(cfg.out_dir / "summary.csv");
    if (!out) throw ParseError("cannot write " + (cfg.out_dir / "summary.csv").string());
    out << "iteration,median_residual\n";
    for (const auto& r : result.summary) {
      out << r.iteration << ',' << detail::format_double(r.median_residual) << "\n";
    }
  }
  return result;
}

}  // namespace tkz
