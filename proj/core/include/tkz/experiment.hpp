#pragma once

#include "tkz/generators.hpp"
#include "tkz/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tkz {

/// Plain-text experiment description, one `key = value` per line:
///
///   family, m_eq, m_ineq, l, p, n, block_size, seed, kernel_size,
///   kernel_sigma, noisy, epsilon, noise_amplitude   generator (GenSpec)
///   problem          saved problem directory, used instead of a generator
///   solver           bmrk | trkl | trklb
///   mixed_form       run TRK-L on the bounds-as-rows form of the problem
///   alpha | step     step coefficient, or explicit step size(s)
///   iters, tol, log_stride                          solver budget
///   init             zero | random | rhs;  init_std for random
///   trials, threads, out_dir
///
/// Unknown keys are errors; paths are relative to the config file.
struct ExperimentConfig {
  GenSpec gen = GenSpec::defaults(Family::TensorGaussian);
  std::optional<std::filesystem::path> problem_dir;
  std::string solver = "trkl";
  bool mixed_form = false;
  SolverConfig solver_config;
  std::string init = "zero";
  double init_std = 1.0;
  std::size_t trials = 1;
  std::size_t threads = 1;
  /// Empty: keep results in memory only.
  std::filesystem::path out_dir;

  static ExperimentConfig parse(std::istream& in, const std::filesystem::path& base_dir,
                                const std::string& source = "config");
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct SummaryRow {
  std::size_t iteration = 0;
  double median_residual = 0.0;
};

struct ExperimentResult {
  std::vector<RunTrace> traces;
  std::vector<SummaryRow> summary;
};

/// Runs `name` (bmrk, trkl or trklb) on the problem.
SolveResult run_solver(const std::string& name, const FeasibilityProblem& problem,
                       const Tensor3& x0, const SolverConfig& config,
                       const LogObserver& observer = {});

/// zero, random (iid normal times `std`) or rhs (B, when its shape matches X).
Tensor3 initial_iterate(const std::string& init, const FeasibilityProblem& problem,
                        double std, std::uint64_t seed);

/// Median residual per logged iteration across traces. A trace that stopped
/// early contributes its last residual to later iterations.
std::vector<SummaryRow> median_summary(const std::vector<RunTrace>& traces);

/// Trial j regenerates the problem with seed + j and seeds the solver with
/// mix_seed(seed + j). Results do not depend on the thread count. When
/// out_dir is set, writes trial_NNN.csv per trial and summary.csv.
ExperimentResult run_trials(const ExperimentConfig& config);

}  // namespace tkz
