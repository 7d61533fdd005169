#include "cli.hpp"

#include "tkz/error.hpp"
#include "tkz/experiment.hpp"
#include "tkz/generators.hpp"
#include "tkz/metrics.hpp"
#include "tkz/random.hpp"
#include "tkz/selftest.hpp"
#include "tkz/tensor_io.hpp"
#include "tkz/tensor_ops.hpp"
#include "tkz/trace.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>

namespace tkz {

namespace fs = std::filesystem;

namespace {

struct GenOpts {
  std::string config;
  std::string family;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> m_eq, m_ineq, l, p, n, block_size;
  bool noisy = false;
  std::optional<double> epsilon;
  std::string out;
};

struct SolveOpts {
  std::string config;
  std::string problem;
  std::optional<double> alpha;
  std::vector<double> step;
  std::optional<std::size_t> iters, log_stride;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string init = "zero";
  double init_std = 1.0;
  bool mixed_form = false;
  std::string trace;
  std::string x_out;
  std::size_t threads = 1;
};

struct DeblurOpts {
  std::vector<std::string> images;
  std::size_t height = 64, width = 64, frames = 6;
  std::string mode = "exact";
  double epsilon = 0.2;
  double noise = 0.2;
  std::size_t kernel_size = 5;
  double sigma = 2.0;
  std::size_t iters = 50000;
  double alpha = 1.8;
  std::uint64_t seed = 0;
  std::string init = "zero";
  double init_std = 88.0;
  std::size_t log_stride = 500;
  std::string out_dir;
};

struct RateOpts {
  std::string trace;
  double burn_in = 0.2;
  std::size_t min_points = 10;
};

void print_trace_summary(std::ostream& out, const RunTrace& t) {
  out << t.solver << ": " << (t.rows.empty() ? 0 : t.rows.back().iteration)
      << " iterations, residual " << t.rows.front().residual << " -> " << t.rows.back().residual
      << "\n";
  for (const auto& w : t.warnings) out << "warning: " << w << "\n";
}

int cmd_gen(const GenOpts& o, std::ostream& out) {
  GenSpec spec;
  if (!o.config.empty()) {
    spec = ExperimentConfig::load(o.config).gen;
  } else if (!o.family.empty()) {
    spec = GenSpec::defaults(parse_family(o.family));
  } else {
    throw InvalidProblem("gen: either --family or --config is required");
  }
  if (o.seed) spec.seed = *o.seed;
  if (o.m_eq) spec.m_eq = *o.m_eq;
  if (o.m_ineq) spec.m_ineq = *o.m_ineq;
  if (o.l) spec.l = *o.l;
  if (o.p) spec.p = *o.p;
  if (o.n) spec.n = *o.n;
  if (o.block_size) spec.block_size = *o.block_size;
  if (o.noisy) spec.noisy = true;
  if (o.epsilon) spec.epsilon = *o.epsilon;
  const GeneratedProblem gp = generate(spec);
  save_problem(o.out, gp);
  const auto& P = gp.problem;
  out << "wrote " << family_name(spec.family) << " problem to " << o.out << " (m=" << P.rows()
      << " l=" << P.cols() << " p=" << P.rhs_cols() << " n=" << P.tubes() << ")\n";
  return 0;
}

int cmd_solve(const std::string& solver, const SolveOpts& o, std::ostream& out) {
  if (!o.config.empty()) {
    ExperimentConfig cfg = ExperimentConfig::load(o.config);
    cfg.solver = solver;
    if (o.mixed_form) cfg.mixed_form = true;
    if (cfg.mixed_form && solver != "trkl") {
      throw InvalidProblem("mixed_form is only valid for trkl");
    }
    if (o.threads != 1) cfg.threads = o.threads;
    const ExperimentResult r = run_trials(cfg);
    out << solver << ": " << cfg.trials << " trials, median residual "
        << r.summary.front().median_residual << " -> " << r.summary.back().median_residual
        << " at iteration " << r.summary.back().iteration << "\n";
    if (!cfg.out_dir.empty()) out << "traces written to " << cfg.out_dir.string() << "\n";
    return 0;
  }
  if (o.problem.empty()) throw InvalidProblem(solver + ": either --config or --problem is required");
  GeneratedProblem gp = load_problem(o.problem);
  if (o.mixed_form && solver != "trkl") throw InvalidProblem("--mixed-form is only valid for trkl");
  const FeasibilityProblem problem = o.mixed_form ? bounds_as_rows(gp.problem) : gp.problem;
  SolverConfig sc;
  sc.seed = o.seed;
  if (o.iters) sc.max_iters = *o.iters;
  if (o.log_stride) sc.log_stride = *o.log_stride;
  if (o.tol) sc.residual_tol = *o.tol;
  if (o.alpha && !o.step.empty()) throw InvalidProblem("--alpha and --step are exclusive");
  if (o.alpha) sc.step = StepPolicy::coefficient(*o.alpha);
  if (!o.step.empty()) sc.step = StepPolicy::explicit_sizes(o.step);
  const Tensor3 x0 = initial_iterate(o.init, problem, o.init_std, mix_seed(o.seed));
  const SolveResult res = run_solver(solver, problem, x0, sc);
  if (!o.x_out.empty()) save_tensor(o.x_out, res.x);
  if (o.trace.empty()) {
    write_trace(out, res.trace);
  } else {
    save_trace(o.trace, res.trace);
    print_trace_summary(out, res.trace);
  }
  return 0;
}

int cmd_deblur(const DeblurOpts& o, std::ostream& out) {
  if (o.mode != "exact" && o.mode != "noisy") throw InvalidProblem("--mode must be exact or noisy");
  Tensor3 truth = [&] {
    if (o.images.empty()) return gen_phantom_stack(o.height, o.width, o.frames);
    std::vector<Eigen::MatrixXd> frames;
    for (const auto& f : o.images) frames.push_back(load_pgm(f));
    return stack_from_frames(frames);
  }();
  const std::size_t l = truth.rows(), p = truth.cols(), n = truth.tubes();
  const Tensor3 op = build_blur_operator(l, n, gaussian_kernel_1d(o.kernel_size, o.sigma));
  const Tensor3 clean = tprod_fft(op, truth);
  const bool noisy = o.mode == "noisy";
  const FeasibilityProblem problem =
      gen_deblur_problem(op, clean, noisy, o.epsilon, o.noise, o.seed);
  // Observed image: B, or B~ = (first block of the noisy right-hand side) - eps.
  Tensor3 observed = noisy ? problem.rhs().row_range(0, l) : clean;
  if (noisy) {
    for (double& v : observed.data()) v -= o.epsilon;
  }

  Tensor3 x0(l, p, n);
  if (o.init == "blurred") {
    x0 = observed;
  } else if (o.init == "random") {
    Rng rng(mix_seed(o.seed + 1));
    for (double& v : x0.data()) v = o.init_std * rng.normal();
  } else if (o.init != "zero") {
    throw InvalidProblem("--init must be zero, blurred or random");
  }
  SolverConfig sc;
  sc.max_iters = o.iters;
  sc.log_stride = o.log_stride;
  sc.seed = mix_seed(o.seed);
  sc.step = StepPolicy::coefficient(o.alpha);
  const SolveResult res = noisy ? trkl_solve(problem, x0, sc) : trklb_solve(problem, x0, sc);

  const double before = psnr(truth, observed);
  const double after = psnr(truth, res.x);
  out << std::fixed << std::setprecision(3);
  out << "psnr observed " << before << " dB\n";
  out << "psnr restored " << after << " dB\n";
  out << std::defaultfloat << std::setprecision(6);
  print_trace_summary(out, res.trace);
  if (!o.out_dir.empty()) {
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    save_trace(dir / "trace.csv", res.trace);
    save_tensor(dir / "truth.t3d", truth);
    save_tensor(dir / "observed.t3d", observed);
    save_tensor(dir / "restored.t3d", res.x);
    for (std::size_t f = 0; f < p; ++f) {
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_%02zu.pgm", f);
      save_pgm(dir / ("truth" + std::string(suffix)), stack_frame(truth, f));
      save_pgm(dir / ("observed" + std::string(suffix)), stack_frame(observed, f));
      save_pgm(dir / ("restored" + std::string(suffix)), stack_frame(res.x, f));
    }
    out << "outputs written to " << dir.string() << "\n";
  }
  return 0;
}

int cmd_rate(const RateOpts& o, std::ostream& out) {
  const RunTrace t = load_trace(o.trace);
  const RateFit fit = fit_rate(t.rows, {o.burn_in, o.min_points});
  out << std::setprecision(12);
  out << "slope " << fit.slope << "\n";
  out << "intercept " << fit.intercept << "\n";
  out << "r_squared " << fit.r_squared << "\n";
  out << "points " << fit.points << "\n";
  out << "hit_zero " << (fit.hit_zero ? "yes" : "no") << "\n";
  return 0;
}

int cmd_selftest(std::uint64_t seed, std::ostream& out) {
  bool ok = true;
  for (const auto& c : run_selftest(seed)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

void add_solver_options(CLI::App* cmd, SolveOpts& o) {
  cmd->add_option("--config", o.config, "experiment config file")->check(CLI::ExistingFile);
  cmd->add_option("--problem", o.problem, "problem directory written by gen")
      ->check(CLI::ExistingDirectory);
  cmd->add_option("--alpha", o.alpha, "step coefficient");
  cmd->add_option("--step", o.step, "explicit step size(s)");
  cmd->add_option("--iters", o.iters, "iteration budget");
  cmd->add_option("--tol", o.tol, "stop at this residual (0 disables)");
  cmd->add_option("--log-stride", o.log_stride, "residual logging interval");
  cmd->add_option("--seed", o.seed, "sampling seed");
  cmd->add_option("--init", o.init, "zero | random | rhs");
  cmd->add_option("--init-std", o.init_std, "standard deviation for --init random");
  cmd->add_option("--trace", o.trace, "write the trace here instead of stdout");
  cmd->add_option("--x-out", o.x_out, "write the final iterate as a TensorFile");
  cmd->add_option("--threads", o.threads, "trial threads (config mode)");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized Kaczmarz solvers for t-product feasibility problems", "tkz"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a problem directory");
  gen_cmd->add_option("--config", gen.config, "take the generator from a config")
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--family", gen.family,
                      "matrix_gaussian | classification | tensor_gaussian | eq_bound | deblur");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--m-eq", gen.m_eq);
  gen_cmd->add_option("--m-ineq", gen.m_ineq);
  gen_cmd->add_option("--l", gen.l);
  gen_cmd->add_option("--p", gen.p);
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--block-size", gen.block_size);
  gen_cmd->add_flag("--noisy", gen.noisy, "deblur: noisy interval form");
  gen_cmd->add_option("--epsilon", gen.epsilon, "deblur: noise tolerance");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();

  SolveOpts bmrk, trkl, trklb;
  auto* bmrk_cmd = app.add_subcommand("bmrk", "block method on a matrix problem");
  add_solver_options(bmrk_cmd, bmrk);
  auto* trkl_cmd = app.add_subcommand("trkl", "tensor row method");
  add_solver_options(trkl_cmd, trkl);
  trkl_cmd->add_flag("--mixed-form", trkl.mixed_form, "rewrite bounds as inequality rows");
  auto* trklb_cmd = app.add_subcommand("trklb", "tensor row method with bound projection");
  add_solver_options(trklb_cmd, trklb);

  DeblurOpts deblur;
  auto* deblur_cmd = app.add_subcommand("deblur", "deblur a phantom or PGM image stack");
  deblur_cmd->add_option("--images", deblur.images, "PGM frames (default: phantom)")
      ->check(CLI::ExistingFile);
  deblur_cmd->add_option("--height", deblur.height, "phantom height");
  deblur_cmd->add_option("--width", deblur.width, "phantom width");
  deblur_cmd->add_option("--frames", deblur.frames, "phantom frames");
  deblur_cmd->add_option("--mode", deblur.mode, "exact | noisy");
  deblur_cmd->add_option("--epsilon", deblur.epsilon, "noisy: tolerance");
  deblur_cmd->add_option("--noise", deblur.noise, "noisy: uniform noise amplitude");
  deblur_cmd->add_option("--kernel-size", deblur.kernel_size);
  deblur_cmd->add_option("--sigma", deblur.sigma);
  deblur_cmd->add_option("--iters", deblur.iters);
  deblur_cmd->add_option("--alpha", deblur.alpha);
  deblur_cmd->add_option("--seed", deblur.seed);
  deblur_cmd->add_option("--init", deblur.init, "zero | blurred | random");
  deblur_cmd->add_option("--init-std", deblur.init_std, "standard deviation for --init random");
  deblur_cmd->add_option("--log-stride", deblur.log_stride);
  deblur_cmd->add_option("--out-dir", deblur.out_dir, "write images, stacks and trace here");

  RateOpts rate;
  auto* rate_cmd = app.add_subcommand("rate", "fit a linear rate to a trace");
  rate_cmd->add_option("trace", rate.trace, "TraceFile")->required()->check(CLI::ExistingFile);
  rate_cmd->add_option("--burn-in", rate.burn_in, "fraction of points skipped");
  rate_cmd->add_option("--min-points", rate.min_points);

  std::uint64_t selftest_seed = 1;
  auto* selftest_cmd = app.add_subcommand("selftest", "run the randomized oracle checks");
  selftest_cmd->add_option("--seed", selftest_seed);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*bmrk_cmd) return cmd_solve("bmrk", bmrk, out);
    if (*trkl_cmd) return cmd_solve("trkl", trkl, out);
    if (*trklb_cmd) return cmd_solve("trklb", trklb, out);
    if (*deblur_cmd) return cmd_deblur(deblur, out);
    if (*rate_cmd) return cmd_rate(rate, out);
    if (*selftest_cmd) return cmd_selftest(selftest_seed, out);
  } catch (const ParseError& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return 3;
  } catch (const DimensionError& e) {
    err << "error: dimension mismatch: " << e.what() << "\n";
    return 4;
  } catch (const InvalidProblem& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace tkz
