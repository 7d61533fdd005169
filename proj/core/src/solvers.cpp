#include "tkz/solvers.hpp"

#include "tkz/dft.hpp"
#include "tkz/error.hpp"
#include "tkz/sampling.hpp"
#include "tkz/tensor_ops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace tkz {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// Step sizes

std::vector<double> resolve_row_steps(const StepBounds& bounds, const StepPolicy& policy,
                                      std::vector<std::string>* warnings) {
  const std::size_t m = bounds.per_row.size();
  std::vector<double> steps(m);
  if (policy.kind == StepPolicy::Kind::Coefficient) {
    for (std::size_t i = 0; i < m; ++i) steps[i] = policy.alpha * bounds.per_row[i] / 2.0;
  } else if (policy.sizes.size() == 1) {
    steps.assign(m, policy.sizes.front());
  } else if (policy.sizes.size() == m) {
    steps = policy.sizes;
  } else {
    throw InvalidProblem("explicit step sizes: expected 1 or " + std::to_string(m) +
                         " values, got " + std::to_string(policy.sizes.size()));
  }
  std::size_t violations = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(steps[i] > 0.0) || !std::isfinite(steps[i])) {
      throw InvalidProblem("step size for row " + std::to_string(i) + " is not positive");
    }
    if (steps[i] >= bounds.per_row[i]) ++violations;
  }
  if (violations > 0 && warnings) {
    warnings->push_back("step size not below convergence bound on " +
                        std::to_string(violations) + " of " + std::to_string(m) + " rows");
  }
  return steps;
}

std::vector<double> resolve_block_steps(std::size_t block_count, const StepPolicy& policy,
                                        std::vector<std::string>* warnings) {
  std::vector<double> steps(block_count);
  if (policy.kind == StepPolicy::Kind::Coefficient) {
    steps.assign(block_count, policy.alpha);
  } else if (policy.sizes.size() == 1) {
    steps.assign(block_count, policy.sizes.front());
  } else if (policy.sizes.size() == block_count) {
    steps = policy.sizes;
  } else {
    throw InvalidProblem("explicit step sizes: expected 1 or " + std::to_string(block_count) +
                         " values, got " + std::to_string(policy.sizes.size()));
  }
  std::size_t violations = 0;
  for (std::size_t b = 0; b < block_count; ++b) {
    if (!(steps[b] > 0.0) || !std::isfinite(steps[b])) {
      throw InvalidProblem("step size for block " + std::to_string(b) + " is not positive");
    }
    if (steps[b] >= 2.0) ++violations;
  }
  if (violations > 0 && warnings) {
    warnings->push_back("step size not below 2 on " + std::to_string(violations) + " of " +
                        std::to_string(block_count) + " blocks");
  }
  return steps;
}

Tensor3 project_bounds(const FeasibilityProblem& problem, Tensor3 x) {
  problem.check_iterate(x);
  auto data = x.data();
  if (problem.lower_bound()) {
    const auto lo = problem.lower_bound()->data();
    for (std::size_t q = 0; q < data.size(); ++q) data[q] = std::max(data[q], lo[q]);
  }
  if (problem.upper_bound()) {
    const auto hi = problem.upper_bound()->data();
    for (std::size_t q = 0; q < data.size(); ++q) data[q] = std::min(data[q], hi[q]);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Row Fourier data

namespace {

std::vector<cd> tube_dft(const Tensor3& t) {
  const FourierTensor3 f = dft_tubes(t);
  return {f.data().begin(), f.data().end()};
}

}  // namespace

RowFourierData::RowFourierData(const FeasibilityProblem& problem)
    : m_(problem.rows()),
      l_(problem.cols()),
      p_(problem.rhs_cols()),
      n_(problem.tubes()),
      op_hat_(dft_tubes(problem.op())),
      bounds_(step_bounds(op_hat_)) {
  op_.resize(m_ * l_ * n_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t f = 0; f < n_; ++f)
      for (std::size_t j = 0; j < l_; ++j) op_[i * l_ * n_ + j + l_ * f] = op_hat_(i, j, f);
  active_.resize(m_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < l_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        if (problem.op()(i, j, k) != 0.0) {
          active_[i].push_back(j);
          break;
        }
  const FourierTensor3 rhs_hat = dft_tubes(problem.rhs());
  rhs_.resize(m_ * p_ * n_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t f = 0; f < n_; ++f)
      for (std::size_t c = 0; c < p_; ++c) rhs_[i * p_ * n_ + c + p_ * f] = rhs_hat(i, c, f);
}

namespace {

using Clock = std::chrono::steady_clock;

// Logging and stopping shared by the three solvers.
class TraceLogger {
 public:
  TraceLogger(const SolverConfig& config, RunTrace& trace, const LogObserver& observer)
      : config_(config), trace_(trace), observer_(observer), start_(Clock::now()) {
    if (config.log_stride == 0) throw InvalidProblem("log stride must be positive");
  }

  bool due(std::size_t iteration) const {
    return iteration % config_.log_stride == 0 || iteration == config_.max_iters;
  }

  /// Records a log point; returns true when the run should stop.
  bool log(std::size_t iteration, const Tensor3& x, double residual) {
    if (!std::isfinite(residual)) {
      throw NumericalError("residual became non-finite at iteration " +
                           std::to_string(iteration));
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
    trace_.rows.push_back({iteration, elapsed, residual});
    if (observer_) observer_(iteration, x, residual);
    return config_.residual_tol > 0.0 && residual <= config_.residual_tol;
  }

 private:
  const SolverConfig& config_;
  RunTrace& trace_;
  const LogObserver& observer_;
  Clock::time_point start_;
};

RunTrace make_trace(const char* solver, const FeasibilityProblem& problem,
                    const SolverConfig& config) {
  RunTrace trace;
  trace.solver = solver;
  trace.m = problem.rows();
  trace.l = problem.cols();
  trace.p = problem.rhs_cols();
  trace.n = problem.tubes();
  trace.config = config;
  return trace;
}

// Runs the iteration loop. `step(k)` performs iteration k (1-based);
// `current()` returns the spatial iterate; `eval` computes the residual.
template <class StepFn, class CurrentFn, class EvalFn>
void drive(const SolverConfig& config, TraceLogger& logger, StepFn&& step,
           CurrentFn&& current, EvalFn&& eval) {
  {
    const Tensor3 x = current();
    if (logger.log(0, x, eval(x)) || config.max_iters == 0) return;
  }
  for (std::size_t k = 1; k <= config.max_iters; ++k) {
    step();
    if (logger.due(k)) {
      const Tensor3 x = current();
      if (logger.log(k, x, eval(x))) return;
    }
  }
}

// ---------------------------------------------------------------------------
// B-MRK kernel

class BmrkKernel {
 public:
  explicit BmrkKernel(const FeasibilityProblem& problem) : problem_(problem) {
    if (problem.tubes() != 1) throw InvalidProblem("B-MRK requires a matrix (n = 1) problem");
    if (!problem.paving()) throw InvalidProblem("B-MRK requires a row paving");
    if (problem.has_bounds()) throw InvalidProblem("B-MRK does not handle bound constraints");
    const auto& paving = *problem.paving();
    const std::size_t l = problem.cols();
    const std::size_t p = problem.rhs_cols();
    std::size_t widest = 0;
    for (const auto& block : paving.blocks) {
      // Row-major copy of A_tau and B_tau.
      std::vector<double> a(block.size() * l), b(block.size() * p);
      double sq = 0.0;
      for (std::size_t q = 0; q < block.size(); ++q) {
        for (std::size_t j = 0; j < l; ++j) {
          const double v = problem.op()(block[q], j, 0);
          a[q * l + j] = v;
          sq += v * v;
        }
        for (std::size_t c = 0; c < p; ++c) b[q * p + c] = problem.rhs()(block[q], c, 0);
      }
      block_ops_.push_back(std::move(a));
      block_rhs_.push_back(std::move(b));
      block_sq_.push_back(sq);
      widest = std::max(widest, block.size());
    }
    r_.resize(widest * p);
  }

  std::size_t block_count() const { return block_sq_.size(); }
  const std::vector<double>& block_sq_norms() const { return block_sq_; }

  void step(Tensor3& x, std::size_t b, double t) {
    const auto& paving = *problem_.paving();
    const std::size_t size = paving.blocks.at(b).size();
    const bool ineq = b < paving.ineq_block_count;
    const std::size_t l = problem_.cols();
    const std::size_t p = problem_.rhs_cols();
    const double* a = block_ops_[b].data();
    const double* rhs = block_rhs_[b].data();
    bool active = !ineq;
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t q = 0; q < size; ++q) {
        double acc = 0.0;
        for (std::size_t j = 0; j < l; ++j) acc += a[q * l + j] * x(j, c, 0);
        double r = acc - rhs[q * p + c];
        if (ineq) {
          r = std::max(r, 0.0);
          active = active || r > 0.0;
        }
        r_[q + size * c] = r;
      }
    }
    if (!active) return;
    const double coef = t / block_sq_[b];
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t j = 0; j < l; ++j) {
        double acc = 0.0;
        for (std::size_t q = 0; q < size; ++q) acc += a[q * l + j] * r_[q + size * c];
        x(j, c, 0) -= coef * acc;
      }
    }
  }

 private:
  const FeasibilityProblem& problem_;
  std::vector<std::vector<double>> block_ops_;
  std::vector<std::vector<double>> block_rhs_;
  std::vector<double> block_sq_;
  std::vector<double> r_;
};

// ---------------------------------------------------------------------------
// TRK kernel: row residual and update in the Fourier domain. The iterate
// x_hat uses the Tensor3 layout (l x p x n) and is kept conjugate symmetric
// along tubes: only frequencies f <= n/2 are computed, the rest mirrored.

class TrkKernel {
 public:
  TrkKernel(const RowFourierData& data, const ConstraintPartition& partition)
      : data_(data),
        partition_(partition),
        dft_(data.tubes()),
        r_hat_(data.rhs_cols() * data.tubes()),
        tube_(data.tubes()) {}

  /// Computes the (clipped, for inequality rows) residual of row i in the
  /// Fourier domain. Returns false when it vanishes after clipping.
  bool residual(std::size_t i, const cd* x_hat) {
    const std::size_t l = data_.cols();
    const std::size_t p = data_.rhs_cols();
    const std::size_t n = data_.tubes();
    const cd* a = data_.op_row(i);
    const cd* b = data_.rhs_row(i);
    const auto& cols = data_.active_cols(i);
    for (std::size_t f = 0; f <= n / 2; ++f) {
      const cd* af = a + l * f;
      for (std::size_t c = 0; c < p; ++c) {
        const cd* xf = x_hat + l * (c + p * f);
        cd acc{0.0, 0.0};
        for (std::size_t j : cols) acc += af[j] * xf[j];
        r_hat_[c + p * f] = acc - b[c + p * f];
      }
    }
    mirror(r_hat_.data(), p);
    if (!partition_.is_inequality(i)) return true;

    bool active = false;
    double imag_sq = 0.0;
    double hat_sq = 0.0;
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t f = 0; f < n; ++f) {
        tube_[f] = r_hat_[c + p * f];
        hat_sq += std::norm(tube_[f]);
      }
      dft_.inverse(tube_);
      bool tube_active = false;
      for (std::size_t f = 0; f < n; ++f) {
        imag_sq += tube_[f].imag() * tube_[f].imag();
        const double clipped = std::max(tube_[f].real(), 0.0);
        tube_active = tube_active || clipped > 0.0;
        tube_[f] = cd{clipped, 0.0};
      }
      if (tube_active) dft_.forward(tube_);
      for (std::size_t f = 0; f < n; ++f) r_hat_[c + p * f] = tube_[f];
      active = active || tube_active;
    }
    check_imag(imag_sq, hat_sq, "row residual");
    return active;
  }

  /// x_hat -= coef * conj(A_i) r_hat (outer product per frequency).
  void apply(std::size_t i, double coef, cd* x_hat) const {
    const std::size_t l = data_.cols();
    const std::size_t p = data_.rhs_cols();
    const std::size_t n = data_.tubes();
    const cd* a = data_.op_row(i);
    const auto& cols = data_.active_cols(i);
    for (std::size_t f = 0; f <= n / 2; ++f) {
      const cd* af = a + l * f;
      for (std::size_t c = 0; c < p; ++c) {
        const cd r = r_hat_[c + p * f];
        cd* xf = x_hat + l * (c + p * f);
        for (std::size_t j : cols) xf[j] -= coef * (std::conj(af[j]) * r);
      }
    }
    for (std::size_t f = n / 2 + 1; f < n; ++f) {
      for (std::size_t c = 0; c < p; ++c) {
        const cd* src = x_hat + l * (c + p * (n - f));
        cd* dst = x_hat + l * (c + p * f);
        for (std::size_t j : cols) dst[j] = std::conj(src[j]);
      }
    }
  }

  TubeDft& dft() { return dft_; }
  std::vector<cd>& tube() { return tube_; }

  void check_imag(double imag_sq, double hat_sq, const char* what) const {
    const double n = static_cast<double>(data_.tubes());
    const double limit = 1e-10 * std::sqrt(hat_sq / n);
    if (std::sqrt(imag_sq) > limit && imag_sq > 0.0) {
      throw NumericalError(std::string(what) + ": imaginary residue " +
                           std::to_string(std::sqrt(imag_sq)) + " above limit " +
                           std::to_string(limit));
    }
  }

 private:
  // Fills frequencies f > n/2 of a (slice_len x n) array from their mirrors.
  void mirror(cd* v, std::size_t slice_len) const {
    const std::size_t n = data_.tubes();
    for (std::size_t f = n / 2 + 1; f < n; ++f) {
      const cd* src = v + slice_len * (n - f);
      cd* dst = v + slice_len * f;
      for (std::size_t q = 0; q < slice_len; ++q) dst[q] = std::conj(src[q]);
    }
  }

  const RowFourierData& data_;
  const ConstraintPartition& partition_;
  TubeDft dft_;
  std::vector<cd> r_hat_;
  std::vector<cd> tube_;
};

// Spatial tensor from a conjugate-symmetric spectrum held in x_hat.
Tensor3 to_spatial(const std::vector<cd>& x_hat, std::size_t l, std::size_t p,
                   std::size_t n, TrkKernel& kernel) {
  Tensor3 x(l, p, n);
  auto& tube = kernel.tube();
  const std::size_t lp = l * p;
  double imag_sq = 0.0;
  double hat_sq = 0.0;
  for (std::size_t q = 0; q < lp; ++q) {
    for (std::size_t f = 0; f < n; ++f) {
      tube[f] = x_hat[q + lp * f];
      hat_sq += std::norm(tube[f]);
    }
    kernel.dft().inverse(tube);
    for (std::size_t f = 0; f < n; ++f) {
      x.data()[q + lp * f] = tube[f].real();
      imag_sq += tube[f].imag() * tube[f].imag();
    }
  }
  kernel.check_imag(imag_sq, hat_sq, "iterate");
  return x;
}

// Inverse-transforms the tubes (j, c, :) of z_hat for j in `cols`, projects
// them onto the bounds and writes the result to x; tubes changed by the
// projection are re-transformed into z_hat so that it stays the spectrum of x.
// Other tubes are left alone: the update did not touch them.
void project_spectrum(const FeasibilityProblem& problem, const std::vector<std::size_t>& cols,
                      std::vector<cd>& z_hat, Tensor3& x, TrkKernel& kernel) {
  const std::size_t l = x.rows();
  const std::size_t p = x.cols();
  const std::size_t n = x.tubes();
  const std::size_t lp = l * p;
  const double* lo = problem.lower_bound() ? problem.lower_bound()->data().data() : nullptr;
  const double* hi = problem.upper_bound() ? problem.upper_bound()->data().data() : nullptr;
  auto& tube = kernel.tube();
  double imag_sq = 0.0;
  double hat_sq = 0.0;
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t j : cols) {
      const std::size_t q = j + l * c;
      for (std::size_t f = 0; f < n; ++f) {
        tube[f] = z_hat[q + lp * f];
        hat_sq += std::norm(tube[f]);
      }
      kernel.dft().inverse(tube);
      bool clipped = false;
      for (std::size_t f = 0; f < n; ++f) {
        const std::size_t idx = q + lp * f;
        const double z = tube[f].real();
        imag_sq += tube[f].imag() * tube[f].imag();
        double v = z;
        if (lo) v = std::max(v, lo[idx]);
        if (hi) v = std::min(v, hi[idx]);
        clipped = clipped || v != z;
        x.data()[idx] = v;
      }
      if (clipped) {
        for (std::size_t f = 0; f < n; ++f) tube[f] = cd{x.data()[q + lp * f], 0.0};
        kernel.dft().forward(tube);
        for (std::size_t f = 0; f < n; ++f) z_hat[q + lp * f] = tube[f];
      }
    }
  }
  kernel.check_imag(imag_sq, hat_sq, "bound projection");
}

void require_trk_problem(const FeasibilityProblem& problem, const char* solver) {
  if (problem.has_bounds()) {
    throw InvalidProblem(std::string(solver) +
                         ": problem has bound constraints; convert them with bounds_as_rows");
  }
}

void require_trklb_problem(const FeasibilityProblem& problem) {
  if (!problem.partition().equality_only()) {
    throw InvalidProblem("TRK-LB requires an equality-only problem");
  }
  if (!problem.has_bounds()) throw InvalidProblem("TRK-LB requires a bound constraint");
}

}  // namespace

// ---------------------------------------------------------------------------
// B-MRK

Tensor3 bmrk_step(const FeasibilityProblem& problem, const Tensor3& x, std::size_t block,
                  double step) {
  problem.check_iterate(x);
  BmrkKernel kernel(problem);
  if (block >= kernel.block_count()) throw std::out_of_range("block index out of range");
  Tensor3 out = x;
  kernel.step(out, block, step);
  return out;
}

SolveResult bmrk_solve(const FeasibilityProblem& problem, const Tensor3& x0,
                       const SolverConfig& config, const LogObserver& observer) {
  problem.check_iterate(x0);
  SolveResult result{x0, make_trace("bmrk", problem, config)};
  TraceLogger logger(config, result.trace, observer);
  BmrkKernel kernel(problem);
  const StepPolicy policy = config.step.value_or(StepPolicy::coefficient(1.0));
  const std::vector<double> steps =
      resolve_block_steps(kernel.block_count(), policy, &result.trace.warnings);
  result.trace.steps = steps;
  const SamplingWeights weights(kernel.block_sq_norms());
  Rng rng(config.seed);
  const ResidualEvaluator eval(problem);

  Tensor3& x = result.x;
  drive(
      config, logger,
      [&] {
        const std::size_t b = sample_index(weights, rng);
        kernel.step(x, b, steps[b]);
      },
      [&] { return x; }, [&](const Tensor3& cur) { return eval(cur); });
  return result;
}

// ---------------------------------------------------------------------------
// TRK-L

Tensor3 trkl_step(const RowFourierData& data, const FeasibilityProblem& problem,
                  const Tensor3& x, std::size_t row, double step) {
  require_trk_problem(problem, "TRK-L");
  problem.check_iterate(x);
  if (row >= problem.rows()) throw std::out_of_range("row index out of range");
  TrkKernel kernel(data, problem.partition());
  std::vector<cd> x_hat = tube_dft(x);
  if (!kernel.residual(row, x_hat.data())) return x;
  kernel.apply(row, step / data.row_sq_norm(row), x_hat.data());
  return to_spatial(x_hat, x.rows(), x.cols(), x.tubes(), kernel);
}

Tensor3 trkl_step(const FeasibilityProblem& problem, const Tensor3& x, std::size_t row,
                  double step) {
  return trkl_step(RowFourierData(problem), problem, x, row, step);
}

SolveResult trkl_solve(const FeasibilityProblem& problem, const Tensor3& x0,
                       const SolverConfig& config, const LogObserver& observer) {
  require_trk_problem(problem, "TRK-L");
  problem.check_iterate(x0);
  SolveResult result{x0, make_trace("trkl", problem, config)};
  TraceLogger logger(config, result.trace, observer);
  const RowFourierData data(problem);
  const StepPolicy policy = config.step.value_or(StepPolicy::coefficient(1.8));
  const std::vector<double> steps =
      resolve_row_steps(data.bounds(), policy, &result.trace.warnings);
  result.trace.steps = steps;
  std::vector<double> coef(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) coef[i] = steps[i] / data.row_sq_norm(i);
  const SamplingWeights weights(data.bounds().row_sq_norms);
  Rng rng(config.seed);
  const ResidualEvaluator eval(problem);
  TrkKernel kernel(data, problem.partition());

  std::vector<cd> x_hat = tube_dft(x0);
  const std::size_t l = x0.rows(), p = x0.cols(), n = x0.tubes();
  drive(
      config, logger,
      [&] {
        const std::size_t i = sample_index(weights, rng);
        if (kernel.residual(i, x_hat.data())) kernel.apply(i, coef[i], x_hat.data());
      },
      [&] { return to_spatial(x_hat, l, p, n, kernel); },
      [&](const Tensor3& cur) { return eval(cur); });
  result.x = to_spatial(x_hat, l, p, n, kernel);
  return result;
}

// ---------------------------------------------------------------------------
// TRK-LB

Tensor3 trklb_step(const FeasibilityProblem& problem, const Tensor3& x, std::size_t row,
                   double step) {
  require_trklb_problem(problem);
  problem.check_iterate(x);
  if (row >= problem.rows()) throw std::out_of_range("row index out of range");
  const RowFourierData data(problem);
  TrkKernel kernel(data, problem.partition());
  std::vector<cd> x_hat = tube_dft(x);
  kernel.residual(row, x_hat.data());
  kernel.apply(row, step / data.row_sq_norm(row), x_hat.data());
  Tensor3 out = x;
  project_spectrum(problem, data.active_cols(row), x_hat, out, kernel);
  // Entries outside the updated tubes are Z = X; clip them as well.
  return project_bounds(problem, std::move(out));
}

SolveResult trklb_solve(const FeasibilityProblem& problem, const Tensor3& x0,
                        const SolverConfig& config, const LogObserver& observer) {
  require_trklb_problem(problem);
  problem.check_iterate(x0);
  SolveResult result{project_bounds(problem, x0), make_trace("trklb", problem, config)};
  TraceLogger logger(config, result.trace, observer);
  const RowFourierData data(problem);
  const StepPolicy policy = config.step.value_or(StepPolicy::coefficient(1.8));
  const std::vector<double> steps =
      resolve_row_steps(data.bounds(), policy, &result.trace.warnings);
  result.trace.steps = steps;
  std::vector<double> coef(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) coef[i] = steps[i] / data.row_sq_norm(i);
  const SamplingWeights weights(data.bounds().row_sq_norms);
  Rng rng(config.seed);
  const ResidualEvaluator eval(problem);
  TrkKernel kernel(data, problem.partition());

  Tensor3& x = result.x;
  std::vector<cd> x_hat = tube_dft(x);
  drive(
      config, logger,
      [&] {
        const std::size_t i = sample_index(weights, rng);
        kernel.residual(i, x_hat.data());
        kernel.apply(i, coef[i], x_hat.data());
        project_spectrum(problem, data.active_cols(i), x_hat, x, kernel);
      },
      [&] { return x; }, [&](const Tensor3& cur) { return eval(cur); });
  return result;
}

}  // namespace tkz
