#pragma once

#include "tkz/feasibility.hpp"
#include "tkz/fourier_tensor.hpp"
#include "tkz/tensor3.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tkz {

/// How step sizes are chosen.
///
/// Coefficient mode: TRK-L/TRK-LB use t_i = alpha * bound_i / 2 (so alpha < 2
/// stays inside the convergence bound); B-MRK uses t_tau = alpha.
/// Explicit mode: one size per row (TRK) or per block (B-MRK), or a single
/// value applied to all of them.
struct StepPolicy {
  enum class Kind { Coefficient, Explicit };

  Kind kind = Kind::Coefficient;
  double alpha = 1.8;
  std::vector<double> sizes;

  static StepPolicy coefficient(double alpha) { return {Kind::Coefficient, alpha, {}}; }
  static StepPolicy explicit_sizes(std::vector<double> sizes) {
    return {Kind::Explicit, 0.0, std::move(sizes)};
  }
};

struct SolverConfig {
  std::size_t max_iters = 5000;
  /// Stop at the first log point with residual <= residual_tol; 0 disables.
  double residual_tol = 0.0;
  std::uint64_t seed = 0;
  std::size_t log_stride = 10;
  /// Empty means the solver default: alpha = 1.8 for TRK-L/TRK-LB, t = 1 for B-MRK.
  std::optional<StepPolicy> step;
};

struct TraceRow {
  std::size_t iteration = 0;
  double elapsed_seconds = 0.0;
  double residual = 0.0;
};

/// Logged residual history of one solver run plus the metadata needed to
/// reproduce it.
struct RunTrace {
  std::string solver;
  std::size_t m = 0, l = 0, p = 0, n = 0;
  SolverConfig config;
  /// Resolved per-row (TRK) or per-block (B-MRK) step sizes.
  std::vector<double> steps;
  std::vector<std::string> warnings;
  std::vector<TraceRow> rows;
};

struct SolveResult {
  Tensor3 x;
  RunTrace trace;
};

/// Called at every log point with the iteration count, the current iterate
/// and its residual.
using LogObserver =
    std::function<void(std::size_t iteration, const Tensor3& x, double residual)>;

/// Per-row Fourier data of the operator and right-hand side, computed once
/// before iterating. Row slices are stored contiguously: the entry for
/// (row i, column j, frequency f) lives at op_rows[i][j + l * f].
class RowFourierData {
 public:
  using cd = std::complex<double>;

  explicit RowFourierData(const FeasibilityProblem& problem);

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return l_; }
  std::size_t rhs_cols() const noexcept { return p_; }
  std::size_t tubes() const noexcept { return n_; }

  const cd* op_row(std::size_t i) const { return op_.data() + i * l_ * n_; }
  const cd* rhs_row(std::size_t i) const { return rhs_.data() + i * p_ * n_; }
  const FourierTensor3& op_hat() const noexcept { return op_hat_; }
  const StepBounds& bounds() const noexcept { return bounds_; }
  double row_sq_norm(std::size_t i) const { return bounds_.row_sq_norms.at(i); }
  /// Columns j whose tube A(i, j, :) is not identically zero.
  const std::vector<std::size_t>& active_cols(std::size_t i) const { return active_.at(i); }

 private:
  std::size_t m_, l_, p_, n_;
  FourierTensor3 op_hat_;
  StepBounds bounds_;
  std::vector<cd> op_;   // m blocks of l x n
  std::vector<cd> rhs_;  // m blocks of p x n
  std::vector<std::vector<std::size_t>> active_;
};

// ---------------------------------------------------------------------------
// Block method for matrix problems (n == 1), requires a row paving.

/// One block update X - t A_tau^T c(A_tau X - B_tau) / ||A_tau||_F^2.
Tensor3 bmrk_step(const FeasibilityProblem& problem, const Tensor3& x,
                  std::size_t block, double step);

SolveResult bmrk_solve(const FeasibilityProblem& problem, const Tensor3& x0,
                       const SolverConfig& config, const LogObserver& observer = {});

// ---------------------------------------------------------------------------
// Tensor methods.

/// One row update X - t A_i^T * c(A_i * X - B_i) / ||A_i||_F^2, evaluated in
/// the Fourier domain of the sampled row slice.
Tensor3 trkl_step(const FeasibilityProblem& problem, const Tensor3& x,
                  std::size_t row, double step);
Tensor3 trkl_step(const RowFourierData& data, const FeasibilityProblem& problem,
                  const Tensor3& x, std::size_t row, double step);

/// The problem must not carry bound constraints; see bounds_as_rows.
SolveResult trkl_solve(const FeasibilityProblem& problem, const Tensor3& x0,
                       const SolverConfig& config, const LogObserver& observer = {});

/// Equality row update followed by projection onto the bounds.
Tensor3 trklb_step(const FeasibilityProblem& problem, const Tensor3& x,
                   std::size_t row, double step);

/// Equality-only problem with at least one bound. x0 is projected onto the
/// bounds before iteration 0.
SolveResult trklb_solve(const FeasibilityProblem& problem, const Tensor3& x0,
                        const SolverConfig& config, const LogObserver& observer = {});

/// Entrywise projection onto [lower, upper] (either may be absent).
Tensor3 project_bounds(const FeasibilityProblem& problem, Tensor3 x);

/// t_i for every row under `policy`; warnings are appended for rows whose step
/// is not below the bound.
std::vector<double> resolve_row_steps(const StepBounds& bounds, const StepPolicy& policy,
                                      std::vector<std::string>* warnings);
/// t_tau for every block under `policy`; warnings for steps >= 2.
std::vector<double> resolve_block_steps(std::size_t block_count, const StepPolicy& policy,
                                        std::vector<std::string>* warnings);

}  // namespace tkz
