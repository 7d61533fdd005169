#include "tkz/feasibility.hpp"

#include "tkz/error.hpp"
#include "tkz/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tkz {

// ---------------------------------------------------------------------------
// ConstraintPartition / RowPaving

ConstraintPartition::ConstraintPartition(std::vector<bool> is_inequality)
    : is_ineq_(std::move(is_inequality)) {
  for (std::size_t i = 0; i < is_ineq_.size(); ++i) {
    (is_ineq_[i] ? ineq_rows_ : eq_rows_).push_back(i);
  }
}

ConstraintPartition ConstraintPartition::all_equality(std::size_t m) {
  return ConstraintPartition(std::vector<bool>(m, false));
}

ConstraintPartition ConstraintPartition::all_inequality(std::size_t m) {
  return ConstraintPartition(std::vector<bool>(m, true));
}

ConstraintPartition ConstraintPartition::equality_first(std::size_t m_eq,
                                                        std::size_t m_ineq) {
  std::vector<bool> flags(m_eq + m_ineq, false);
  std::fill(flags.begin() + static_cast<std::ptrdiff_t>(m_eq), flags.end(), true);
  return ConstraintPartition(std::move(flags));
}

ConstraintPartition ConstraintPartition::from_sets(
    std::size_t m, const std::vector<std::size_t>& ineq_rows,
    const std::vector<std::size_t>& eq_rows) {
  std::vector<int> seen(m, 0);
  std::vector<bool> flags(m, false);
  auto mark = [&](const std::vector<std::size_t>& rows, bool ineq) {
    for (std::size_t r : rows) {
      if (r >= m) throw InvalidProblem("partition row " + std::to_string(r) + " out of range");
      if (seen[r]++) throw InvalidProblem("partition row " + std::to_string(r) + " listed twice");
      flags[r] = ineq;
    }
  };
  mark(ineq_rows, true);
  mark(eq_rows, false);
  for (std::size_t r = 0; r < m; ++r) {
    if (!seen[r]) throw InvalidProblem("partition misses row " + std::to_string(r));
  }
  return ConstraintPartition(std::move(flags));
}

RowPaving RowPaving::consecutive(const ConstraintPartition& partition,
                                 std::size_t block_size) {
  if (block_size == 0) throw InvalidProblem("block size must be positive");
  RowPaving paving;
  auto chop = [&](const std::vector<std::size_t>& rows) {
    for (std::size_t start = 0; start < rows.size(); start += block_size) {
      const std::size_t end = std::min(rows.size(), start + block_size);
      paving.blocks.emplace_back(rows.begin() + static_cast<std::ptrdiff_t>(start),
                                 rows.begin() + static_cast<std::ptrdiff_t>(end));
    }
  };
  chop(partition.ineq_rows());
  paving.ineq_block_count = paving.blocks.size();
  chop(partition.eq_rows());
  return paving;
}

// ---------------------------------------------------------------------------
// FeasibilityProblem

namespace {

std::string shape_str(const Tensor3& t) {
  return std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + "x" +
         std::to_string(t.tubes());
}

void validate_paving(const RowPaving& paving, const ConstraintPartition& part) {
  const std::size_t m = part.size();
  if (paving.ineq_block_count > paving.blocks.size()) {
    throw InvalidProblem("paving: inequality block count exceeds block count");
  }
  std::vector<int> seen(m, 0);
  for (std::size_t b = 0; b < paving.blocks.size(); ++b) {
    const auto& block = paving.blocks[b];
    if (block.empty()) throw InvalidProblem("paving: block " + std::to_string(b) + " is empty");
    const bool ineq_block = b < paving.ineq_block_count;
    for (std::size_t r : block) {
      if (r >= m) throw InvalidProblem("paving: row " + std::to_string(r) + " out of range");
      if (seen[r]++) throw InvalidProblem("paving: row " + std::to_string(r) + " in two blocks");
      if (part.is_inequality(r) != ineq_block) {
        throw InvalidProblem("paving: block " + std::to_string(b) +
                             " mixes equality and inequality rows");
      }
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (!seen[r]) throw InvalidProblem("paving: row " + std::to_string(r) + " not covered");
  }
}

}  // namespace

FeasibilityProblem::FeasibilityProblem(Tensor3 op, Tensor3 rhs,
                                       ConstraintPartition partition,
                                       std::optional<RowPaving> paving,
                                       std::optional<Tensor3> upper_bound,
                                       std::optional<Tensor3> lower_bound)
    : op_(std::move(op)),
      rhs_(std::move(rhs)),
      partition_(std::move(partition)),
      paving_(std::move(paving)),
      upper_(std::move(upper_bound)),
      lower_(std::move(lower_bound)) {
  if (rhs_.rows() != op_.rows() || rhs_.tubes() != op_.tubes()) {
    throw DimensionError("problem: operator " + shape_str(op_) +
                         " incompatible with right-hand side " + shape_str(rhs_));
  }
  if (partition_.size() != op_.rows()) {
    throw DimensionError("problem: partition covers " + std::to_string(partition_.size()) +
                         " rows, operator has " + std::to_string(op_.rows()));
  }
  for (std::size_t i = 0; i < op_.rows(); ++i) {
    bool nonzero = false;
    for (std::size_t k = 0; k < op_.tubes() && !nonzero; ++k)
      for (std::size_t j = 0; j < op_.cols() && !nonzero; ++j) nonzero = op_(i, j, k) != 0.0;
    if (!nonzero) throw InvalidProblem("problem: row slice " + std::to_string(i) + " is zero");
  }
  if (paving_) {
    if (op_.tubes() != 1) throw InvalidProblem("problem: row paving requires a matrix (n = 1) problem");
    validate_paving(*paving_, partition_);
  }
  for (const auto* bound : {&upper_, &lower_}) {
    if (*bound && (bound->value().rows() != cols() || bound->value().cols() != rhs_cols() ||
                   bound->value().tubes() != tubes())) {
      throw DimensionError("problem: bound tensor " + shape_str(bound->value()) +
                           " does not match iterate shape");
    }
  }
  if (upper_ && lower_) {
    for (std::size_t q = 0; q < upper_->size(); ++q) {
      if (lower_->data()[q] > upper_->data()[q]) {
        throw InvalidProblem("problem: lower bound exceeds upper bound");
      }
    }
  }
}

void FeasibilityProblem::check_iterate(const Tensor3& x) const {
  if (x.rows() != cols() || x.cols() != rhs_cols() || x.tubes() != tubes()) {
    throw DimensionError("iterate has shape " + shape_str(x) + ", expected " +
                         std::to_string(cols()) + "x" + std::to_string(rhs_cols()) + "x" +
                         std::to_string(tubes()));
  }
}

FeasibilityProblem bounds_as_rows(const FeasibilityProblem& problem) {
  const std::size_t l = problem.cols();
  const std::size_t n = problem.tubes();
  std::vector<Tensor3> ops{problem.op()};
  std::vector<Tensor3> rhs{problem.rhs()};
  std::vector<bool> flags;
  for (std::size_t i = 0; i < problem.rows(); ++i) {
    flags.push_back(problem.partition().is_inequality(i));
  }
  if (problem.upper_bound()) {
    ops.push_back(Tensor3::identity(l, n));
    rhs.push_back(*problem.upper_bound());
    flags.insert(flags.end(), l, true);
  }
  if (problem.lower_bound()) {
    ops.push_back(-1.0 * Tensor3::identity(l, n));
    rhs.push_back(-1.0 * *problem.lower_bound());
    flags.insert(flags.end(), l, true);
  }
  return FeasibilityProblem(stack_rows(ops), stack_rows(rhs),
                            ConstraintPartition(std::move(flags)));
}

// ---------------------------------------------------------------------------
// Step bounds

StepBounds step_bounds(const FourierTensor3& a_hat) {
  const std::size_t m = a_hat.rows();
  const std::size_t l = a_hat.cols();
  const std::size_t n = a_hat.tubes();
  StepBounds out;
  out.per_row.resize(m);
  out.row_sq_norms.resize(m);
  out.row_max_slice_sq_norms.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double total = 0.0;
    double peak = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < l; ++j) s += std::norm(a_hat(i, j, k));
      total += s;
      peak = std::max(peak, s);
    }
    if (peak == 0.0) {
      throw InvalidProblem("step bounds: row slice " + std::to_string(i) + " is zero");
    }
    const double row_sq = total / static_cast<double>(n);
    out.row_sq_norms[i] = row_sq;
    out.row_max_slice_sq_norms[i] = peak;
    out.per_row[i] = 2.0 * row_sq / peak;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Residuals

namespace {

// Squared norm of the clipped violation for a product tensor `ax`, summed in
// storage order.
double clipped_sq(const Tensor3& ax, const Tensor3& b, const ConstraintPartition& part) {
  const std::size_t m = ax.rows();
  double s = 0.0;
  for (std::size_t k = 0; k < ax.tubes(); ++k) {
    for (std::size_t c = 0; c < ax.cols(); ++c) {
      for (std::size_t i = 0; i < m; ++i) {
        double r = ax(i, c, k) - b(i, c, k);
        if (part.is_inequality(i)) r = std::max(r, 0.0);
        s += r * r;
      }
    }
  }
  return s;
}

Tensor3 matrix_product(const Tensor3& a, const Tensor3& x) {
  const std::size_t m = a.rows();
  const std::size_t l = a.cols();
  Tensor3 out(m, x.cols(), 1);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < l; ++j) acc += a(i, j, 0) * x(j, c, 0);
      out(i, c, 0) = acc;
    }
  }
  return out;
}

void require_no_bounds(const FeasibilityProblem& p, const char* what) {
  if (p.has_bounds()) {
    throw InvalidProblem(std::string(what) + ": problem has bound constraints");
  }
}

}  // namespace

// Shared by the free functions and ResidualEvaluator so both give bitwise
// identical results. `op_hat` is only consulted for n > 1.
static double evaluate_residual(const FeasibilityProblem& problem, const FourierTensor3* op_hat,
                         const Tensor3& x) {
  problem.check_iterate(x);
  const Tensor3 ax = problem.tubes() == 1 ? matrix_product(problem.op(), x)
                                          : tprod_fft(*op_hat, x);
  double s = clipped_sq(ax, problem.rhs(), problem.partition());
  if (problem.has_bounds()) {
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double v = x.data()[q];
      if (problem.upper_bound()) {
        const double over = std::max(v - problem.upper_bound()->data()[q], 0.0);
        s += over * over;
      }
      if (problem.lower_bound()) {
        const double under = std::max(problem.lower_bound()->data()[q] - v, 0.0);
        s += under * under;
      }
    }
  }
  return std::sqrt(s);
}

double residual_cM(const FeasibilityProblem& problem, const Tensor3& x) {
  require_no_bounds(problem, "residual_cM");
  if (problem.tubes() != 1) throw InvalidProblem("residual_cM: tensor problem (n > 1)");
  return evaluate_residual(problem, nullptr, x);
}

double residual_cT(const FeasibilityProblem& problem, const Tensor3& x) {
  require_no_bounds(problem, "residual_cT");
  if (problem.tubes() == 1) return evaluate_residual(problem, nullptr, x);
  const FourierTensor3 op_hat = dft_tubes(problem.op());
  return evaluate_residual(problem, &op_hat, x);
}

double residual_eq_bound(const FeasibilityProblem& problem, const Tensor3& x) {
  if (!problem.has_bounds()) throw InvalidProblem("residual_eq_bound: no bound constraints");
  if (!problem.partition().equality_only()) {
    throw InvalidProblem("residual_eq_bound: problem has inequality rows");
  }
  if (problem.tubes() == 1) return evaluate_residual(problem, nullptr, x);
  const FourierTensor3 op_hat = dft_tubes(problem.op());
  return evaluate_residual(problem, &op_hat, x);
}

double residual(const FeasibilityProblem& problem, const Tensor3& x) {
  if (problem.has_bounds()) return residual_eq_bound(problem, x);
  return residual_cT(problem, x);
}

ResidualEvaluator::ResidualEvaluator(const FeasibilityProblem& problem)
    : problem_(&problem) {
  if (problem.has_bounds() && !problem.partition().equality_only()) {
    throw InvalidProblem("residual: bounds combined with inequality rows are not supported");
  }
  if (problem.tubes() > 1) op_hat_.emplace(dft_tubes(problem.op()));
}

double ResidualEvaluator::operator()(const Tensor3& x) const {
  return evaluate_residual(*problem_, op_hat_ ? &*op_hat_ : nullptr, x);
}

bool is_feasible(const FeasibilityProblem& problem, const Tensor3& x, double tol) {
  problem.check_iterate(x);
  const Tensor3 ax = problem.tubes() == 1 ? matrix_product(problem.op(), x)
                                          : tprod_fft(problem.op(), x);
  const auto& part = problem.partition();
  for (std::size_t k = 0; k < ax.tubes(); ++k)
    for (std::size_t c = 0; c < ax.cols(); ++c)
      for (std::size_t i = 0; i < ax.rows(); ++i) {
        const double r = ax(i, c, k) - problem.rhs()(i, c, k);
        if (part.is_inequality(i) ? r > tol : std::abs(r) > tol) return false;
      }
  for (std::size_t q = 0; q < x.size(); ++q) {
    const double v = x.data()[q];
    if (problem.upper_bound() && v > problem.upper_bound()->data()[q] + tol) return false;
    if (problem.lower_bound() && v < problem.lower_bound()->data()[q] - tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Equality-system oracles

EqualityDistanceOracle::EqualityDistanceOracle(const FeasibilityProblem& problem,
                                               double rank_tol)
    : tubes_(problem.tubes()), bc_(bcirc(problem.op())), rhs_(unfold(problem.rhs())) {
  if (!problem.partition().equality_only() || problem.has_bounds()) {
    throw InvalidProblem("distance oracle: requires an equality-only problem without bounds");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(bc_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = rank_tol * sigma_max;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index q = 0; q < sv.size(); ++q) {
    if (sv(q) > cutoff) {
      inv(q) = 1.0 / sv(q);
      sigma_min_ = sv(q);
      ++rank_;
    }
  }
  pinv_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  consistency_scale_ = sigma_max;
}

Eigen::MatrixXd EqualityDistanceOracle::correction(const Tensor3& x) const {
  if (x.tubes() != tubes_ || static_cast<Eigen::Index>(x.rows() * tubes_) != bc_.cols()) {
    throw DimensionError("distance oracle: iterate shape mismatch");
  }
  const Eigen::MatrixXd ux = unfold(x);
  if (ux.cols() != rhs_.cols()) throw DimensionError("distance oracle: iterate shape mismatch");
  const Eigen::MatrixXd delta = pinv_ * (bc_ * ux - rhs_);
  const double leftover = (bc_ * (ux - delta) - rhs_).norm();
  const double scale = consistency_scale_ * ux.norm() + rhs_.norm();
  if (leftover > 1e-8 * std::max(scale, 1.0)) {
    throw NumericalError("distance oracle: system is inconsistent (projected residual " +
                         std::to_string(leftover) + ")");
  }
  return delta;
}

double EqualityDistanceOracle::distance(const Tensor3& x) const {
  return correction(x).norm();
}

Tensor3 EqualityDistanceOracle::project(const Tensor3& x) const {
  return fold(unfold(x) - correction(x), tubes_);
}

double distance_oracle_equality(const FeasibilityProblem& problem, const Tensor3& x) {
  problem.check_iterate(x);
  return EqualityDistanceOracle(problem).distance(x);
}

double hoffman_equality(const Tensor3& a, double rank_tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(bcirc(a));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) throw InvalidProblem("hoffman_equality: zero operator");
  double smallest = sv(0);
  for (Eigen::Index q = 0; q < sv.size(); ++q) {
    if (sv(q) > rank_tol * sv(0)) smallest = sv(q);
  }
  return 1.0 / smallest;
}

}  // namespace tkz
