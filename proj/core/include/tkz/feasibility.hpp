#pragma once

#include "tkz/fourier_tensor.hpp"
#include "tkz/tensor3.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace tkz {

/// Splits row indices 0..m-1 into inequality rows (A_i * X <= B_i) and
/// equality rows (A_i * X = B_i).
class ConstraintPartition {
 public:
  /// is_inequality[i] tells whether row i is an inequality.
  explicit ConstraintPartition(std::vector<bool> is_inequality);

  static ConstraintPartition all_equality(std::size_t m);
  static ConstraintPartition all_inequality(std::size_t m);
  /// The first `m_eq` rows are equalities, the following `m_ineq` inequalities.
  static ConstraintPartition equality_first(std::size_t m_eq, std::size_t m_ineq);
  /// Builds from explicit index sets; they must be disjoint and cover 0..m-1.
  static ConstraintPartition from_sets(std::size_t m,
                                       const std::vector<std::size_t>& ineq_rows,
                                       const std::vector<std::size_t>& eq_rows);

  std::size_t size() const noexcept { return is_ineq_.size(); }
  bool is_inequality(std::size_t i) const { return is_ineq_.at(i); }
  const std::vector<std::size_t>& ineq_rows() const noexcept { return ineq_rows_; }
  const std::vector<std::size_t>& eq_rows() const noexcept { return eq_rows_; }
  bool equality_only() const noexcept { return ineq_rows_.empty(); }

 private:
  std::vector<bool> is_ineq_;
  std::vector<std::size_t> ineq_rows_;
  std::vector<std::size_t> eq_rows_;
};

/// Ordered row blocks for the block method. Blocks [0, ineq_block_count)
/// partition the inequality rows, the remaining blocks the equality rows.
struct RowPaving {
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t ineq_block_count = 0;

  /// Consecutive runs of at most `block_size` rows within the inequality rows
  /// and then within the equality rows; the last block of a group may be
  /// shorter.
  static RowPaving consecutive(const ConstraintPartition& partition,
                               std::size_t block_size);
};

/// Linear feasibility system over the t-product:
///   A_i * X <= B_i (i inequality), A_i * X = B_i (i equality),
///   lower <= X <= upper when bounds are given.
/// Matrix problems are the n == 1 case.
class FeasibilityProblem {
 public:
  FeasibilityProblem(Tensor3 op, Tensor3 rhs, ConstraintPartition partition,
                     std::optional<RowPaving> paving = std::nullopt,
                     std::optional<Tensor3> upper_bound = std::nullopt,
                     std::optional<Tensor3> lower_bound = std::nullopt);

  const Tensor3& op() const noexcept { return op_; }
  const Tensor3& rhs() const noexcept { return rhs_; }
  const ConstraintPartition& partition() const noexcept { return partition_; }
  const std::optional<RowPaving>& paving() const noexcept { return paving_; }
  const std::optional<Tensor3>& upper_bound() const noexcept { return upper_; }
  const std::optional<Tensor3>& lower_bound() const noexcept { return lower_; }
  bool has_bounds() const noexcept { return upper_.has_value() || lower_.has_value(); }

  std::size_t rows() const noexcept { return op_.rows(); }
  std::size_t cols() const noexcept { return op_.cols(); }
  std::size_t rhs_cols() const noexcept { return rhs_.cols(); }
  std::size_t tubes() const noexcept { return op_.tubes(); }

  /// Shape of an iterate X: l x p x n.
  Tensor3 zero_iterate() const { return Tensor3(cols(), rhs_cols(), tubes()); }
  /// Throws DimensionError if x is not l x p x n.
  void check_iterate(const Tensor3& x) const;

 private:
  Tensor3 op_;
  Tensor3 rhs_;
  ConstraintPartition partition_;
  std::optional<RowPaving> paving_;
  std::optional<Tensor3> upper_;
  std::optional<Tensor3> lower_;
};

/// Rewrites bound constraints as inequality row slices: X <= U becomes the
/// rows of the t-identity with right-hand side U, X >= L the rows of the
/// negated t-identity with right-hand side -L. The result has no bounds and
/// no paving.
FeasibilityProblem bounds_as_rows(const FeasibilityProblem& problem);

/// Per-row step-size bounds 2 ||A_i||_F^2 / max_j ||(hat A_i)_j||_F^2, each in
/// [2/n, 2].
struct StepBounds {
  std::vector<double> per_row;
  /// Per-row quantities the bound is built from.
  std::vector<double> row_sq_norms;
  std::vector<double> row_max_slice_sq_norms;
};

/// Throws InvalidProblem naming the first zero row slice.
StepBounds step_bounds(const FourierTensor3& a_hat);

/// ||c(AX - B)||_F for a matrix (n == 1) problem without bounds.
double residual_cM(const FeasibilityProblem& problem, const Tensor3& x);
/// ||c_T(A*X - B)||_F for a tensor problem without bounds.
double residual_cT(const FeasibilityProblem& problem, const Tensor3& x);
/// sqrt(||A*X - B||^2 + ||(X - U)_+||^2 + ||(L - X)_+||^2) for an
/// equality-only problem with at least one bound.
double residual_eq_bound(const FeasibilityProblem& problem, const Tensor3& x);
/// Dispatches to the residual that matches the problem's structure.
double residual(const FeasibilityProblem& problem, const Tensor3& x);

/// Evaluates residual(problem, x) repeatedly with the operator's DFT cached.
/// Holds a reference to the problem, which must outlive it.
class ResidualEvaluator {
 public:
  explicit ResidualEvaluator(const FeasibilityProblem& problem);
  double operator()(const Tensor3& x) const;

 private:
  const FeasibilityProblem* problem_;
  std::optional<FourierTensor3> op_hat_;
};

/// Every constraint (rows and bounds) holds with entrywise slack `tol`.
bool is_feasible(const FeasibilityProblem& problem, const Tensor3& x,
                 double tol = 1e-12);

/// Exact distance to the solution set of a consistent equality-only system,
/// through the pseudoinverse of bcirc(A). Construction cost is one SVD of an
/// (mn) x (ln) matrix; each query is a pair of dense products.
class EqualityDistanceOracle {
 public:
  explicit EqualityDistanceOracle(const FeasibilityProblem& problem,
                                  double rank_tol = 1e-10);

  /// Throws NumericalError when the projected point does not satisfy the
  /// system (inconsistent right-hand side).
  double distance(const Tensor3& x) const;
  /// Orthogonal projection of x onto the solution set.
  Tensor3 project(const Tensor3& x) const;

  double smallest_nonzero_singular_value() const noexcept { return sigma_min_; }
  std::size_t rank() const noexcept { return rank_; }

 private:
  Eigen::MatrixXd correction(const Tensor3& x) const;

  std::size_t tubes_;
  Eigen::MatrixXd bc_;
  Eigen::MatrixXd rhs_;  // unfold(B)
  Eigen::MatrixXd pinv_;
  double sigma_min_ = 0.0;
  double consistency_scale_ = 0.0;
  std::size_t rank_ = 0;
};

double distance_oracle_equality(const FeasibilityProblem& problem, const Tensor3& x);

/// 1 / smallest nonzero singular value of bcirc(a); singular values below
/// rank_tol * sigma_max count as zero. Throws InvalidProblem for a zero operator.
double hoffman_equality(const Tensor3& a, double rank_tol = 1e-10);

}  // namespace tkz
