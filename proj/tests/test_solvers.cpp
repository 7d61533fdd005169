#include "test_util.hpp"
#include "tkz/error.hpp"
#include "tkz/generators.hpp"
#include "tkz/solvers.hpp"
#include "tkz/tensor_ops.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace tkz;
using test::random_tensor;

namespace {

GeneratedProblem small_matrix(std::uint64_t seed, std::size_t m_eq, std::size_t m_ineq,
                              std::size_t block) {
  GenSpec s = GenSpec::defaults(Family::MatrixGaussian);
  s.m_eq = m_eq; s.m_ineq = m_ineq; s.l = 5; s.p = 2; s.block_size = block; s.seed = seed;
  return gen_matrix_gaussian(s);
}

GeneratedProblem small_tensor(std::uint64_t seed, std::size_t m_eq, std::size_t m_ineq) {
  GenSpec s = GenSpec::defaults(Family::TensorGaussian);
  s.m_eq = m_eq; s.m_ineq = m_ineq; s.l = 4; s.p = 2; s.n = 5; s.seed = seed;
  return gen_tensor_gaussian(s);
}

GeneratedProblem small_eq_bound(std::uint64_t seed) {
  GenSpec s = GenSpec::defaults(Family::EqBound);
  s.m_eq = 8; s.l = 6; s.p = 2; s.n = 4; s.seed = seed;
  return gen_eq_bound(s);
}

}  // namespace

TEST(Bmrk, OneByOneProjection) {
  const FeasibilityProblem p(Tensor3(1, 1, 1, {2.0}), Tensor3(1, 1, 1, {6.0}),
                             ConstraintPartition::all_equality(1), RowPaving{{{0}}, 0});
  EXPECT_EQ(bmrk_step(p, Tensor3(1, 1, 1), 0, 1.0)(0, 0, 0), 3.0);
}

TEST(Bmrk, SingleEqualityRowIsHyperplaneProjection) {
  const auto gp = small_matrix(1, 3, 0, 1);
  Rng rng(5);
  const Tensor3 x = random_tensor(5, 2, 1, rng);
  const Tensor3 y = bmrk_step(gp.problem, x, 1, 1.0);
  const std::size_t row = gp.problem.paving()->blocks[1][0];
  for (std::size_t c = 0; c < 2; ++c) {
    double dot = 0.0;
    for (std::size_t j = 0; j < 5; ++j) dot += gp.problem.op()(row, j, 0) * y(j, c, 0);
    EXPECT_NEAR(dot, gp.problem.rhs()(row, c, 0), 1e-12);
  }
}

TEST(Bmrk, SatisfiedInequalityBlockLeavesIterate) {
  const auto gp = small_matrix(2, 2, 6, 3);
  // The witness satisfies every inequality block.
  for (std::size_t b = 0; b < gp.problem.paving()->ineq_block_count; ++b) {
    EXPECT_EQ(bmrk_step(gp.problem, *gp.witness, b, 1.5), *gp.witness);
  }
}

TEST(Bmrk, RequiresPavingAndMatrix) {
  const auto gt = small_tensor(3, 2, 2);
  EXPECT_THROW(bmrk_solve(gt.problem, gt.problem.zero_iterate(), {}), InvalidProblem);
  Rng rng(1);
  const FeasibilityProblem nopave(random_tensor(2, 2, 1, rng), random_tensor(2, 1, 1, rng),
                                  ConstraintPartition::all_equality(2));
  EXPECT_THROW(bmrk_solve(nopave, nopave.zero_iterate(), {}), InvalidProblem);
}

TEST(Bmrk, ConvergesOnConsistentSystem) {
  GenSpec s = GenSpec::defaults(Family::MatrixGaussian);
  s.m_eq = 40; s.m_ineq = 0; s.l = 10; s.p = 1; s.block_size = 1;
  std::vector<double> finals;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    s.seed = seed;
    const auto gp = gen_matrix_gaussian(s);
    SolverConfig cfg;
    cfg.max_iters = 5000;
    cfg.log_stride = 100;
    cfg.seed = seed;
    finals.push_back(bmrk_solve(gp.problem, gp.problem.zero_iterate(), cfg).trace.rows.back().residual);
  }
  std::nth_element(finals.begin(), finals.begin() + 10, finals.end());
  EXPECT_LT(finals[10], 1e-6);
}

TEST(Bmrk, FeasibleStartStopsImmediately) {
  const auto gp = small_matrix(4, 3, 4, 2);
  SolverConfig cfg;
  cfg.residual_tol = 1e-9;
  const auto r = bmrk_solve(gp.problem, *gp.witness, cfg);
  ASSERT_EQ(r.trace.rows.size(), 1u);
  EXPECT_EQ(r.trace.rows[0].iteration, 0u);
  EXPECT_LT(r.trace.rows[0].residual, 1e-12);
}

TEST(Bmrk, StepWarnings) {
  const auto gp = small_matrix(5, 2, 2, 1);
  SolverConfig cfg;
  cfg.max_iters = 10;
  cfg.step = StepPolicy::explicit_sizes({2.5});
  EXPECT_FALSE(bmrk_solve(gp.problem, gp.problem.zero_iterate(), cfg).trace.warnings.empty());
  cfg.step = StepPolicy::coefficient(1.0);
  EXPECT_TRUE(bmrk_solve(gp.problem, gp.problem.zero_iterate(), cfg).trace.warnings.empty());
  cfg.step = StepPolicy::explicit_sizes({-1.0});
  EXPECT_THROW(bmrk_solve(gp.problem, gp.problem.zero_iterate(), cfg), InvalidProblem);
  cfg.step = StepPolicy::explicit_sizes({1.0, 1.0});
  EXPECT_THROW(bmrk_solve(gp.problem, gp.problem.zero_iterate(), cfg), InvalidProblem);
}

TEST(Trkl, MatchesBlockStepAtNOne) {
  const auto gp = small_matrix(6, 3, 4, 1);
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const Tensor3 x = random_tensor(5, 2, 1, rng);
    const auto& blocks = gp.problem.paving()->blocks;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      EXPECT_EQ(trkl_step(gp.problem, x, blocks[b][0], 0.9), bmrk_step(gp.problem, x, b, 0.9));
    }
  }
}

TEST(Trkl, MatrixFormUpdate) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto gp = small_tensor(100 + t, 3, 0);
    const Tensor3 x = random_tensor(4, 2, 5, rng);
    const std::size_t i = t % 3;
    const Tensor3 ai = gp.problem.op().row_slice(i);
    const Eigen::MatrixXd bc = bcirc(ai);
    const double alpha = 1.1 / bc.squaredNorm() * 5.0;  // t / ||A_i||_F^2
    const Eigen::MatrixXd r = bc * unfold(x) - unfold(gp.problem.rhs().row_slice(i));
    const Tensor3 ref = fold(unfold(x) - alpha * bc.transpose() * r, 5);
    EXPECT_LE(frob_norm(trkl_step(gp.problem, x, i, 1.1) - ref), 1e-12 * (1 + frob_norm(ref)));
  }
}

TEST(Trkl, HandTwoTubeExample) {
  // 1x1x2 system a = (1, 2), b = (3, 0): bcirc(a) = [[1, 2], [2, 1]].
  const FeasibilityProblem p(Tensor3(1, 1, 2, {1.0, 2.0}), Tensor3(1, 1, 2, {3.0, 0.0}),
                             ConstraintPartition::all_equality(1));
  // Spectrum (3, -1): bound = 2 * 5 / 9.
  const double t = 10.0 / 9.0;
  const Tensor3 y = trkl_step(p, Tensor3(1, 1, 2), 0, t);
  // unfold(y) = 0 - (t / 5) * [[1, 2], [2, 1]] * (-(3, 0)) = (t / 5) * (3, 6)
  EXPECT_NEAR(y(0, 0, 0), t / 5.0 * 3.0, 1e-15);
  EXPECT_NEAR(y(0, 0, 1), t / 5.0 * 6.0, 1e-15);
}

TEST(Trkl, SatisfiedInequalityRowLeavesIterate) {
  const auto gp = small_tensor(8, 2, 5);
  for (std::size_t i : gp.problem.partition().ineq_rows()) {
    EXPECT_EQ(trkl_step(gp.problem, *gp.witness, i, 1.0), *gp.witness);
  }
}

TEST(Trkl, RejectsBounds) {
  const auto gp = small_eq_bound(9);
  EXPECT_THROW(trkl_solve(gp.problem, gp.problem.zero_iterate(), {}), InvalidProblem);
  EXPECT_NO_THROW(trkl_solve(bounds_as_rows(gp.problem), gp.problem.zero_iterate(),
                             SolverConfig{10, 0.0, 0, 5, std::nullopt}));
}

TEST(Trkl, TraceLoggingRules) {
  const auto gp = small_tensor(10, 3, 4);
  SolverConfig cfg;
  cfg.max_iters = 95;
  cfg.log_stride = 10;
  cfg.seed = 3;
  const auto r = trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg);
  ASSERT_EQ(r.trace.rows.size(), 11u);
  EXPECT_EQ(r.trace.rows.front().iteration, 0u);
  EXPECT_EQ(r.trace.rows.back().iteration, 95u);
  for (std::size_t k = 1; k < r.trace.rows.size(); ++k) {
    EXPECT_GT(r.trace.rows[k].iteration, r.trace.rows[k - 1].iteration);
    EXPECT_GE(r.trace.rows[k].elapsed_seconds, r.trace.rows[k - 1].elapsed_seconds);
  }
  EXPECT_NEAR(r.trace.rows.back().residual, residual(gp.problem, r.x), 1e-12);
  EXPECT_EQ(r.trace.steps.size(), gp.problem.rows());
  EXPECT_EQ(r.trace.solver, "trkl");
  cfg.max_iters = 0;
  EXPECT_EQ(trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg).trace.rows.size(), 1u);
  cfg.log_stride = 0;
  EXPECT_THROW(trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg), InvalidProblem);
}

TEST(Trkl, DefaultStepsAreCoefficientOfBound) {
  const auto gp = small_tensor(11, 3, 3);
  SolverConfig cfg;
  cfg.max_iters = 1;
  const auto r = trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg);
  const StepBounds sb = step_bounds(dft_tubes(gp.problem.op()));
  for (std::size_t i = 0; i < sb.per_row.size(); ++i) {
    EXPECT_DOUBLE_EQ(r.trace.steps[i], 0.9 * sb.per_row[i]);
  }
  EXPECT_TRUE(r.trace.warnings.empty());
  cfg.step = StepPolicy::explicit_sizes({2.0});
  EXPECT_FALSE(trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg).trace.warnings.empty());
}

TEST(Trkl, DeterministicGivenSeed) {
  const auto gp = small_tensor(12, 3, 5);
  SolverConfig cfg;
  cfg.max_iters = 300;
  cfg.seed = 77;
  const auto a = trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg);
  const auto b = trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg);
  EXPECT_EQ(a.x, b.x);
  ASSERT_EQ(a.trace.rows.size(), b.trace.rows.size());
  for (std::size_t k = 0; k < a.trace.rows.size(); ++k) {
    EXPECT_EQ(a.trace.rows[k].residual, b.trace.rows[k].residual);
  }
  cfg.seed = 78;
  EXPECT_NE(trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg).x, a.x);
}

TEST(Trkl, FeasibleStartStaysFeasible) {
  const auto gp = small_tensor(13, 0, 6);
  SolverConfig cfg;
  cfg.max_iters = 200;
  const auto r = trkl_solve(gp.problem, *gp.witness, cfg);
  for (const auto& row : r.trace.rows) EXPECT_EQ(row.residual, 0.0);
  EXPECT_LE(test::max_abs_diff(r.x, *gp.witness), 1e-12);
}

TEST(Trkl, ReducesResidualOnMixedSystem) {
  const auto gp = small_tensor(14, 6, 8);
  SolverConfig cfg;
  cfg.max_iters = 3000;
  cfg.log_stride = 100;
  const auto r = trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg);
  EXPECT_LT(r.trace.rows.back().residual, 1e-3 * r.trace.rows.front().residual);
}

TEST(Trklb, RequiresEqualityAndBounds) {
  const auto gt = small_tensor(15, 2, 2);
  EXPECT_THROW(trklb_solve(gt.problem, gt.problem.zero_iterate(), {}), InvalidProblem);
  const auto g2 = small_tensor(15, 3, 0);
  EXPECT_THROW(trklb_solve(g2.problem, g2.problem.zero_iterate(), {}), InvalidProblem);
}

TEST(Trklb, StepWithinBoundsIsPlainUpdate) {
  const auto gp = small_eq_bound(16);
  Rng rng(16);
  const Tensor3 x = *gp.witness - Tensor3::constant(6, 2, 4, 50.0);
  const FeasibilityProblem loose(gp.problem.op(), gp.problem.rhs(),
                                 ConstraintPartition::all_equality(gp.problem.rows()), std::nullopt,
                                 Tensor3::constant(6, 2, 4, 1e6));
  const FeasibilityProblem nobounds(gp.problem.op(), gp.problem.rhs(),
                                    ConstraintPartition::all_equality(gp.problem.rows()));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LT(test::max_abs_diff(trklb_step(loose, x, i, 0.3), trkl_step(nobounds, x, i, 0.3)), 1e-12);
  }
}

TEST(Trklb, LowerBoundOnlyIsEntrywiseMax) {
  const auto gp = small_eq_bound(17);
  const Tensor3 zero(6, 2, 4);
  const FeasibilityProblem lower(gp.problem.op(), gp.problem.rhs(),
                                 ConstraintPartition::all_equality(gp.problem.rows()), std::nullopt,
                                 std::nullopt, zero);
  const FeasibilityProblem nobounds(gp.problem.op(), gp.problem.rhs(),
                                    ConstraintPartition::all_equality(gp.problem.rows()));
  Rng rng(17);
  const Tensor3 x = positive_part(random_tensor(6, 2, 4, rng));
  const Tensor3 z = trkl_step(nobounds, x, 2, 0.4);
  const Tensor3 y = trklb_step(lower, x, 2, 0.4);
  for (std::size_t q = 0; q < y.size(); ++q) {
    EXPECT_GE(y.data()[q], 0.0);
    EXPECT_NEAR(y.data()[q], std::max(z.data()[q], 0.0), 1e-12);
  }
}

TEST(Trklb, BoundsHoldAlongRun) {
  const auto gp = small_eq_bound(18);
  const Tensor3& up = *gp.problem.upper_bound();
  SolverConfig cfg;
  cfg.max_iters = 1000;
  cfg.log_stride = 1;
  cfg.seed = 5;
  Rng rng(18);
  std::size_t checks = 0;
  bool ok = true;
  trklb_solve(gp.problem, random_tensor(6, 2, 4, rng), cfg,
              [&](std::size_t, const Tensor3& x, double) {
                ++checks;
                for (std::size_t q = 0; q < x.size(); ++q) ok = ok && x.data()[q] <= up.data()[q];
              });
  EXPECT_TRUE(ok);
  EXPECT_EQ(checks, 1001u);
}

TEST(Trklb, ProjectsInitialIterateAndKeepsFeasibleStart) {
  const auto gp = small_eq_bound(19);
  SolverConfig cfg;
  cfg.max_iters = 100;
  const auto r = trklb_solve(gp.problem, *gp.witness, cfg);
  for (const auto& row : r.trace.rows) EXPECT_LT(row.residual, 1e-10);
  const Tensor3 above = *gp.problem.upper_bound() + Tensor3::constant(6, 2, 4, 3.0);
  cfg.max_iters = 0;
  const auto s = trklb_solve(gp.problem, above, cfg);
  EXPECT_EQ(s.x, *gp.problem.upper_bound());
}

TEST(ProjectBounds, ClipsBothSides) {
  const auto gp = small_eq_bound(20);
  const FeasibilityProblem p(gp.problem.op(), gp.problem.rhs(),
                             ConstraintPartition::all_equality(gp.problem.rows()), std::nullopt,
                             Tensor3::constant(6, 2, 4, 1.0), Tensor3::constant(6, 2, 4, -1.0));
  Rng rng(20);
  const Tensor3 x = 3.0 * random_tensor(6, 2, 4, rng);
  const Tensor3 y = project_bounds(p, x);
  for (std::size_t q = 0; q < y.size(); ++q) {
    EXPECT_EQ(y.data()[q], std::clamp(x.data()[q], -1.0, 1.0));
  }
}
