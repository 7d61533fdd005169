#include "tkz/selftest.hpp"

#include "tkz/feasibility.hpp"
#include "tkz/generators.hpp"
#include "tkz/random.hpp"
#include "tkz/solvers.hpp"
#include "tkz/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tkz {

namespace {

Tensor3 random_tensor(std::size_t m, std::size_t l, std::size_t n, Rng& rng) {
  Tensor3 t(m, l, n);
  for (double& v : t.data()) v = rng.normal();
  return t;
}

std::size_t dim(Rng& rng, std::size_t hi) {
  return 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi));
}

double rel(double err, double scale) { return err / (1.0 + scale); }

SelftestCase check(const std::string& name, double worst, double tol) {
  std::ostringstream d;
  d << "worst " << worst << " (tol " << tol << ")";
  return {name, worst <= tol, d.str()};
}

}  // namespace

std::vector<SelftestCase> run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SelftestCase> out;

  {
    double worst = 0.0;
    for (int t = 0; t < 60; ++t) {
      const Tensor3 a = random_tensor(dim(rng, 6), dim(rng, 6), dim(rng, 8), rng);
      const Tensor3 x = random_tensor(a.cols(), dim(rng, 6), a.tubes(), rng);
      const Tensor3 ref = tprod_naive(a, x);
      worst = std::max(worst, rel(frob_norm(tprod_fft(a, x) - ref), frob_norm(ref)));
    }
    out.push_back(check("tprod_fft matches tprod_naive", worst, 1e-10));
  }
  {
    double worst_norm = 0.0, worst_bcirc = 0.0, worst_trip = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Tensor3 a = random_tensor(dim(rng, 5), dim(rng, 5), dim(rng, 9), rng);
      const double sq = sq_frob_norm(a);
      const double n = static_cast<double>(a.tubes());
      worst_norm = std::max(worst_norm, std::abs(dft_tubes(a).sq_norm() - n * sq) / (n * sq));
      worst_bcirc = std::max(worst_bcirc, std::abs(bcirc(a).squaredNorm() - n * sq) / (n * sq));
      worst_trip = std::max(worst_trip, frob_norm(idft_tubes(dft_tubes(a)) - a));
    }
    out.push_back(check("Fourier norm identity", worst_norm, 1e-12));
    out.push_back(check("bcirc norm identity", worst_bcirc, 1e-12));
    out.push_back(check("DFT round trip", worst_trip, 1e-12));
  }
  {
    double worst = 0.0;
    bool exact = true;
    for (int t = 0; t < 100; ++t) {
      const Tensor3 a = random_tensor(dim(rng, 5), dim(rng, 5), dim(rng, 7), rng);
      const Tensor3 x = random_tensor(a.cols(), dim(rng, 4), a.tubes(), rng);
      const Tensor3 b = random_tensor(a.rows(), x.cols(), a.tubes(), rng);
      const double lhs = inner(tprod_fft(a, x), b);
      const double rhs = inner(x, tprod_fft(t_transpose(a), b));
      worst = std::max(worst, rel(std::abs(lhs - rhs), std::abs(lhs)));
      exact = exact && bcirc(t_transpose(a)) == bcirc(a).transpose();
    }
    out.push_back(check("adjoint identity", worst, 1e-10));
    out.push_back({"bcirc transpose identity", exact, exact ? "exact" : "mismatch"});
  }
  {
    double worst = -1e300;
    for (int t = 0; t < 100; ++t) {
      const Tensor3 a = random_tensor(dim(rng, 5), dim(rng, 5), dim(rng, 7), rng);
      const Tensor3 x = random_tensor(a.cols(), dim(rng, 4), a.tubes(), rng);
      const FourierTensor3 ah = dft_tubes(a);
      double smax = 0.0;
      for (std::size_t k = 0; k < a.tubes(); ++k) {
        smax = std::max(smax, fourier_slice_spectral_norm(ah, k));
      }
      worst = std::max(worst, frob_norm(tprod_fft(ah, x)) - smax * frob_norm(x));
    }
    out.push_back(check("product norm bound (excess)", std::max(worst, 0.0), 1e-12));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Tensor3 a = random_tensor(1, dim(rng, 6), dim(rng, 10), rng);
      const double n = static_cast<double>(a.tubes());
      const double b = step_bounds(dft_tubes(a)).per_row[0];
      worst = std::max({worst, 2.0 / n - b, b - 2.0});
    }
    out.push_back(check("step bound range [2/n, 2] (excess)", std::max(worst, 0.0), 1e-12));
  }
  {
    // n = 1 row update against the block update with one-row blocks.
    bool identical = true;
    for (int t = 0; t < 20; ++t) {
      GenSpec spec = GenSpec::defaults(Family::MatrixGaussian);
      spec.m_eq = 4; spec.m_ineq = 5; spec.l = 3; spec.p = 2; spec.block_size = 1;
      spec.seed = rng.next_u64();
      const auto gp = gen_matrix_gaussian(spec);
      const Tensor3 x = random_tensor(3, 2, 1, rng);
      const auto& blocks = gp.problem.paving()->blocks;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        identical = identical && bmrk_step(gp.problem, x, b, 1.3) ==
                                     trkl_step(gp.problem, x, blocks[b][0], 1.3);
      }
    }
    out.push_back({"row update at n = 1 equals block update", identical,
                   identical ? "bit-identical" : "mismatch"});
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const std::size_t m = dim(rng, 4), l = dim(rng, 4), p = dim(rng, 3), n = dim(rng, 6);
      const Tensor3 a = random_tensor(m, l, n, rng);
      const Tensor3 b = random_tensor(m, p, n, rng);
      const FeasibilityProblem prob(a, b, ConstraintPartition::all_equality(m));
      const Tensor3 x = random_tensor(l, p, n, rng);
      const std::size_t i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(m));
      const double step = 0.7;
      const Tensor3 ai = a.row_slice(i);
      const Eigen::MatrixXd bc = bcirc(ai);
      const double alpha = step / sq_frob_norm(ai);
      const Eigen::MatrixXd r = bc * unfold(x) - unfold(b.row_slice(i));
      const Tensor3 ref = fold(unfold(x) - alpha * bc.transpose() * r, n);
      worst = std::max(worst, rel(frob_norm(trkl_step(prob, x, i, step) - ref), frob_norm(ref)));
    }
    out.push_back(check("row update equals matrix-form update", worst, 1e-12));
  }
  {
    GenSpec spec = GenSpec::defaults(Family::EqBound);
    spec.m_eq = 12; spec.l = 6; spec.p = 2; spec.n = 5; spec.seed = rng.next_u64();
    const auto gp = gen_eq_bound(spec);
    SolverConfig cfg;
    cfg.max_iters = 1000;
    cfg.log_stride = 1;
    cfg.seed = rng.next_u64();
    bool ok = true;
    const auto& up = *gp.problem.upper_bound();
    trklb_solve(gp.problem, random_tensor(6, 2, 5, rng), cfg,
                [&](std::size_t, const Tensor3& x, double) {
                  for (std::size_t q = 0; q < x.size(); ++q) {
                    ok = ok && x.data()[q] <= up.data()[q];
                  }
                });
    out.push_back({"TRK-LB iterates satisfy bounds", ok, ok ? "1000 iterations" : "violated"});
  }
  return out;
}

}  // namespace tkz
