#include "../tools/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = tkz::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("tkz_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, GenIsByteIdentical) {
  const fs::path d = scratch("gen");
  for (const char* sub : {"a", "b"}) {
    const CliResult r = run({"gen", "--family", "tensor_gaussian", "--seed", "3", "--m-eq", "4",
                       "--m-ineq", "3", "--l", "5", "--p", "2", "--n", "4", "--out",
                       (d / sub).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"problem.txt", "A.t3d", "B.t3d", "X.t3d"}) {
    EXPECT_EQ(slurp(d / "a" / f), slurp(d / "b" / f)) << f;
    EXPECT_FALSE(slurp(d / "a" / f).empty()) << f;
  }
}

TEST(Cli, SolveAndRate) {
  const fs::path d = scratch("solve");
  ASSERT_EQ(run({"gen", "--family", "tensor_gaussian", "--m-eq", "8", "--m-ineq", "0", "--l",
                 "4", "--p", "1", "--n", "3", "--out", (d / "p").string()})
                .code,
            0);
  const CliResult s = run({"trkl", "--problem", (d / "p").string(), "--iters", "400", "--log-stride",
                     "10", "--seed", "2", "--trace", (d / "t.csv").string(), "--x-out",
                     (d / "x.t3d").string()});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("trkl: 400 iterations"), std::string::npos) << s.out;
  EXPECT_TRUE(fs::exists(d / "x.t3d"));
  const CliResult r = run({"rate", (d / "t.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("slope -"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("hit_zero"), std::string::npos);
}

TEST(Cli, TraceToStdout) {
  const fs::path d = scratch("stdout");
  ASSERT_EQ(run({"gen", "--family", "eq_bound", "--m-eq", "3", "--l", "4", "--p", "1", "--n",
                 "2", "--out", (d / "p").string()})
                .code,
            0);
  const CliResult s = run({"trklb", "--problem", (d / "p").string(), "--iters", "20"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("iteration,elapsed_seconds,residual"), std::string::npos);
  EXPECT_NE(s.out.find("# solver: trklb"), std::string::npos) << s.out;
}

TEST(Cli, ConfigModeWritesTraces) {
  const fs::path d = scratch("config");
  std::ofstream(d / "exp.cfg") << "family = tensor_gaussian\nm_eq = 4\nm_ineq = 4\nl = 3\n"
                                  "p = 1\nn = 2\niters = 100\ntrials = 3\nout_dir = runs\n";
  const CliResult r = run({"trkl", "--config", (d / "exp.cfg").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(d / "runs" / "trial_002.csv"));
  EXPECT_TRUE(fs::exists(d / "runs" / "summary.csv"));
}

TEST(Cli, RateOnGeometricTrace) {
  const fs::path d = scratch("rate");
  {
    std::ofstream t(d / "g.csv");
    t.precision(17);
    t << "iteration,elapsed_seconds,residual\n";
    double r = 1.0;
    for (int k = 0; k < 30; ++k, r *= 0.5) t << k << ",0," << r << "\n";
  }
  const CliResult r = run({"rate", (d / "g.csv").string(), "--burn-in", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("slope -0.69314718"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("points 30"), std::string::npos);
}

TEST(Cli, ErrorsAreDistinct) {
  const fs::path d = scratch("errors");
  const CliResult none = run({});
  EXPECT_NE(none.code, 0);
  const CliResult fam = run({"gen", "--family", "nope", "--out", (d / "x").string()});
  EXPECT_EQ(fam.code, 3);
  EXPECT_NE(fam.err.find("nope"), std::string::npos);
  const CliResult no_src = run({"trkl"});
  EXPECT_EQ(no_src.code, 2);
  EXPECT_NE(no_src.err.find("--problem"), std::string::npos);
  std::ofstream(d / "bad.csv") << "iteration,elapsed_seconds,residual\n0,0,1\n";
  const CliResult few = run({"rate", (d / "bad.csv").string()});
  EXPECT_EQ(few.code, 2);
  ASSERT_EQ(run({"gen", "--family", "tensor_gaussian", "--out", (d / "p").string()}).code, 0);
  const CliResult bm = run({"bmrk", "--problem", (d / "p").string(), "--iters", "5"});
  EXPECT_EQ(bm.code, 2);
  EXPECT_NE(bm.err, fam.err);
  const CliResult mode = run({"deblur", "--mode", "blurry"});
  EXPECT_EQ(mode.code, 2);
  EXPECT_NE(mode.err.find("exact or noisy"), std::string::npos);
}

TEST(Cli, Selftest) {
  const CliResult r = run({"selftest", "--seed", "4"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
