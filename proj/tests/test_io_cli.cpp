#include "loopopt/cli.hpp"
#include "loopopt/error.hpp"
#include "loopopt/io.hpp"
#include "test_support.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace loopopt;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("loopopt_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Invocation {
  int code = 0;
  std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "loopopt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  const auto cfg = cli::parse_args(static_cast<int>(argv.size()), argv.data(), out, err, r.code);
  if (cfg) r.code = cli::run(*cfg, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST(Io, JsonRoundTripIsBitExact) {
  std::mt19937_64 rng(5);
  const LoopCurve c = loopopt::testing::random_curve(32, rng);
  const LoopCurve back = curve_from_json(curve_to_json(c));
  ASSERT_EQ(back.size(), c.size());
  EXPECT_TRUE((back.points().array() == c.points().array()).all());
}

TEST(Io, CsvRoundTripIsBitExact) {
  std::mt19937_64 rng(6);
  const LoopCurve c = loopopt::testing::random_curve(16, rng);
  const std::string csv = curve_to_csv(c);
  EXPECT_EQ(csv.substr(0, 11), "theta,x,y\n0");
  const LoopCurve back = curve_from_csv(csv);
  EXPECT_TRUE((back.points().array() == c.points().array()).all());
}

TEST(Io, MalformedInputIsRejected) {
  // Bad content is a validation error; IoError is reserved for the filesystem.
  EXPECT_THROW(curve_from_json("{"), ValidationError);
  EXPECT_THROW(curve_from_json(R"({"n": 8, "points": [[0, 0]]})"), ValidationError);
  EXPECT_THROW(curve_from_csv("theta,x,y\n0,1\n"), ValidationError);
  EXPECT_THROW(curve_from_csv("t,x,y\n"), ValidationError);
}

TEST(Io, AtomicWriteReplacesWholeFile) {
  const fs::path dir = fresh_dir("atomic");
  const fs::path f = dir / "a.txt";
  write_file_atomic(f, "first version, longer");
  write_file_atomic(f, "second");
  EXPECT_EQ(read_file(f), "second");
  EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
  EXPECT_THROW(write_file_atomic(dir / "missing" / "x.txt", "x"), IoError);
  EXPECT_THROW(read_file(dir / "nope.txt"), IoError);
}

TEST(Cli, ParsesGlobalOptions) {
  const char* argv[] = {"loopopt", "flow", "--n-samples", "16", "--alpha", "0.002", "--format", "csv,json",
                        "--dims", "2,3"};
  std::ostringstream out, err;
  int code = -1;
  const auto cfg = cli::parse_args(10, argv, out, err, code);
  ASSERT_TRUE(cfg);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(cfg->command, cli::Command::Flow);
  EXPECT_EQ(cfg->n_samples, 16u);
  EXPECT_EQ(cfg->alpha, 0.002);
  EXPECT_FALSE(cfg->steps);
  EXPECT_TRUE(cfg->wants("json"));
  EXPECT_FALSE(cfg->wants("svg"));
  EXPECT_EQ(cfg->dims, (std::vector<int>{2, 3}));
}

TEST(Cli, BadArgumentsExitWithValidationCode) {
  EXPECT_EQ(invoke({}).code, cli::kValidation);
  EXPECT_EQ(invoke({"nosuch"}).code, cli::kValidation);
  EXPECT_EQ(invoke({"exp1", "--format", "png"}).code, cli::kValidation);
  const fs::path dir = fresh_dir("badargs");
  const Invocation zero = invoke({"exp1", "--alpha", "0", "--output-dir", dir.string()});
  EXPECT_EQ(zero.code, cli::kValidation);
  EXPECT_NE(zero.err.find("step size must be positive"), std::string::npos);
  EXPECT_EQ(invoke({"exp1", "--n-samples", "7", "--output-dir", dir.string()}).code, cli::kValidation);
  EXPECT_EQ(invoke({"exp1", "--metric", "sobolev", "--output-dir", dir.string()}).code, cli::kValidation);
  EXPECT_EQ(invoke({"exp1", "--initial-file", (dir / "none.json").string(), "--output-dir", dir.string()}).code,
            cli::kIo);
}

TEST(Cli, AdmissibilityFailureExitsWithThree) {
  const fs::path dir = fresh_dir("admissibility");
  // Coordinates near 1e200 overflow the tracking objective.
  write_file_atomic(dir / "big.json", curve_to_json(sample_circle(1e200, 16)));
  const Invocation r =
      invoke({"exp1", "--n-samples", "16", "--initial-file", (dir / "big.json").string(), "--output-dir", dir.string()});
  EXPECT_EQ(r.code, cli::kAdmissibility);
  EXPECT_NE(r.err.find("(iteration 0)"), std::string::npos) << r.err;
}

TEST(Cli, FlowCollapseIsAnExpectedOutcome) {
  const fs::path dir = fresh_dir("flowcollapse");
  const Invocation r = invoke({"flow", "--output-dir", dir.string(), "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("collapsed at iteration 502"), std::string::npos) << r.out;
}

TEST(Cli, OutputDirFallsBackToEnvironment) {
  const fs::path dir = fresh_dir("env");
  ::setenv("LOOPOPT_OUTPUT_DIR", dir.string().c_str(), 1);
  const Invocation r = invoke({"spray", "--dims", "2,3", "--format", "csv"});
  ::unsetenv("LOOPOPT_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "spray.csv"));
  EXPECT_FALSE(fs::exists(dir / "spray.json"));
}

TEST(Cli, RunsAreDeterministic) {
  for (const std::string cmd : {"exp1", "exp2", "classify", "seqdiag"}) {
    const fs::path a = fresh_dir(cmd + "_a"), b = fresh_dir(cmd + "_b");
    const std::vector<std::string> common = {cmd, "--n-samples", "32", "--steps", "5", "--kmax", "8"};
    auto args_a = common, args_b = common;
    args_a.insert(args_a.end(), {"--output-dir", a.string()});
    args_b.insert(args_b.end(), {"--output-dir", b.string()});
    ASSERT_EQ(invoke(args_a).code, 0) << cmd;
    ASSERT_EQ(invoke(args_b).code, 0) << cmd;
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      EXPECT_EQ(read_file(e.path()), read_file(b / e.path().filename())) << cmd << ' ' << e.path();
    }
    EXPECT_GT(files, 0u) << cmd;
  }
}

TEST(Cli, InitialFileRoundTripsThroughExp1) {
  const fs::path dir = fresh_dir("initial");
  ASSERT_EQ(invoke({"exp1", "--n-samples", "16", "--steps", "2", "--output-dir", dir.string()}).code, 0);
  const auto iterates = nlohmann::json::parse(read_file(dir / "iterates.json"));
  ASSERT_TRUE(iterates.contains("iterates"));
  nlohmann::json start;
  start["n"] = 16;
  start["points"] = iterates["iterates"].back()["points"];
  write_file_atomic(dir / "start.json", start.dump());
  const fs::path dir2 = fresh_dir("initial2");
  const Invocation r = invoke({"exp1", "--n-samples", "16", "--steps", "1", "--initial-file",
                               (dir / "start.json").string(), "--output-dir", dir2.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(invoke({"exp1", "--n-samples", "32", "--steps", "1", "--initial-file", (dir / "start.json").string(),
                    "--output-dir", dir2.string()})
                .code,
            cli::kValidation);
}
