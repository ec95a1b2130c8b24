#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "expanderlab/io.hpp"
#include "expanderlab_cli/commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace expanderlab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("expanderlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, UnknownFlagIsAUsageError) {
  EXPECT_EQ(run({"generate", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"generate", "--kind", "torus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
}

TEST(Cli, GenerateAndSpectrumOfAHyperplane) {
  const auto dir = scratch("hyperplane").string();
  ASSERT_EQ(run({"generate", "--kind", "hyperplane", "--n", "1", "--out", dir}).code, cli::kExitOk);
  EXPECT_TRUE(fs::exists(fs::path(dir) / "hyperplane_1.json"));
  EXPECT_TRUE(fs::exists(fs::path(dir) / "sweep.json"));
  const auto r = run({"spectrum", "--input", "hyperplane_1.json", "--m", "5", "--emit-csv", "--emit-svg", "--out", dir});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(read_file(fs::path(dir) / "hyperplane_1_drift.spectrum.json"));
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(j["eigenvalues"][i].get<double>(), 0.5 + 0.5 * i, 1e-9);
  EXPECT_TRUE(fs::exists(fs::path(dir) / "hyperplane_1_drift.eigenvectors.csv"));
  EXPECT_NE(read_file(fs::path(dir) / "hyperplane_1_drift.svg").find("<svg"), std::string::npos);
}

TEST(Cli, StabilityBottomOfThePlane) {
  const auto dir = scratch("stability").string();
  ASSERT_EQ(run({"generate", "--kind", "hyperplane", "--n", "2", "--out", dir}).code, cli::kExitOk);
  ASSERT_EQ(run({"spectrum", "--input", "hyperplane_2.json", "--operator", "stability", "--m", "1", "--out", dir}).code,
            cli::kExitOk);
  const auto j = nlohmann::json::parse(read_file(fs::path(dir) / "hyperplane_2_stability.spectrum.json"));
  EXPECT_NEAR(j["eigenvalues"][0].get<double>(), 1.5, 1e-9);
}

TEST(Cli, GenerationFailureExitCode) {
  const auto dir = scratch("gen_fail").string();
  EXPECT_EQ(run({"generate", "--kind", "curve", "--tol-residual", "1e-15", "--out", dir}).code, cli::kExitGeneration);
}

TEST(Cli, SpectralFailureExitCode) {
  const auto dir = scratch("spec_fail").string();
  ASSERT_EQ(run({"generate", "--kind", "curve", "--d0", "1", "--smax", "8", "--out", dir}).code, cli::kExitOk);
  EXPECT_EQ(run({"spectrum", "--input", "curve_d0_1.json", "--radius", "12", "--out", dir}).code, cli::kExitSpectral);
  EXPECT_EQ(run({"spectrum", "--input", "missing.json", "--out", dir}).code, cli::kExitUsage);
}

TEST(Cli, VerifyWritesReports) {
  const auto dir = scratch("verify").string();
  const auto r = run({"verify", "--default-sweep", "--theorem", "lambda1", "--threads", "2", "--out", dir});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto j = nlohmann::json::parse(read_file(fs::path(dir) / "report.json"));
  EXPECT_EQ(j["environment"]["unexpected_failures"], 0);
  EXPECT_EQ(j["checks"].size(), 9u);
  EXPECT_TRUE(fs::exists(fs::path(dir) / "report.md"));
}

TEST(Cli, VerifyReportsUnexpectedFailures) {
  const auto dir = scratch("verify_fail").string();
  EXPECT_EQ(run({"verify", "--default-sweep", "--theorem", "lambda1", "--radius", "30", "--out", dir}).code,
            cli::kExitVerification);
  EXPECT_EQ(run({"verify", "--out", dir}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--default-sweep", "--theorem", "nope", "--out", dir}).code, cli::kExitUsage);
}

TEST(Cli, VerifyFromGeneratedSweep) {
  const auto dir = scratch("verify_input").string();
  ASSERT_EQ(run({"generate", "--kind", "sweep", "--out", dir}).code, cli::kExitOk);
  const auto r = run({"verify", "--input", "sweep.json", "--include-negative-controls", "--out", dir});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out;
}

TEST(Cli, OutputsAreDeterministic) {
  const auto a = scratch("det_a").string();
  const auto b = scratch("det_b").string();
  ASSERT_EQ(run({"generate", "--kind", "rotational", "--cap-height", "0.5", "--out", a}).code, cli::kExitOk);
  ASSERT_EQ(run({"generate", "--kind", "rotational", "--cap-height", "0.5", "--threads", "3", "--out", b}).code,
            cli::kExitOk);
  EXPECT_EQ(read_file(fs::path(a) / "rotational_n2_h0.5.json"), read_file(fs::path(b) / "rotational_n2_h0.5.json"));
  EXPECT_EQ(read_file(fs::path(a) / "sweep.json"), read_file(fs::path(b) / "sweep.json"));
}

TEST(Cli, HermiteTable) {
  const auto r = run({"hermite", "--n", "2", "--max-order", "2"});
  ASSERT_EQ(r.code, cli::kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k1,k2,exact,numeric,difference");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
  const auto r3 = run({"hermite", "--n", "3", "--max-order", "0"});
  EXPECT_NE(r3.out.find("0,0,0,1.5,"), std::string::npos);
}
