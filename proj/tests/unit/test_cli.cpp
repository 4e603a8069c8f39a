#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "tmscat/errors.hpp"
#include "tmscat/io.hpp"

namespace tmscat::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tmscat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("TMSCAT_THREADS");
  }

  fs::path write_doc(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int run_cmd(Command c, const fs::path& input, const std::optional<fs::path>& output, std::string* out_text = nullptr,
              std::string* err_text = nullptr, Knobs knobs = {}) {
    RunConfig cfg;
    cfg.command = c;
    cfg.input = input;
    cfg.output = output;
    cfg.knobs = knobs;
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(cfg, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
  }

  fs::path dir_;
};

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_decimal(cell));
    rows.push_back(row);
  }
  return rows;
}

TEST_F(CliTest, ThresholdGainMinimumIsZeroAtNinetyDegrees) {
  const fs::path in = write_doc("g.json", R"({"eta": "1.5", "L": "1"})");
  std::string out;
  Knobs knobs;
  knobs.theta_samples = 181;
  ASSERT_EQ(run_cmd(Command::threshold_gain, in, std::nullopt, &out, nullptr, knobs), kExitOk);
  EXPECT_EQ(out.rfind("theta_deg,g_times_L\n", 0), 0u);
  const auto rows = parse_csv(out);
  ASSERT_EQ(rows.size(), 181u);
  std::size_t arg_min = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i][1] < rows[arg_min][1]) arg_min = i;
  }
  EXPECT_EQ(rows[arg_min][0], 90.0);
  EXPECT_EQ(rows[arg_min][1], 0.0);
  EXPECT_EQ(rows.front()[0], 0.0);
  EXPECT_EQ(rows.back()[0], 180.0);
}

TEST_F(CliTest, SingularPointInteractionExitsWithThree) {
  const fs::path in = write_doc("d.json", R"({"k": "2", "strength": {"re": "0", "im": "4"}})");
  std::string err;
  EXPECT_EQ(run_cmd(Command::delta2d, in, dir_ / "out", nullptr, &err), kExitNumeric);
  EXPECT_NE(err.find("\"error\":\"spectral singularity\""), std::string::npos) << err;
}

TEST_F(CliTest, Delta2DWritesArtifacts) {
  const fs::path in = write_doc("d.json", R"({"k": 2, "strength": {"re": 1, "im": 0}, "N": 8})");
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run_cmd(Command::delta2d, in, out), kExitOk);
  for (const char* name : {"amplitude.csv", "t_pm.csv", "metadata.json"}) EXPECT_TRUE(fs::exists(out / name)) << name;
  const auto rows = parse_csv(slurp(out / "amplitude.csv"));
  ASSERT_FALSE(rows.empty());
  const double expected = std::norm(std::sqrt(2.0 / pi) * cplx(4.0, -1.0) / 17.0);
  for (const auto& r : rows) EXPECT_NEAR(r[3], expected, 1e-12);
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossRunsAndThreads) {
  const fs::path in = write_doc("s.json", R"({
    "k": "2", "N": 8, "theta_samples": 24,
    "potential": {"kind": "gaussian", "amplitude": {"re": "0.5", "im": "0"}, "sigma_x": "0.5", "sigma_y": "0.5"},
    "evolution": {"steps": 200, "halving_check": false}})");
  ASSERT_EQ(run_cmd(Command::scatter, in, dir_ / "a"), kExitOk);
  ASSERT_EQ(run_cmd(Command::scatter, in, dir_ / "b"), kExitOk);
  setenv("TMSCAT_THREADS", "3", 1);
  ASSERT_EQ(run_cmd(Command::scatter, in, dir_ / "c"), kExitOk);
  for (const char* name : {"amplitude.csv", "t_pm.csv", "metadata.json"}) {
    const std::string a = slurp(dir_ / "a" / name);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir_ / "b" / name)) << name;
    EXPECT_EQ(a, slurp(dir_ / "c" / name)) << name;
    EXPECT_EQ(a.find('\r'), std::string::npos);
  }
}

TEST_F(CliTest, SlabTableIsSortedAndIncludesNormalIncidence) {
  const fs::path in = write_doc("s.json", R"({"k": "2", "epsilon": {"re": "2", "im": "0.01"}, "L": "1", "N": 6})");
  std::string out;
  ASSERT_EQ(run_cmd(Command::slab, in, std::nullopt, &out), kExitOk);
  const auto rows = parse_csv(out);
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1][0], rows[i][0]);
  EXPECT_EQ(rows[3][0], 0.0);
  EXPECT_EQ(rows[3].size(), 9u);
}

TEST_F(CliTest, SlabDefectReportsIdentityResidual) {
  const fs::path in = write_doc("s.json", R"({"k": "2", "epsilon": {"re": "2", "im": "0.01"}, "L": "1",
                                              "strength": {"re": "1", "im": "0"}, "N": 16})");
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run_cmd(Command::slab_defect, in, out), kExitOk);
  EXPECT_NE(slurp(out / "metadata.json").find("identity_residual"), std::string::npos);
  EXPECT_FALSE(parse_csv(slurp(out / "amplitude.csv")).empty());
}

TEST_F(CliTest, Delta3DReport) {
  const fs::path in = write_doc("d.json", R"({"k": "1", "strength": {"re": "3", "im": "0"}})");
  std::string out;
  ASSERT_EQ(run_cmd(Command::delta3d, in, std::nullopt, &out), kExitOk);
  EXPECT_NE(out.find("\"scattering_length\""), std::string::npos);
  EXPECT_NE(out.find("\"cross_section_scale\": \"4.1887902047863905\""), std::string::npos) << out;
}

TEST_F(CliTest, SingularityRootReport) {
  const fs::path in = write_doc("r.json", R"({"k": "2", "epsilon": {"re": "2.8681861248011127", "im": "-1.9413112949847968"},
                                              "L": "1", "unknown": "k", "guess": {"re": "1.9", "im": "0"}})");
  std::string out;
  ASSERT_EQ(run_cmd(Command::singularity, in, std::nullopt, &out), kExitOk);
  EXPECT_NE(out.find("\"root_re\": \"2\""), std::string::npos) << out;
  EXPECT_NE(out.find("\"residual\""), std::string::npos);
}

TEST_F(CliTest, NoRootExitsWithThree) {
  const fs::path in = write_doc("r.json", R"({"k": "2", "epsilon": "1", "L": "1", "guess": "1"})");
  std::string err;
  EXPECT_EQ(run_cmd(Command::singularity, in, std::nullopt, nullptr, &err), kExitNumeric);
  EXPECT_NE(err.find("\"error\":\"no root\""), std::string::npos) << err;
}

TEST_F(CliTest, ParseErrorsExitWithTwo) {
  EXPECT_EQ(run_cmd(Command::delta2d, dir_ / "missing.json", std::nullopt), kExitUsage);
  EXPECT_EQ(run_cmd(Command::delta2d, write_doc("bad.json", "{ not json"), std::nullopt), kExitUsage);
  EXPECT_EQ(run_cmd(Command::delta2d, write_doc("arr.json", "[1, 2]"), std::nullopt), kExitUsage);
  EXPECT_EQ(run_cmd(Command::delta2d, write_doc("nok.json", R"({"strength": 1})"), std::nullopt), kExitUsage);
  EXPECT_EQ(run_cmd(Command::threshold_gain, write_doc("eta.json", R"({"eta": "0.5", "L": "1"})"), std::nullopt),
            kExitUsage);
  EXPECT_EQ(run_cmd(Command::scatter, write_doc("kind.json", R"({"k": 1, "potential": {"kind": "torus"}})"),
                    std::nullopt),
            kExitUsage);
  std::string err;
  Knobs zero;
  zero.N = 0;
  EXPECT_EQ(run_cmd(Command::delta2d, write_doc("ok.json", R"({"k": 1, "strength": 1})"), std::nullopt, nullptr, &err,
                    zero),
            kExitUsage);
  EXPECT_NE(err.find("\"exit\":2"), std::string::npos);
}

TEST_F(CliTest, CommandNames) {
  for (Command c : {Command::delta2d, Command::delta3d, Command::slab, Command::slab_defect, Command::threshold_gain,
                    Command::scatter, Command::singularity, Command::selftest}) {
    EXPECT_EQ(parse_command(command_name(c)), c);
  }
  EXPECT_THROW(parse_command("plot"), ParseError);
}

}  // namespace
}  // namespace tmscat::cli
