#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "quasilab/cli.hpp"
#include "quasilab/io.hpp"

using namespace quasilab;
using namespace quasilab::testing;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("quasilab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), {"--out", dir_.string()});
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }
  std::string file(const std::string& name) const { return read_file((dir_ / name).string()); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(CliTest, GenMatchesLibrary) {
  ASSERT_EQ(run({"gen", "--alpha", "w1", "--beta", "1", "--window", "(-1, 0]", "--range", "100"}), 0) << err_.str();
  const auto a = AlgebraSpec::sqrt2_sqrt3();
  const auto lat = make_special_lattice({q(a, "w1")}, {q(a, "1")});
  const auto p = cut_and_project(lat.gamma, RegionSet::parse_intervals(a, "(-1, 0]"), IntBox::range(-100, 100));
  std::ostringstream golden;
  write_pointset(golden, p);
  EXPECT_EQ(file("pointset.csv"), golden.str());
  EXPECT_EQ(cli::Json::parse(out_.str())["points"], 201);
}

TEST_F(CliTest, DiscMatchesLibrary) {
  ASSERT_EQ(run({"disc", "--set", "[0, 1/2)", "--alpha", "w1", "--n", "500", "--two-sided"}), 0) << err_.str();
  const auto a = AlgebraSpec::sqrt2_sqrt3();
  const auto t = discrepancy_trace(RegionSet::parse_intervals(a, "[0, 1/2)"), {q(a, "w1")}, {}, 500, true);
  std::ostringstream golden;
  write_trace_csv(golden, t);
  EXPECT_EQ(file("Dn.csv"), golden.str());
}

TEST_F(CliTest, OutputIsDeterministic) {
  const std::vector<std::string> args{"dual", "--alpha", "w1", "--beta", "1", "--set", "[0, w1 - 1) u [1, 3 - w1)"};
  ASSERT_EQ(run(args), 0);
  const auto first = file("dual.csv");
  ASSERT_EQ(run(args), 0);
  EXPECT_EQ(file("dual.csv"), first);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"brs-make", "--alpha", "w1", "--gamma", "1/2"}), cli::kExitPrecondition);
  EXPECT_NE(err_.str().find("not of the form"), std::string::npos);
  EXPECT_EQ(run({"disc", "--bogus"}), cli::kExitUsage);
  EXPECT_EQ(run({}), cli::kExitUsage);
  EXPECT_EQ(run({"--config", (dir_ / "missing.ini").string(), "disc"}), cli::kExitNoInput);
  EXPECT_EQ(run({"gen", "--alpha", "w1", "--beta", "1", "--window", "[0, 1"}), cli::kExitPrecondition);
  EXPECT_EQ(run({"--help"}), cli::kExitOk);
  EXPECT_NE(out_.str().find("disc"), std::string::npos);
}

TEST_F(CliTest, SearchExhaustedExitCode) {
  const auto a = AlgebraSpec::sqrt2_sqrt3();
  save_region((dir_ / "k.region").string(),
              RegionSet::box({q(a, "1/10"), q(a, "1/10")}, {q(a, "4/10"), q(a, "4/10")}));
  save_region((dir_ / "u.region").string(), RegionSet::box({q(a, "0"), q(a, "0")}, {q(a, "1"), q(a, "1")}));
  EXPECT_EQ(run({"brs-make", "--alpha", "w1, w2", "--gamma", "w1 - 1", "--K", (dir_ / "k.region").string(), "--U",
                 (dir_ / "u.region").string(), "--epsilon", "0.2", "--search-bound", "2"}),
            cli::kExitSearchExhausted)
      << err_.str();
}

TEST_F(CliTest, ConfigFileSuppliesOptions) {
  write_file((dir_ / "run.ini").string(), "[disc]\nset = \"[0, 1/2)\"\nalpha = w1\nn = 3\n");
  ASSERT_EQ(run({"--config", (dir_ / "run.ini").string(), "disc"}), 0) << err_.str();
  EXPECT_EQ(file("Dn.csv"), "n,D_n\n0,0\n1,0.5\n2,1\n3,0.5\n");
}

TEST_F(CliTest, PlotDataRequiresSeries) {
  cli::ExperimentReport empty;
  EXPECT_THROW(cli::emit_plotdata(empty, cli::PlotKind::discrepancy, dir_.string()), PreconditionError);
  EXPECT_THROW(cli::emit_plotdata(empty, cli::PlotKind::bounds, dir_.string()), PreconditionError);
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(CliTest, PlotDataFiles) {
  cli::ExperimentReport rep;
  rep.bounds = {{10, 21, 0.5, 1.5}, {20, 41, 0.4, 1.6}};
  const auto files = cli::emit_plotdata(rep, cli::PlotKind::bounds, dir_.string());
  EXPECT_EQ(files.size(), 2u);
  EXPECT_TRUE(fs::exists(dir_ / "lmin.dat"));
  EXPECT_TRUE(fs::exists(dir_ / "lmin.json"));
  EXPECT_FALSE(fs::exists(dir_ / "lmin_dual.dat"));
}

TEST_F(CliTest, BoundsAndAvdoninRun) {
  ASSERT_EQ(run({"bounds", "--alpha", "w1", "--beta", "1", "--dual-window", "[0, 1)", "--range", "40", "--set",
                 "[0, 1)", "--radii", "10,20"}),
            0)
      << err_.str();
  EXPECT_NE(file("bounds.csv").find("R,size,lambda_min,lambda_max"), std::string::npos);
  ASSERT_EQ(run({"avdonin", "--alpha", "w1", "--beta", "1", "--dual-window", "[0, 1)", "--range", "200"}), 0)
      << err_.str();
  EXPECT_TRUE(cli::Json::parse(out_.str())["verdict"]["satisfied"].get<bool>());
}
