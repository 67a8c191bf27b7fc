// Runs the hcube executable end to end and checks the exit-code contract.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hcube/hcube.hpp"

namespace fs = std::filesystem;
using hcube::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hcube_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string command = std::string(HCUBE_CLI_PATH) + " " + args + " 2>" + path("stderr.txt");
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  json load(const std::string& name) const { return hcube::read_json_file(path(name)); }

  void write(const std::string& name, const json& j) const { std::ofstream(path(name)) << j.dump(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, VerifyDefaultPasses) {
  EXPECT_EQ(run("--command verify --out " + path("v.json")), 0);
  const json report = load("v.json");
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_EQ(report["config"]["n"], 6);
}

TEST_F(Cli, VerifySingleCoordinate) { EXPECT_EQ(run("--command verify --n 1 --out " + path("v.json")), 0); }

TEST_F(Cli, VerifyInjectedFaultFails) {
  EXPECT_EQ(run("--command verify --n 3 --inject-fault --out " + path("v.json")), 1);
  EXPECT_NE(slurp("stderr.txt").find("averaging_identity"), std::string::npos);
}

TEST_F(Cli, EvalConstantIsDegenerate) {
  write("c.json", hcube::to_json(hcube::HypercubeFunction::from_rows(2, {{1}, {1}, {1}, {1}})));
  EXPECT_EQ(run("--command eval --functional pisier --in " + path("c.json") + " --out " + path("r.json")), 3);
  const json r = load("r.json")["report"];
  EXPECT_EQ(r["lhs"], 0.0);
  EXPECT_TRUE(r["degenerate"].get<bool>());
}

TEST_F(Cli, EvalCorollary2MatchesGolden) {
  EXPECT_EQ(run("--command eval --functional corollary2 --p 3 --q 1 --mode exact --in " HCUBE_DATA_DIR
                "/corollary2_family.json --out " +
                path("r.json")),
            0);
  const json r = load("r.json")["report"];
  const json golden = hcube::read_json_file(HCUBE_DATA_DIR "/corollary2_golden.json");
  for (const char* key : {"lhs", "rhs", "ratio"})
    EXPECT_LE(std::abs(r[key].get<double>() / golden[key].get<double>() - 1.0), 1e-9) << key;
}

TEST_F(Cli, EvalTheorem1RepeatedHilbert) {
  const auto f = hcube::random_function(3, 2, 4);
  write("fam.json", hcube::to_json(hcube::FunctionFamily::repeated(f)));
  EXPECT_EQ(run("--command eval --functional theorem1 --in " + path("fam.json") + " --out " + path("r.json")), 0);
  EXPECT_LE(load("r.json")["report"]["ratio"].get<double>(), 1.0 + 1e-12);
}

TEST_F(Cli, InputErrors) {
  std::ofstream(path("bad.json")) << "{\"n\": 2,";
  EXPECT_EQ(run("--command eval --in " + path("bad.json")), 2);
  EXPECT_NE(slurp("stderr.txt").find("bad.json:1:"), std::string::npos);
  EXPECT_EQ(run("--command eval --in " + path("missing.json")), 2);
  EXPECT_EQ(run("--command dance"), 2);
  EXPECT_EQ(run("--no-such-flag"), 2);
  EXPECT_EQ(run("--command eval --functional stein --p 1 --in " HCUBE_DATA_DIR "/corollary2_family.json"), 2);
}

TEST_F(Cli, EstimateCertificateReevaluates) {
  const std::string search = "--command estimate --functional pisier --n 2 --m 2 --q 1 --restarts 2 --iters 10 "
                             "--probes 10 --seed 3 --out ";
  ASSERT_EQ(run(search + path("cert.json")), 0);
  ASSERT_EQ(run(search + path("cert2.json")), 0);
  EXPECT_EQ(slurp("cert.json"), slurp("cert2.json"));
  EXPECT_EQ(run("--command eval --in " + path("cert.json") + " --out " + path("r.json")), 0);
  EXPECT_NEAR(load("r.json")["report"]["ratio"].get<double>(), load("cert.json")["ratio"].get<double>(), 1e-9);

  json tampered = load("cert.json");
  tampered["witness"]["values"][2][1] = tampered["witness"]["values"][2][1].get<double>() + 1e-3;
  write("tampered.json", tampered);
  EXPECT_EQ(run("--command eval --in " + path("tampered.json")), 1);
}

TEST_F(Cli, ConfigReproducesRun) {
  ASSERT_EQ(run("--command eval --functional stein --p 3 --q inf --in " HCUBE_DATA_DIR
                "/corollary2_family.json --out " +
                path("first.json")),
            0);
  json config = load("first.json")["config"];
  config["out"] = path("second.json");
  write("config.json", config);
  ASSERT_EQ(run("--config " + path("config.json")), 0);
  EXPECT_EQ(load("first.json")["report"], load("second.json")["report"]);
  // Flags given next to --config win.
  ASSERT_EQ(run("--config " + path("config.json") + " --q 2"), 0);
  EXPECT_EQ(load("second.json")["config"]["q"], 2.0);
}

TEST_F(Cli, CsvAppends) {
  write("f.json", hcube::to_json(hcube::random_function(2, 1, 1)));
  const std::string args = "--command eval --functional pisier --format csv --in " + path("f.json") + " --out " +
                           path("rows.csv");
  ASSERT_EQ(run(args), 0);
  ASSERT_EQ(run(args + " --q 1"), 0);
  std::istringstream lines(slurp("rows.csv"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 3);
  EXPECT_EQ(slurp("rows.csv").rfind("name,n,m,p,q,lhs,rhs,ratio,seed,mode\n", 0), 0u);
}

TEST_F(Cli, TransformRoundTrip) {
  const auto f = hcube::random_function(3, 2, 5);
  write("f.json", hcube::to_json(f));
  ASSERT_EQ(run("--command transform --in " + path("f.json") + " --out " + path("s.json")), 0);
  ASSERT_EQ(run("--command transform --in " + path("s.json") + " --out " + path("g.json")), 0);
  EXPECT_LE(hcube::relative_deviation(hcube::function_from_json(load("g.json")), f), 1e-12);
}

TEST_F(Cli, BenchIsDeterministicAndAgrees) {
  ASSERT_EQ(run("--command bench --n-min 1 --n 4 --m 1 --samples 200 --out " + path("a.json")), 0);
  ASSERT_EQ(run("--command bench --n-min 1 --n 4 --m 1 --samples 200 --out " + path("b.json")), 0);
  const json a = load("a.json")["bench"];
  const json b = load("b.json")["bench"];
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i]["exact_average"], b[i]["exact_average"]);
    EXPECT_EQ(a[i]["mc_average"], b[i]["mc_average"]);
    EXPECT_LE(a[i]["max_deviation"].get<double>(), 1e-12);
  }
}

TEST_F(Cli, ScanWritesCsv) {
  ASSERT_EQ(run("--command scan --functional pisier --n-min 2 --n 3 --m 1 --restarts 1 --iters 3 --probes 4 "
                "--format csv --out " +
                path("scan.csv")),
            0);
  const std::string csv = slurp("scan.csv");
  EXPECT_EQ(csv.rfind("functional,n,m,p,q,ratio,lhs,rhs,envelope_2e_log_n\n", 0), 0u);
  EXPECT_NE(csv.find("\npisier,3,"), std::string::npos);
}
