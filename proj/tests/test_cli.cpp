#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "discover_fixture.hpp"
#include "json.hpp"
#include "modsat/cnf.hpp"
#include "oracle.hpp"

using namespace modsat;
namespace fs = std::filesystem;

namespace {

const std::string kCli = std::string(MODSAT_TEST_DATA) + "/cli";

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("modsat-cli-" + std::to_string(getpid()) + "-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

} // namespace

TEST(Solve, TrivialSatExits10WithVerifiedModel) {
  const CliRun r = cli({"solve", kCli + "/trivial-sat.cnf"});
  EXPECT_EQ(r.code, 10);
  EXPECT_NE(r.out.find("s SATISFIABLE\n"), std::string::npos);
  // Rebuild the assignment from the v lines and check it independently.
  const Formula f = read_dimacs_file(kCli + "/trivial-sat.cnf").formula;
  Assignment a(f.num_vars);
  std::istringstream in(r.out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) != 0) continue;
    std::istringstream vs(line.substr(2));
    long lit;
    while (vs >> lit)
      if (lit != 0) a.set(static_cast<Var>(std::labs(lit) - 1), lit > 0);
  }
  EXPECT_TRUE(test::satisfies(f, a));
}

TEST(Solve, TrivialUnsatExits20) {
  const CliRun r = cli({"solve", kCli + "/trivial-unsat.cnf"});
  EXPECT_EQ(r.code, 20);
  EXPECT_NE(r.out.find("s UNSATISFIABLE\n"), std::string::npos);
}

TEST(Usage, ErrorsExitOneAndRuntimeFailuresTwo) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"solve"}).code, 1);
  EXPECT_EQ(cli({"solve", kCli + "/trivial-sat.cnf", "--no-such-flag"}).code, 1);
  EXPECT_EQ(cli({"bench", "--dataset", kCli + "/missing.json"}).code, 1);
  EXPECT_EQ(cli({"evolve", "--dataset", kCli + "/par2/manifest.json", "--hooks", "9"}).code, 1);
  // Replay mode without a transcript is a runtime failure.
  EXPECT_EQ(cli({"discover", "--dataset", kCli + "/par2/manifest.json", "--llm-mode", "replay"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Bench, StubRunnerWorkedExampleShows160) {
  const CliRun r = cli({"bench", "--dataset", kCli + "/par2/manifest.json", "--stub", kCli + "/par2/stub.tsv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("par2").get<double>(), 160.0);
  EXPECT_EQ(j.at("solved").get<int>(), 1);
}

TEST(Config, FileValuesApplyAndFlagsWin) {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "run.toml") << "[bench]\ntimeout = 50\nstub = \"" << kCli << "/par2/stub.tsv\"\n";
  const std::string cfg = (dir / "run.toml").string();
  const std::string m = kCli + "/par2/manifest.json";
  // Timeout 50 from the file: every run fails, PAR-2 = 2 * 50.
  CliRun r = cli({"--config", cfg, "bench", "--dataset", m});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).at("par2").get<double>(), 100.0);
  r = cli({"--config", cfg, "bench", "--dataset", m, "--timeout", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).at("par2").get<double>(), 160.0);
}

TEST(Pipeline, GenBenchReportIsReproducible) {
  const fs::path dir = scratch("pipeline");
  const std::string data = (dir / "data").string();
  ASSERT_EQ(cli({"gen", "--family", "random-3sat", "--count", "6", "--n", "40", "--seed", "3", "--timeout", "5",
                 "--out", data})
                .code,
            0);
  const std::string m = data + "/manifest.json";
  std::vector<std::string> bench{"bench", "--dataset", m, "--time-model", "work", "--jobs", "2", "--seeds", "2"};
  auto with_out = [&](std::vector<std::string> v, const std::string& out) {
    v.push_back("--out");
    v.push_back(out);
    return v;
  };
  ASSERT_EQ(cli(with_out(bench, (dir / "a").string())).code, 0);
  ASSERT_EQ(cli(with_out(bench, (dir / "b").string())).code, 0);
  EXPECT_EQ(slurp(dir / "a.jsonl"), slurp(dir / "b.jsonl"));
  EXPECT_EQ(slurp(dir / "a.summary.json"), slurp(dir / "b.summary.json"));

  const CliRun plot = cli({"report", (dir / "a.jsonl").string(), "--plot"});
  ASSERT_EQ(plot.code, 0) << plot.err;
  EXPECT_EQ(plot.out.rfind("solved\ttime\n", 0), 0u);
  const CliRun summary = cli({"report", (dir / "a.jsonl").string()});
  EXPECT_NE(summary.out.find("solved 12/12"), std::string::npos) << summary.out;

  // Presearch then evolve with the discovered-preset generator, twice.
  const std::vector<std::string> eval{"--dataset", m, "--time-model", "work", "--seed", "5"};
  auto cmd = [&](std::string name, std::vector<std::string> extra) {
    std::vector<std::string> v{std::move(name)};
    v.insert(v.end(), eval.begin(), eval.end());
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  ASSERT_EQ(cli(cmd("presearch", {"--out", (dir / "pre.json").string()})).code, 0);
  for (const char* name : {"evo1.json", "evo2.json"})
    ASSERT_EQ(cli(cmd("evolve", {"--presearch", (dir / "pre.json").string(), "--budget", "6", "--out",
                                 (dir / name).string()}))
                  .code,
              0);
  EXPECT_EQ(slurp(dir / "evo1.json"), slurp(dir / "evo2.json"));
  const auto evo = nlohmann::json::parse(slurp(dir / "evo1.json"));
  EXPECT_LE(evo.at("par2").get<double>(), evo.at("initial_par2").get<double>());
  const CliRun trace = cli({"report", (dir / "evo1.json").string(), "--plot"});
  EXPECT_EQ(trace.out.rfind("iteration\tpar2\n0\t", 0), 0u);
}

TEST(Discover, ReplayThroughCliMatchesFixture) {
  const std::string dir = test::discover_fixture_dir();
  const fs::path out = scratch("discover") / "run.json";
  const CliRun r = cli({"discover", "--dataset", dir + "/manifest.json", "--time-model", "work", "--timeout", "1",
                     "--hooks", "4,1,6,5", "--max-iter", "8", "--seed", "0", "--llm-mode", "replay",
                     "--transcript", dir + "/transcript.jsonl", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto got = nlohmann::json::parse(slurp(out));
  const auto expected = nlohmann::json::parse(slurp(dir + "/expected.json"));
  EXPECT_EQ(got.at("trace"), expected.at("trace"));
  EXPECT_EQ(got.at("suite"), expected.at("suite"));
}

TEST(PromptOpt, ZeroIterationsReturnsInputTemplate) {
  const fs::path dir = scratch("prompt");
  const fs::path tr = dir / "empty.jsonl";
  std::ofstream(tr).flush();
  const CliRun r = cli({"prompt-opt", "--iterations", "0", "--llm-mode", "replay", "--transcript", tr.string(), "--out",
                     (dir / "best.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir / "best.txt"), slurp(std::string(MODSAT_REPO_DATA) + "/prompts/original.txt"));
}
