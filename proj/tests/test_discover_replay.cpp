#include <gtest/gtest.h>

#include <fstream>

#include "discover_fixture.hpp"
#include "modsat/hooks.hpp"

using namespace modsat;

namespace {

// Forwards to the replay client and counts requests per role.
class CountingLlm : public LlmClient {
public:
  explicit CountingLlm(LlmClient& inner) : inner_(inner) {}
  std::string complete(const ChatRequest& req) override {
    (req.system.find("fix") != std::string::npos ? repairs : coder) += 1;
    return inner_.complete(req);
  }
  int coder = 0;
  int repairs = 0;

private:
  LlmClient& inner_;
};

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

struct Replayed {
  SearchResult result;
  int coder_calls = 0;
  int repair_calls = 0;
  std::size_t remaining = 0;
};

Replayed replay_fixture() {
  const std::string dir = test::discover_fixture_dir();
  const DatasetManifest m = DatasetManifest::load(dir + "/manifest.json");
  const Benchmark bench(load_instances(m), test::discover_eval_options());
  const Evaluator eval = Evaluator::from_benchmark(bench);
  ReplayLlm replay(Transcript::load(dir + "/transcript.jsonl"));
  CountingLlm llm(replay);
  const auto cands = test::discover_candidates();
  Replayed r{discover(eval, cands, HeuristicSuite::all_baseline(), DiscoverRoles{llm, llm, llm},
                      test::discover_config())};
  r.coder_calls = llm.coder;
  r.repair_calls = llm.repairs;
  r.remaining = replay.remaining();
  return r;
}

} // namespace

TEST(DiscoverReplay, ReproducesRecordedRun) {
  const Replayed r = replay_fixture();
  const nlohmann::json expected = load_json(test::discover_fixture_dir() + "/expected.json");
  const SearchResult& res = r.result;

  // Final suite and PAR-2 trace, exactly.
  EXPECT_EQ(res.suite.to_json(), expected.at("suite"));
  EXPECT_EQ(res.trace(), expected.at("trace").get<std::vector<double>>());
  EXPECT_EQ(res.score, expected.at("par2").get<double>());
  EXPECT_EQ(res.to_json(), expected);
  EXPECT_EQ(r.remaining, 0u);

  // The transcript exercises every interesting outcome.
  int accepted = 0, synonymous = 0, repaired = 0, evaluated = 0;
  for (const SearchRecord& rec : res.history) {
    accepted += rec.outcome == "accepted";
    synonymous += rec.outcome == "synonymous";
    repaired += rec.repaired;
    evaluated += rec.evaluated;
    if (rec.outcome == "synonymous") EXPECT_FALSE(rec.evaluated) << rec.iteration;
    if (rec.repaired) EXPECT_TRUE(rec.outcome == "accepted" || rec.outcome == "rejected" || rec.outcome == "broken");
  }
  EXPECT_GE(accepted, 1);
  EXPECT_GE(synonymous, 1);
  EXPECT_GE(repaired, 1);

  // One coder call per iteration, exactly one repair per compile failure.
  EXPECT_EQ(r.coder_calls, static_cast<int>(res.history.size()));
  EXPECT_EQ(r.repair_calls, repaired);
  EXPECT_EQ(res.evaluations, 1 + evaluated);

  // Trace never rises.
  const auto t = res.trace();
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_LE(t[i], t[i - 1]);
  EXPECT_LT(res.score, res.initial_score);
}
