#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "modsat/search.hpp"

using namespace modsat;

namespace {

// Scripted PAR-2: a fixed cost per strategy label, summed over the slots.
struct Landscape {
  std::map<std::string, double> cost; // label -> cost; unknown labels cost `other`
  double other = 10.0;
  mutable int calls = 0;
  mutable std::vector<std::size_t> last_subset;

  Evaluator evaluator(std::size_t n) const {
    return {n, [this](const HeuristicSuite& s, std::span<const std::size_t> subset) {
              ++calls;
              last_subset.assign(subset.begin(), subset.end());
              double total = 0.0;
              for (HookSlot slot : kAllSlots) {
                auto it = cost.find(s.at(slot).label());
                total += it == cost.end() ? other : it->second;
              }
              return total;
            }};
  }
};

std::string restart_prog(int n) {
  return "bool restart_condition() { return conflicts > " + std::to_string(n) + "; }";
}

std::string label_of(const std::string& src, HookSlot slot) { return Strategy::dsl(src, slot).label(); }

std::string marked(const std::string& slot, const std::string& body) {
  return "Here is my rewrite.\n// start " + slot + "\n" + body + "\n// end " + slot + "\n";
}

double binom_conditional(int r, int k) {
  const double p = 1.0 / r;
  const double pk = std::tgamma(r + 1) / (std::tgamma(k + 1) * std::tgamma(r - k + 1)) * std::pow(p, k) *
                    std::pow(1 - p, r - k);
  return pk / (1 - std::pow(1 - p, r));
}

} // namespace

// --- presearch ---

TEST(Presearch, CompactSubsetHalf) {
  for (std::size_t n : {2u, 3u, 10u, 31u}) {
    const auto s = compact_subset(n, 7);
    EXPECT_EQ(s.size(), (n + 1) / 2);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
    EXPECT_LT(s.back(), n);
  }
  EXPECT_EQ(compact_subset(20, 1), compact_subset(20, 1));
  EXPECT_NE(compact_subset(20, 1), compact_subset(20, 2));
}

TEST(Presearch, ScriptedBeneficialHooks) {
  // Discovered versions of hooks 2,4,5,7 help (reverting them costs more);
  // those of 1,3,6 hurt.
  Landscape L;
  L.other = 0.0;
  for (HookSlot s : kAllSlots) {
    const bool good = slot_number(s) == 2 || slot_number(s) == 4 || slot_number(s) == 5 || slot_number(s) == 7;
    L.cost[std::string(discovered_preset(s).id)] = good ? 1.0 : 5.0;
    L.cost[std::string(baseline_preset(s).id)] = 3.0;
  }
  const Evaluator ev = L.evaluator(11);
  const PresearchResult r = presearch(ev, HeuristicSuite::all_discovered(), 3);
  EXPECT_EQ(r.retained, (std::vector<int>{2, 4, 5, 7}));
  EXPECT_EQ(r.evaluations, 7);
  EXPECT_EQ(L.calls, 7);
  EXPECT_EQ(L.last_subset.size(), 6u);
}

TEST(Presearch, TiesKeepLowestHooks) {
  Landscape L;
  const PresearchResult r = presearch(L.evaluator(4), HeuristicSuite::all_discovered(), 0);
  EXPECT_EQ(r.retained, (std::vector<int>{1, 2, 3, 4}));
}

TEST(Presearch, NeedsTwoInstances) {
  Landscape L;
  EXPECT_THROW(presearch(L.evaluator(1), HeuristicSuite::all_discovered(), 0), std::invalid_argument);
}

TEST(Presearch, EdaManifestCandidates) {
  const DatasetManifest m = DatasetManifest::load(std::string(MODSAT_REPO_DATA) + "/manifests/eda.json");
  EXPECT_EQ(m.candidates, (std::vector<int>{2, 5, 6, 7}));
}

// --- evolution ---

TEST(Evolve, EllDistributionMatchesClosedForm) {
  // C(4,1)(1/4)(3/4)^3 / (1 - (3/4)^4) = (27/64) / (175/256).
  EXPECT_NEAR(binom_conditional(4, 1), (27.0 / 64.0) / (175.0 / 256.0), 1e-14);
  EXPECT_NEAR(binom_conditional(4, 1), 0.6178, 1e-3);
  Rng rng(2024);
  constexpr int kDraws = 1000000;
  for (int r : {1, 4, 7}) {
    std::vector<int> counts(static_cast<std::size_t>(r) + 1, 0);
    for (int i = 0; i < kDraws; ++i) ++counts[static_cast<std::size_t>(sample_ell(rng, r))];
    EXPECT_EQ(counts[0], 0);
    for (int k = 1; k <= r; ++k)
      EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / double(kDraws), binom_conditional(r, k), 0.002) << r << " " << k;
  }
}

TEST(Evolve, InitialSuiteMixesActiveAndBaseline) {
  Landscape L;
  const std::vector<int> R{2, 5};
  const auto res = evolve(L.evaluator(3), R, HeuristicSuite::all_discovered(),
                          [](HookSlot s, const HeuristicSuite&) { return std::string(baseline_preset(s).id); }, {0});
  EXPECT_EQ(res.history.size(), 0u);
  EXPECT_EQ(res.evaluations, 1);
  for (HookSlot s : kAllSlots) {
    const bool active = slot_number(s) == 2 || slot_number(s) == 5;
    EXPECT_EQ(res.suite.at(s).id(), active ? discovered_preset(s).id : baseline_preset(s).id);
  }
}

TEST(Evolve, ScriptedLandscapeReachesOptimumWithinBudget) {
  // Each retained slot has programs with cost 9..0; the best has cost 0.
  Landscape L;
  const std::vector<int> R{4, 6};
  for (int n = 0; n < 10; ++n) L.cost[label_of(restart_prog(n), HookSlot::RestartCondition)] = 9 - n;
  std::vector<std::string> bump;
  for (int n = 0; n < 10; ++n) {
    bump.push_back("void var_bump_activity(int v, real inc) { activity[v] = activity[v] + inc * " +
                   std::to_string(n + 1) + ".0; }");
    L.cost[label_of(bump.back(), HookSlot::VarBumpActivity)] = 9 - n;
  }
  Rng gen_rng(5);
  auto gen = [&](HookSlot s, const HeuristicSuite&) {
    const auto k = static_cast<int>(gen_rng.below(10));
    return s == HookSlot::RestartCondition ? restart_prog(k) : bump[static_cast<std::size_t>(k)];
  };
  EvolveConfig cfg;
  cfg.budget = 50;
  cfg.seed = 11;
  const auto res = evolve(L.evaluator(5), R, HeuristicSuite::all_baseline(), gen, cfg);
  ASSERT_EQ(res.history.size(), 50u);
  EXPECT_EQ(res.evaluations, 51);
  EXPECT_EQ(res.budget_left, 0);
  const auto tr = res.trace();
  for (std::size_t i = 1; i < tr.size(); ++i) EXPECT_LE(tr[i], tr[i - 1]);
  EXPECT_EQ(res.score, 5 * 10.0); // the five untouched slots cost 10 each; retained ones reach 0
  for (const SearchRecord& r : res.history) {
    EXPECT_TRUE(r.evaluated);
    EXPECT_FALSE(r.hooks.empty());
    for (int h : r.hooks) EXPECT_TRUE(h == 4 || h == 6);
  }
}

TEST(Evolve, TiesAreAccepted) {
  Landscape L; // every suite costs the same
  int n = 0;
  const std::vector<int> R{4};
  const auto res = evolve(L.evaluator(2), R, HeuristicSuite::all_baseline(),
                          [&](HookSlot, const HeuristicSuite&) { return restart_prog(n++); }, {5, 1, 0});
  ASSERT_EQ(res.history.size(), 5u);
  for (const SearchRecord& r : res.history) EXPECT_EQ(r.outcome, "accepted");
  EXPECT_EQ(res.suite.at(HookSlot::RestartCondition).label(), label_of(restart_prog(4), HookSlot::RestartCondition));
}

TEST(Evolve, GeneratorFailuresConsumeBudget) {
  Landscape L;
  int n = 0;
  const std::vector<int> R{4};
  const auto res = evolve(L.evaluator(2), R, HeuristicSuite::all_baseline(),
                          [&](HookSlot, const HeuristicSuite&) -> std::string {
                            if (n++ % 2) throw LlmError("down");
                            return n % 4 == 1 ? restart_prog(n) : "bool restart_condition( {";
                          },
                          {10, 1, 0});
  ASSERT_EQ(res.history.size(), 10u);
  int failed = 0;
  for (const SearchRecord& r : res.history) failed += r.outcome == "generator-error";
  EXPECT_GT(failed, 5);
  EXPECT_EQ(res.evaluations, 1 + 10 - failed);
}

TEST(Evolve, LambdaOffspringShareBudget) {
  Landscape L;
  int n = 0;
  const std::vector<int> R{4};
  EvolveConfig cfg;
  cfg.budget = 50;
  cfg.lambda = 3;
  const auto res = evolve(L.evaluator(2), R, HeuristicSuite::all_baseline(),
                          [&](HookSlot, const HeuristicSuite&) { return restart_prog(n++); }, cfg);
  EXPECT_EQ(res.history.size(), 50u);
  EXPECT_EQ(res.evaluations, 51);
  EXPECT_EQ(res.history.back().iteration, 16); // 16 full steps of 3, then a partial one
}

TEST(Evolve, PresetIdsAndValidation) {
  EXPECT_EQ(strategy_from_text(std::string(discovered_preset(HookSlot::RestartCondition).id) + "\n",
                               HookSlot::RestartCondition)
                .kind(),
            Strategy::Kind::Native);
  EXPECT_THROW(strategy_from_text("rephase_condition/baseline", HookSlot::RestartCondition), std::invalid_argument);
  Landscape L;
  const std::vector<int> empty, bad{8}, dup{2, 2};
  auto gen = [](HookSlot, const HeuristicSuite&) { return std::string(); };
  EXPECT_THROW(evolve(L.evaluator(2), empty, HeuristicSuite::all_baseline(), gen), std::invalid_argument);
  EXPECT_THROW(evolve(L.evaluator(2), bad, HeuristicSuite::all_baseline(), gen), std::invalid_argument);
  EXPECT_THROW(evolve(L.evaluator(2), dup, HeuristicSuite::all_baseline(), gen), std::invalid_argument);
}

TEST(Evolve, Deterministic) {
  Landscape L;
  for (HookSlot s : kAllSlots) L.cost[std::string(discovered_preset(s).id)] = slot_number(s) % 3;
  auto run = [&] {
    Rng g(3);
    return evolve(L.evaluator(4), std::vector<int>{1, 3, 5, 7}, HeuristicSuite::all_baseline(),
                  [&](HookSlot s, const HeuristicSuite&) {
                    return std::string(g.bernoulli(0.5) ? discovered_preset(s).id : baseline_preset(s).id);
                  },
                  {30, 2, 9})
        .to_json()
        .dump();
  };
  EXPECT_EQ(run(), run());
}

// --- discovery ---

namespace {

bool is_repair(const ChatRequest& r) { return r.system.find("fix") != std::string::npos; }

struct DiscoverFixture {
  Landscape L;
  std::unique_ptr<MockLlm> coder, repairer;
  MockLlm evaluator{[](const ChatRequest&) -> std::string { throw LlmError("evaluator unused"); }};
  DiscoverRoles roles() { return {*coder, evaluator, *repairer}; }
};

} // namespace

TEST(Discover, IntegratesImprovementsAcrossSlots) {
  DiscoverFixture f;
  const std::string rc = restart_prog(77);
  const std::string red = "bool reduce_condition() { return learnts_size > 2 * num_clauses; }";
  const std::string vb = "void var_bump_activity(int v, real inc) { activity[v] = activity[v] + 2.0 * inc; }";
  f.L.cost[label_of(rc, HookSlot::RestartCondition)] = 1;
  f.L.cost[label_of(red, HookSlot::ReduceCondition)] = 2;
  f.L.cost[label_of(vb, HookSlot::VarBumpActivity)] = 3;
  f.coder = MockLlm::sequence({marked("restart_condition", rc), marked("reduce_condition", red),
                               marked("var_bump_activity", vb)});
  f.repairer = MockLlm::sequence({});
  const std::vector<int> cands{4, 3, 6};
  DiscoverConfig cfg;
  cfg.max_iter = 3;
  const auto res = discover(f.L.evaluator(3), cands, HeuristicSuite::all_baseline(), f.roles(), cfg);
  ASSERT_EQ(res.history.size(), 3u);
  for (const auto& r : res.history) EXPECT_EQ(r.outcome, "accepted");
  EXPECT_EQ(res.suite.at(HookSlot::RestartCondition).label(), label_of(rc, HookSlot::RestartCondition));
  EXPECT_EQ(res.suite.at(HookSlot::ReduceCondition).label(), label_of(red, HookSlot::ReduceCondition));
  EXPECT_EQ(res.suite.at(HookSlot::VarBumpActivity).label(), label_of(vb, HookSlot::VarBumpActivity));
  EXPECT_EQ(res.trace(), (std::vector<double>{70, 61, 53, 46}));
  EXPECT_EQ(res.evaluations, 4);
}

TEST(Discover, SynonymousGenerationsAreNeverEvaluated) {
  DiscoverFixture f;
  // The baseline restart condition, reformatted with comments.
  const std::string same = "// start restart_condition\n" + preset_dsl("restart_condition/baseline") +
                           "\n// an extra comment\n// end restart_condition\n";
  f.coder = std::make_unique<MockLlm>([&](const ChatRequest&) { return same; });
  f.repairer = MockLlm::sequence({});
  const std::vector<int> cands{4};
  DiscoverConfig cfg;
  cfg.max_iter = 5;
  const auto res = discover(f.L.evaluator(3), cands, HeuristicSuite::all_baseline(), f.roles(), cfg);
  for (const auto& r : res.history) {
    EXPECT_EQ(r.outcome, "synonymous");
    EXPECT_FALSE(r.evaluated);
  }
  EXPECT_EQ(res.evaluations, 1);
  EXPECT_EQ(f.L.calls, 1);
  EXPECT_EQ(res.suite.fingerprint(), HeuristicSuite::all_baseline().fingerprint());
}

TEST(Discover, BrokenThenRepairedEvaluatedOnce) {
  DiscoverFixture f;
  const std::string fixed = restart_prog(5);
  f.L.cost[label_of(fixed, HookSlot::RestartCondition)] = 0;
  f.coder = MockLlm::sequence({marked("restart_condition", "bool restart_condition() { return conflicts > ; }")});
  f.repairer = std::make_unique<MockLlm>([&](const ChatRequest& r) {
    EXPECT_TRUE(is_repair(r));
    EXPECT_NE(r.user.find("syntax-error"), std::string::npos);
    EXPECT_EQ(r.temperature, kEvaluatorTemperature);
    return marked("restart_condition", fixed);
  });
  const std::vector<int> cands{4};
  DiscoverConfig cfg;
  cfg.max_iter = 1;
  const auto res = discover(f.L.evaluator(3), cands, HeuristicSuite::all_baseline(), f.roles(), cfg);
  ASSERT_EQ(res.history.size(), 1u);
  EXPECT_TRUE(res.history[0].repaired);
  EXPECT_EQ(res.history[0].outcome, "accepted");
  EXPECT_EQ(f.repairer->calls(), 1u);
  EXPECT_EQ(f.L.calls, 2); // initial + repaired candidate
}

TEST(Discover, StillBrokenAfterOneRepairEndsIteration) {
  DiscoverFixture f;
  f.coder = std::make_unique<MockLlm>([](const ChatRequest&) { return std::string("bool restart_condition( {"); });
  f.repairer = std::make_unique<MockLlm>([](const ChatRequest&) { return std::string("void nope() {}"); });
  const std::vector<int> cands{4};
  DiscoverConfig cfg;
  cfg.max_iter = 3;
  const auto res = discover(f.L.evaluator(3), cands, HeuristicSuite::all_baseline(), f.roles(), cfg);
  for (const auto& r : res.history) EXPECT_EQ(r.outcome, "broken");
  EXPECT_EQ(f.repairer->calls(), 3u);
  EXPECT_EQ(f.L.calls, 1);
}

TEST(Discover, NonImprovingIsRejectedAndTransportErrorsEndIteration) {
  DiscoverFixture f;
  f.L.cost[label_of(restart_prog(3), HookSlot::RestartCondition)] = 10; // equal to baseline: not strictly better
  f.coder = MockLlm::sequence({restart_prog(3)});
  f.repairer = MockLlm::sequence({});
  const std::vector<int> cands{4};
  DiscoverConfig cfg;
  cfg.max_iter = 2;
  const auto res = discover(f.L.evaluator(3), cands, HeuristicSuite::all_baseline(), f.roles(), cfg);
  ASSERT_EQ(res.history.size(), 2u);
  EXPECT_EQ(res.history[0].outcome, "rejected");
  EXPECT_EQ(res.history[1].outcome, "transport-error");
  EXPECT_EQ(res.score, 70);
}

TEST(Discover, EvaluatorRoleCanDeclareSynonymy) {
  DiscoverFixture f;
  f.coder = MockLlm::sequence({restart_prog(3)});
  f.repairer = MockLlm::sequence({});
  MockLlm judge([](const ChatRequest& r) {
    EXPECT_EQ(r.temperature, kEvaluatorTemperature);
    return std::string("YES, same behaviour");
  });
  const std::vector<int> cands{4};
  DiscoverConfig cfg;
  cfg.max_iter = 1;
  cfg.llm_synonym_check = true;
  const auto res = discover(f.L.evaluator(3), cands, HeuristicSuite::all_baseline(), {*f.coder, judge, *f.repairer}, cfg);
  EXPECT_EQ(res.history[0].outcome, "synonymous");
  EXPECT_EQ(judge.calls(), 1u);
}

TEST(Discover, CoderPromptCarriesKeyCode) {
  DiscoverFixture f;
  std::string seen;
  f.coder = std::make_unique<MockLlm>([&](const ChatRequest& r) {
    seen = r.user;
    return restart_prog(1);
  });
  f.repairer = MockLlm::sequence({});
  const std::vector<int> cands{4};
  DiscoverConfig cfg;
  cfg.max_iter = 1;
  discover(f.L.evaluator(2), cands, HeuristicSuite::all_baseline(), f.roles(), cfg);
  EXPECT_NE(seen.find("rewrite the restart_condition function(s)"), std::string::npos);
  EXPECT_NE(seen.find("// start restart_condition"), std::string::npos);
}
