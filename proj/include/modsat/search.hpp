#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "modsat/evaluation.hpp"
#include "modsat/hooks.hpp"
#include "modsat/llm.hpp"
#include "modsat/prompt.hpp"
#include "modsat/rng.hpp"

namespace modsat {

// PAR-2 of a suite on a subset of a dataset's instances.
struct Evaluator {
  std::size_t num_instances = 0;
  std::function<double(const HeuristicSuite&, std::span<const std::size_t>)> par2;

  static Evaluator from_benchmark(const Benchmark& b);
  double full(const HeuristicSuite& s) const;
};

// Seeded shuffle of 0..n-1, every other position kept: ceil(n/2) indices, ascending.
std::vector<std::size_t> compact_subset(std::size_t n, std::uint64_t seed);

struct PresearchResult {
  std::vector<std::size_t> subset;
  std::array<double, kNumSlots> scores{}; // PAR-2 with hook i reverted to its baseline
  std::vector<int> retained;              // hook numbers 1..7, ascending
  int evaluations = 0;

  nlohmann::json to_json() const;
};

// Reverting a useful hook raises PAR-2, so the `keep` highest scores win;
// ties go to the lower hook number.
PresearchResult presearch(const Evaluator& eval, const HeuristicSuite& full_suite, std::uint64_t seed, int keep = 4);

// Number of slots to mutate: Bin(r, 1/r) conditioned on being positive.
int sample_ell(Rng& rng, int r);

// Produces replacement code for a slot: a DSL program (markers optional) or a
// registry preset id. Throwing counts as a failed attempt.
using ProgramGenerator = std::function<std::string(HookSlot slot, const HeuristicSuite& incumbent)>;

// Turns generator output into a strategy for `slot`; throws on invalid code.
Strategy strategy_from_text(const std::string& text, HookSlot slot);

struct SearchRecord {
  int iteration = 0;
  std::vector<int> hooks; // hook numbers touched
  std::string outcome;    // accepted | rejected | synonymous | broken | transport-error | generator-error
  bool repaired = false;
  bool evaluated = false;
  double score = 0.0;     // PAR-2 of the candidate when evaluated
  double incumbent = 0.0; // f* after this record
  std::string labels;     // candidate strategy labels
  std::string note;

  nlohmann::json to_json() const;
};

struct SearchResult {
  HeuristicSuite suite;
  double score = 0.0;
  double initial_score = 0.0;
  std::vector<int> retained;
  int evaluations = 0; // full-dataset evaluations, the initial one included
  int budget_left = 0;
  std::vector<SearchRecord> history;

  std::vector<double> trace() const; // f* before the first record, then after each
  nlohmann::json to_json() const;
};

struct EvolveConfig {
  int budget = 50;
  int lambda = 1;
  std::uint64_t seed = 0;
};

// Retained hooks come from `active`, the rest from the baselines; accepts ties.
SearchResult evolve(const Evaluator& eval, std::span<const int> retained, const HeuristicSuite& active,
                    const ProgramGenerator& gen, const EvolveConfig& cfg = {});

struct DiscoverConfig {
  int max_iter = 10;
  bool random_slots = false; // round-robin over candidates otherwise
  std::uint64_t seed = 0;
  bool llm_synonym_check = false; // also ask the evaluator role when forms differ
  PromptTemplate prompt = original_prompt_template();
};

struct DiscoverRoles {
  LlmClient& coder;
  LlmClient& evaluator;
  LlmClient& repairer;
};

// Coder/evaluator/repairer loop; integrates strictly better candidates.
SearchResult discover(const Evaluator& eval, std::span<const int> candidates, const HeuristicSuite& initial,
                      const DiscoverRoles& roles, const DiscoverConfig& cfg = {});

// DSL text of whatever currently occupies a slot.
std::string slot_source(const HeuristicSuite& s, HookSlot slot);

} // namespace modsat
