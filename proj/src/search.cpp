#include "modsat/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "modsat/dsl/dsl.hpp"

namespace modsat {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

void check_hooks(std::span<const int> hooks, const char* what) {
  std::vector<int> seen;
  for (int h : hooks) {
    if (!slot_from_number(h)) throw std::invalid_argument(std::string(what) + ": hook number out of range 1..7");
    if (std::find(seen.begin(), seen.end(), h) != seen.end())
      throw std::invalid_argument(std::string(what) + ": duplicate hook number");
    seen.push_back(h);
  }
}

HookSlot slot_of(int number) { return *slot_from_number(number); }

} // namespace

// --- evaluator ---

Evaluator Evaluator::from_benchmark(const Benchmark& b) {
  Evaluator e;
  e.num_instances = b.instances().size();
  e.par2 = [&b](const HeuristicSuite& s, std::span<const std::size_t> subset) { return b.run(s, subset).report.par2; };
  return e;
}

double Evaluator::full(const HeuristicSuite& s) const {
  std::vector<std::size_t> all(num_instances);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return par2(s, all);
}

// --- presearch ---

std::vector<std::size_t> compact_subset(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; i += 2) out.push_back(idx[i]);
  std::sort(out.begin(), out.end());
  return out;
}

json PresearchResult::to_json() const {
  json per = json::array();
  for (HookSlot s : kAllSlots)
    per.push_back({{"hook", slot_number(s)}, {"slot", slot_name(s)}, {"par2", scores[static_cast<std::size_t>(slot_index(s))]}});
  return {{"subset", subset}, {"scores", per}, {"retained", retained}, {"evaluations", evaluations}};
}

PresearchResult presearch(const Evaluator& eval, const HeuristicSuite& full_suite, std::uint64_t seed, int keep) {
  if (eval.num_instances < 2) throw std::invalid_argument("presearch: dataset needs at least 2 instances");
  if (keep < 1 || keep > kNumSlots) throw std::invalid_argument("presearch: keep must be in 1..7");
  if (!full_suite.complete()) throw std::invalid_argument("presearch: suite is incomplete");
  PresearchResult r;
  r.subset = compact_subset(eval.num_instances, seed);
  for (HookSlot s : kAllSlots) {
    HeuristicSuite probe = full_suite;
    probe.set(Strategy::native(baseline_preset(s).id));
    r.scores[static_cast<std::size_t>(slot_index(s))] = eval.par2(probe, r.subset);
    ++r.evaluations;
  }
  std::vector<int> order(kNumSlots);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return r.scores[static_cast<std::size_t>(a)] > r.scores[static_cast<std::size_t>(b)];
  });
  for (int k = 0; k < keep; ++k) r.retained.push_back(order[static_cast<std::size_t>(k)] + 1);
  std::sort(r.retained.begin(), r.retained.end());
  return r;
}

// --- evolution ---

int sample_ell(Rng& rng, int r) {
  if (r < 1) throw std::invalid_argument("sample_ell: need r >= 1");
  const double p = 1.0 / r;
  for (;;) {
    int ell = 0;
    for (int i = 0; i < r; ++i) ell += rng.bernoulli(p) ? 1 : 0;
    if (ell > 0) return ell;
  }
}

Strategy strategy_from_text(const std::string& text, HookSlot slot) {
  const std::string t = trim(text);
  if (const PresetInfo* p = find_preset(t)) {
    if (p->slot != slot)
      throw std::invalid_argument("preset '" + t + "' belongs to slot " + std::string(slot_name(p->slot)));
    return Strategy::native(t);
  }
  return Strategy::dsl(extract_program(text, slot), slot);
}

json SearchRecord::to_json() const {
  json j = {{"iteration", iteration}, {"hooks", hooks},         {"outcome", outcome}, {"repaired", repaired},
            {"evaluated", evaluated}, {"incumbent", incumbent}, {"labels", labels}};
  if (evaluated) j["score"] = score;
  if (!note.empty()) j["note"] = note;
  return j;
}

std::vector<double> SearchResult::trace() const {
  std::vector<double> t{initial_score};
  for (const SearchRecord& r : history) t.push_back(r.incumbent);
  return t;
}

json SearchResult::to_json() const {
  json hist = json::array();
  for (const SearchRecord& r : history) hist.push_back(r.to_json());
  return {{"schema", "modsat.search/1"},
          {"retained", retained},
          {"initial_par2", initial_score},
          {"par2", score},
          {"evaluations", evaluations},
          {"budget_left", budget_left},
          {"trace", trace()},
          {"suite", suite.to_json()},
          {"history", hist}};
}

SearchResult evolve(const Evaluator& eval, std::span<const int> retained, const HeuristicSuite& active,
                    const ProgramGenerator& gen, const EvolveConfig& cfg) {
  if (retained.empty()) throw std::invalid_argument("evolve: retained set is empty");
  check_hooks(retained, "evolve");
  if (cfg.budget < 0 || cfg.lambda < 1) throw std::invalid_argument("evolve: need budget >= 0 and lambda >= 1");
  if (!active.complete()) throw std::invalid_argument("evolve: suite is incomplete");

  SearchResult res;
  res.retained.assign(retained.begin(), retained.end());
  res.suite = HeuristicSuite::all_baseline();
  for (int h : retained) res.suite.set(active.at(slot_of(h)));
  res.score = res.initial_score = eval.full(res.suite);
  res.evaluations = 1;
  res.budget_left = cfg.budget;

  Rng rng(cfg.seed);
  const int r = static_cast<int>(retained.size());
  int step = 0;
  while (res.budget_left > 0) {
    struct Offspring {
      SearchRecord rec;
      HeuristicSuite suite;
      bool ok = false;
    };
    const HeuristicSuite parent = res.suite;
    std::vector<Offspring> brood;
    for (int o = 0; o < cfg.lambda && res.budget_left > 0; ++o, --res.budget_left) {
      Offspring off;
      off.rec.iteration = step;
      off.suite = parent;
      const int ell = sample_ell(rng, r);
      std::vector<int> pool(retained.begin(), retained.end());
      for (int k = 0; k < ell; ++k)
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(k) + rng.below(static_cast<std::uint64_t>(r - k))]);
      pool.resize(static_cast<std::size_t>(ell));
      off.rec.hooks = pool;
      try {
        for (int h : pool) {
          const HookSlot s = slot_of(h);
          off.suite.set(strategy_from_text(gen(s, parent), s));
          off.rec.labels += (off.rec.labels.empty() ? "" : " ") + off.suite.at(s).label();
        }
        off.ok = true;
      } catch (const std::exception& e) {
        off.rec.outcome = "generator-error";
        off.rec.note = e.what();
      }
      brood.push_back(std::move(off));
    }
    // Acceptance in draw order against the running incumbent.
    for (Offspring& off : brood) {
      if (off.ok) {
        off.rec.score = eval.full(off.suite);
        off.rec.evaluated = true;
        ++res.evaluations;
        if (off.rec.score <= res.score) {
          res.score = off.rec.score;
          res.suite = off.suite;
          off.rec.outcome = "accepted";
        } else {
          off.rec.outcome = "rejected";
        }
      }
      off.rec.incumbent = res.score;
      res.history.push_back(std::move(off.rec));
    }
    ++step;
  }
  return res;
}

// --- discovery ---

std::string slot_source(const HeuristicSuite& s, HookSlot slot) {
  const Strategy& st = s.at(slot);
  return st.kind() == Strategy::Kind::Native ? preset_dsl(st.id()) : st.source();
}

namespace {

std::shared_ptr<const dsl::Program> current_program(const HeuristicSuite& s, HookSlot slot) {
  const Strategy& st = s.at(slot);
  if (st.kind() == Strategy::Kind::Dsl) return st.program();
  return dsl::compile(preset_dsl(st.id()), slot);
}

bool evaluator_says_same(LlmClient& evaluator, HookSlot slot, const std::string& a, const std::string& b) {
  ChatRequest req;
  req.system = "You review SAT solver heuristics for behavioural equivalence.";
  req.user = "Do these two implementations of " + std::string(slot_name(slot)) +
             " behave identically on every solver state? Answer YES or NO.\n\n[A]\n" + a + "\n\n[B]\n" + b + "\n";
  req.temperature = kEvaluatorTemperature;
  const std::string ans = trim(evaluator.complete(req));
  return ans.rfind("YES", 0) == 0 || ans.rfind("Yes", 0) == 0 || ans.rfind("yes", 0) == 0;
}

} // namespace

SearchResult discover(const Evaluator& eval, std::span<const int> candidates, const HeuristicSuite& initial,
                      const DiscoverRoles& roles, const DiscoverConfig& cfg) {
  if (candidates.empty()) throw std::invalid_argument("discover: no candidate hooks");
  check_hooks(candidates, "discover");
  if (cfg.max_iter < 0) throw std::invalid_argument("discover: max_iter must be >= 0");
  if (!initial.complete()) throw std::invalid_argument("discover: suite is incomplete");
  cfg.prompt.validate();

  SearchResult res;
  res.retained.assign(candidates.begin(), candidates.end());
  res.suite = initial;
  res.score = res.initial_score = eval.full(initial);
  res.evaluations = 1;
  Rng rng(cfg.seed);

  for (int it = 0; it < cfg.max_iter; ++it) {
    const int hook = cfg.random_slots ? candidates[rng.below(candidates.size())]
                                      : candidates[static_cast<std::size_t>(it) % candidates.size()];
    const HookSlot slot = slot_of(hook);
    SearchRecord rec;
    rec.iteration = it;
    rec.hooks = {hook};
    auto finish = [&](std::string outcome) {
      rec.outcome = std::move(outcome);
      rec.incumbent = res.score;
      res.history.push_back(rec);
    };

    const std::string current_src = slot_source(res.suite, slot);
    const std::string context = key_code(slot, current_src);
    std::string source;
    try {
      ChatRequest req;
      req.user = render(cfg.prompt, slot, context);
      req.temperature = kCoderTemperature;
      source = extract_program(roles.coder.complete(req), slot);
    } catch (const LlmError& e) {
      rec.note = e.what();
      finish("transport-error");
      continue;
    }

    std::optional<Strategy> cand;
    try {
      cand = Strategy::dsl(source, slot);
    } catch (const dsl::DslError& e) {
      rec.repaired = true;
      try {
        ChatRequest req;
        req.system = "You fix SAT solver heuristic functions that fail validation.";
        req.user = "The " + std::string(slot_name(slot)) + " function below is rejected with these diagnostics:\n" +
                   dsl::format_diagnostics(e.diagnostics()) + "\n// start " + std::string(slot_name(slot)) + "\n" + source +
                   "\n// end " + std::string(slot_name(slot)) +
                   "\n\nReturn a corrected version between the same start/end markers.\n\n" + context;
        req.temperature = kEvaluatorTemperature;
        source = extract_program(roles.repairer.complete(req), slot);
        cand = Strategy::dsl(source, slot);
      } catch (const LlmError& e2) {
        rec.note = e2.what();
        finish("transport-error");
        continue;
      } catch (const dsl::DslError& e2) {
        rec.note = dsl::format_diagnostics(e2.diagnostics());
        finish("broken");
        continue;
      }
    }
    rec.labels = cand->label();

    bool same = dsl::is_synonymous(*cand->program(), *current_program(res.suite, slot));
    if (!same && cfg.llm_synonym_check) {
      try {
        same = evaluator_says_same(roles.evaluator, slot, current_src, source);
      } catch (const LlmError& e) {
        rec.note = e.what();
        finish("transport-error");
        continue;
      }
    }
    if (same) {
      finish("synonymous");
      continue;
    }

    HeuristicSuite trial = res.suite;
    trial.set(*cand);
    rec.score = eval.full(trial);
    rec.evaluated = true;
    ++res.evaluations;
    if (rec.score < res.score) {
      res.score = rec.score;
      res.suite = std::move(trial);
      finish("accepted");
    } else {
      finish("rejected");
    }
  }
  return res;
}

} // namespace modsat
