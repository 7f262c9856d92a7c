#include "modsat/hooks.hpp"

#include <fstream>
#include <stdexcept>

#include "modsat/hash.hpp"

namespace modsat {

namespace {

constexpr std::string_view kRephaseConditionBaseline = R"(// start rephase_condition
bool rephase_condition() {
    if (rephases >= rephase_limit) return true;
    else return false;
}
// end rephase_condition
)";

constexpr std::string_view kRephaseConditionAdaptive = R"(// start rephase_condition
bool rephase_condition() {
    const int base_rephase_limit = 1024;
    const double progress_factor = 0.02;

    if (conflictR < rephase_limit)
        return false;

    int progress = trail.size() - last_rephase_progress;
    int progress_threshold = std::max(50, (int)(nVars() * progress_factor));

    if (progress < progress_threshold) {
        rephase_limit = std::max(base_rephase_limit, rephase_limit * 2 / 3);
    } else {
        rephase_limit = std::min(base_rephase_limit * 16, rephase_limit * 3 / 2);
    }
    return true;
}
// end rephase_condition
)";

constexpr std::string_view kRephaseFunctionBaseline = R"(// start rephase_function
void rephase_function() {
    conflictR = 0;
    rephases = 0;
    threshold *= 0.9;
    rephase_limit += 8192;
    int phase_rand = (int)(rand01() * 100);
    if (phase_rand < 40) {
        for_each_var(i) polarity[i] = local_best[i];
    } else if (phase_rand < 65) {
        for_each_var(i) polarity[i] = !local_best[i];
    } else if (phase_rand < 80) {
        for_each_var(i) polarity[i] = !polarity[i];
    } else {
        for_each_var(i) polarity[i] = saved[i];
    }
}
// end rephase_function
)";

constexpr std::string_view kRephaseFunctionWeighted = R"(// start rephase_function
void rephase_function() {
    if (rephases > 0 && conflictR > last_rephase_progress) {
        rephase_limit = rephase_limit * 1.5;
    } else {
        rephase_limit = rephase_limit * 0.9;
        if (rephase_limit < 512) rephase_limit = 512;
    }
    last_rephase_progress = conflictR;
    rephase_count++;

    double rand_val = rand01();
    if (rand_val < 0.4) {
        for_each_var(v) polarity[v] = local_best[v];
    } else if (rand_val < 0.7) {
        for_each_var(v) polarity[v] = !polarity[v];
    } else if (rand_val < 0.9) {
        double activity_threshold = 0.2 * var_inc;
        for_each_var(v) {
            if (activity[v] < activity_threshold) polarity[v] = rand01() < 0.5;
        }
    } else {
        for_each_var(v) {
            if (user_pol[v] != l_Undef) polarity[v] = (user_pol[v] == l_True);
        }
    }

    threshold = trail.size() * 0.8;
    cancelUntil(0);
}
// end rephase_function
)";

constexpr std::string_view kReduceConditionBaseline = R"(// start reduce_condition
bool reduce_condition() {
    if (learnts.size() >= max_learnts) return true;
    else return false;
}
// end reduce_condition
)";

constexpr std::string_view kReduceConditionMemory = R"(// start reduce_condition
bool reduce_condition() {
    if (learnts.size() >= max_learnts) return true;
    if (wasted_bytes > arena_bytes * garbage_frac * 0.8) return true;
    if (learnts.size() > 0 && learnts.size() > 2 * nClauses()) return true;
    if (conflictR > 1000 && learnts.size() > max_learnts * 0.8) return true;
    return false;
}
// end reduce_condition
)";

constexpr std::string_view kRestartConditionBaseline = R"(// start restart_condition
bool restart_condition() {
    if (conflicts <= 0) return false;
    if (lbd_queue_size == 50 && 0.8 * fast_lbd_sum / lbd_queue_size > slow_lbd_sum / conflicts)
        return true;
    else
        return false;
}
// end restart_condition
)";

constexpr std::string_view kRestartConditionAdaptive = R"(// start restart_condition
bool restart_condition() {
    if (conflicts <= 0) return false;

    double restart_threshold;
    if (lbd_queue_size > 0) {
        double avg_lbd = fast_lbd_sum / lbd_queue_size;
        double conflict_rate = (double)conflictR / (double)conflicts;
        restart_threshold = restart_first * (0.8 + 0.4 * avg_lbd) * (1.0 + 0.5 * conflict_rate);
        if (progressEstimate() - last_rephase_progress < 0.01) {
            restart_threshold *= 0.7;
        }
    } else {
        restart_threshold = restart_first;
    }

    if (conflictR >= restart_threshold) {
        conflictR = 0;
        return true;
    }
    return false;
}
// end restart_condition
)";

constexpr std::string_view kRestartFunctionBaseline = R"(// start restart_function
void restart_function() {
    clear_lbd_queue();
    int level = 0;
    cancelUntil(level);
}
// end restart_function
)";

constexpr std::string_view kRestartFunctionMoving = R"(// start restart_function
void restart_function() {
    if (lbd_queue_size > 0) {
        double curr_fast = fast_lbd_sum / lbd_queue_size;
        fast_avg = 0.9 * fast_avg + 0.1 * curr_fast;
        slow_avg = 0.99 * slow_avg + 0.01 * curr_fast;
    }

    int restart_level = 0;
    if (fast_avg > 0 && slow_avg > 0) {
        double ratio = fast_avg / slow_avg;
        if (ratio > 1.2) {
            restart_level = 0;
        } else if (ratio > 1.0) {
            restart_level = std::max(0, decisionLevel() / 2);
        } else {
            restart_level = std::max(0, decisionLevel() - 1);
        }
    }

    clear_lbd_queue();
    cancelUntil(restart_level);

    int count = restart_count;
    restart_count = count + 1;
    if (count % 16 == 15) {
        reduceDB();
    }
    rebuildOrderHeap();
}
// end restart_function
)";

constexpr std::string_view kVarBumpBaseline = R"(// start var_bump_activity
void varBumpActivity(Var v, double inc) {
    activity[v] += inc;
    if (activity[v] > 1e50) {
        for_each_var(i) activity[i] *= 1e-50;
        var_inc *= 1e-50;
    }
}
// end var_bump_activity
)";

constexpr std::string_view kVarBumpScaled = R"(// start var_bump_activity
void varBumpActivity(Var v, double inc) {
    double scaled_inc = inc * (1.0 + 0.1 * decisionLevel());
    activity[v] += scaled_inc;
    if (activity[v] > 1e100) {
        double scale_factor = 1e-100;
        for_each_var(i) {
            activity[i] *= scale_factor;
            if (activity[i] < 1e-100) activity[i] = 1e-100;
        }
        var_inc *= scale_factor;
    }
    if (in_heap(v)) {
        if (activity[v] > activity[heap_top()]) heap_update(v);
    } else if (decision[v] && !assigned[v]) {
        heap_insert(v);
    }
}
// end var_bump_activity
)";

constexpr std::string_view kClaBumpBaseline = R"(// start cla_bump_activity
void claBumpActivity(int c) {
    cla_activity[c] += cla_inc;
    if (cla_activity[c] > 1e20) {
        for_each_learnt(i) cla_activity[i] *= 1e-20;
        cla_inc *= 1e-20;
    }
}
// end cla_bump_activity
)";

constexpr std::string_view kClaBumpFloored = R"(// start cla_bump_activity
void claBumpActivity(int c) {
    cla_activity[c] += cla_inc;
    if (cla_activity[c] > 1e20) {
        double scale_factor = 1e-20;
        double min_activity = 1e-20;
        for_each_learnt(i) {
            cla_activity[i] *= scale_factor;
            if (cla_activity[i] < min_activity) cla_activity[i] = min_activity;
        }
        cla_inc *= scale_factor;
        if (cla_inc < min_activity) cla_inc = min_activity;
    }
    if (conflicts > 1000 && lbd_queue_size > 50) {
        double conflict_scale = 1.0 - 0.01 * (lbd_queue_size / 50.0);
        cla_inc *= conflict_scale > 0.8 ? conflict_scale : 0.8;
    }
}
// end cla_bump_activity
)";

const std::array<PresetInfo, 14> kPresets = {{
    {"rephase_condition/baseline", HookSlot::RephaseCondition, true, "fires once rephases reach rephase_limit",
     kRephaseConditionBaseline},
    {"rephase_condition/progress-adaptive", HookSlot::RephaseCondition, false,
     "rephase interval shrinks on stagnating trail growth and widens on progress", kRephaseConditionAdaptive},
    {"rephase_function/baseline", HookSlot::RephaseFunction, true,
     "40/25/15/20 cascade over local-best, inverted local-best, flipped and saved phases", kRephaseFunctionBaseline},
    {"rephase_function/weighted-policies", HookSlot::RephaseFunction, false,
     "0.4/0.3/0.2/0.1 draw over local-best, flip, low-activity randomisation and user phases",
     kRephaseFunctionWeighted},
    {"reduce_condition/baseline", HookSlot::ReduceCondition, true, "learnt count reaches max_learnts",
     kReduceConditionBaseline},
    {"reduce_condition/memory-aware", HookSlot::ReduceCondition, false,
     "adds wasted-memory, learnt/original ratio and conflict-burst triggers", kReduceConditionMemory},
    {"restart_condition/baseline", HookSlot::RestartCondition, true,
     "recent LBD average exceeds the global average by 25% once 50 LBDs are queued", kRestartConditionBaseline},
    {"restart_condition/lbd-adaptive", HookSlot::RestartCondition, false,
     "conflict budget scaled by average LBD, conflict rate and stagnation", kRestartConditionAdaptive},
    {"restart_function/baseline", HookSlot::RestartFunction, true, "clear LBD queue and restart to level 0",
     kRestartFunctionBaseline},
    {"restart_function/lbd-moving-average", HookSlot::RestartFunction, false,
     "partial restarts chosen from fast/slow LBD moving averages", kRestartFunctionMoving},
    {"var_bump_activity/baseline", HookSlot::VarBumpActivity, true, "VSIDS bump with 1e50 rescale",
     kVarBumpBaseline},
    {"var_bump_activity/level-scaled", HookSlot::VarBumpActivity, false,
     "bump scaled by decision level, floored 1e100 rescale, eager heap maintenance", kVarBumpScaled},
    {"cla_bump_activity/baseline", HookSlot::ClaBumpActivity, true, "clause bump with 1e20 rescale",
     kClaBumpBaseline},
    {"cla_bump_activity/floored-decay", HookSlot::ClaBumpActivity, false,
     "floored rescale plus cla_inc damping once the LBD queue is long", kClaBumpFloored},
}};

HookTable native_table_entry(HookTable t, std::string_view id) {
  using namespace presets;
  if (id == "rephase_condition/baseline") t.rephase_condition = rephase_condition_baseline;
  else if (id == "rephase_condition/progress-adaptive") t.rephase_condition = rephase_condition_progress_adaptive;
  else if (id == "rephase_function/baseline") t.rephase_function = rephase_function_baseline;
  else if (id == "rephase_function/weighted-policies") t.rephase_function = rephase_function_weighted_policies;
  else if (id == "reduce_condition/baseline") t.reduce_condition = reduce_condition_baseline;
  else if (id == "reduce_condition/memory-aware") t.reduce_condition = reduce_condition_memory_aware;
  else if (id == "restart_condition/baseline") t.restart_condition = restart_condition_baseline;
  else if (id == "restart_condition/lbd-adaptive") t.restart_condition = restart_condition_lbd_adaptive;
  else if (id == "restart_function/baseline") t.restart_function = restart_function_baseline;
  else if (id == "restart_function/lbd-moving-average") t.restart_function = restart_function_lbd_moving_average;
  else if (id == "var_bump_activity/baseline") t.var_bump_activity = var_bump_activity_baseline;
  else if (id == "var_bump_activity/level-scaled") t.var_bump_activity = var_bump_activity_level_scaled;
  else if (id == "cla_bump_activity/baseline") t.cla_bump_activity = cla_bump_activity_baseline;
  else if (id == "cla_bump_activity/floored-decay") t.cla_bump_activity = cla_bump_activity_floored_decay;
  else throw std::invalid_argument("unknown preset '" + std::string(id) + "'");
  return t;
}

dsl::Value run_dsl(const dsl::Program& p, SolverView& view, std::span<const dsl::Value> args) {
  try {
    return dsl::interpret(p, view, args).result;
  } catch (const dsl::RuntimeFault& f) {
    throw HookFault(p.slot, std::string(dsl::fault_name(f.kind())) + ": " + f.what());
  }
}

} // namespace

std::span<const PresetInfo> preset_registry() { return kPresets; }

const PresetInfo* find_preset(std::string_view id) {
  for (const auto& p : kPresets)
    if (p.id == id) return &p;
  return nullptr;
}

const PresetInfo& baseline_preset(HookSlot slot) {
  for (const auto& p : kPresets)
    if (p.slot == slot && p.baseline) return p;
  throw std::logic_error("no baseline preset");
}

const PresetInfo& discovered_preset(HookSlot slot) {
  for (const auto& p : kPresets)
    if (p.slot == slot && !p.baseline) return p;
  throw std::logic_error("no discovered preset");
}

std::string preset_dsl(std::string_view id) {
  const PresetInfo* p = find_preset(id);
  if (!p) throw std::invalid_argument("unknown preset '" + std::string(id) + "'");
  auto body = dsl::extract_marked(p->dsl_source, slot_name(p->slot));
  if (!body) throw std::logic_error("preset transcription lacks markers");
  return *body;
}

Strategy Strategy::native(std::string_view id) {
  const PresetInfo* p = find_preset(id);
  if (!p) throw std::invalid_argument("unknown preset '" + std::string(id) + "'");
  Strategy s;
  s.kind_ = Kind::Native;
  s.slot_ = p->slot;
  s.id_ = std::string(id);
  return s;
}

Strategy Strategy::dsl(std::string source, HookSlot slot) {
  Strategy s;
  s.kind_ = Kind::Dsl;
  s.slot_ = slot;
  s.program_ = dsl::compile(source, slot);
  s.canonical_ = dsl::canonicalize(*s.program_).text;
  s.source_ = std::move(source);
  return s;
}

std::string Strategy::label() const {
  if (kind_ == Kind::Native) return id_;
  return "dsl:" + hex64(fnv1a64(canonical_));
}

HeuristicSuite HeuristicSuite::all_baseline() {
  HeuristicSuite s;
  for (HookSlot slot : kAllSlots) s.set(Strategy::native(baseline_preset(slot).id));
  return s;
}

HeuristicSuite HeuristicSuite::all_discovered() {
  HeuristicSuite s;
  for (HookSlot slot : kAllSlots) s.set(Strategy::native(discovered_preset(slot).id));
  return s;
}

bool HeuristicSuite::complete() const {
  for (const auto& s : slots_)
    if (!s) return false;
  return true;
}

const Strategy& HeuristicSuite::at(HookSlot s) const {
  const auto& st = slots_[slot_index(s)];
  if (!st) throw std::out_of_range("slot '" + std::string(slot_name(s)) + "' is empty");
  return *st;
}

void HeuristicSuite::set(Strategy st) {
  const int i = slot_index(st.slot());
  slots_[i] = std::move(st);
}

std::string HeuristicSuite::fingerprint() const {
  std::string out;
  for (HookSlot s : kAllSlots) {
    if (!out.empty()) out += ' ';
    out += has(s) ? at(s).label() : std::string(slot_name(s)) + "/<empty>";
  }
  return out;
}

nlohmann::json HeuristicSuite::to_json() const {
  nlohmann::json slots = nlohmann::json::object();
  for (HookSlot s : kAllSlots) {
    if (!has(s)) continue;
    const Strategy& st = at(s);
    if (st.kind() == Strategy::Kind::Native) slots[std::string(slot_name(s))] = {{"kind", "native"}, {"id", st.id()}};
    else slots[std::string(slot_name(s))] = {{"kind", "dsl"}, {"source", st.source()}};
  }
  return {{"schema", kSchema}, {"slots", slots}};
}

HeuristicSuite HeuristicSuite::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", "") != kSchema)
    throw std::invalid_argument("suite document must carry schema '" + std::string(kSchema) + "'");
  HeuristicSuite suite;
  for (const auto& [name, entry] : j.at("slots").items()) {
    const auto slot = slot_from_name(name);
    if (!slot) throw std::invalid_argument("unknown slot '" + name + "' in suite");
    const std::string kind = entry.at("kind").get<std::string>();
    if (kind == "native") {
      Strategy st = Strategy::native(entry.at("id").get<std::string>());
      if (st.slot() != *slot) throw std::invalid_argument("preset '" + st.id() + "' does not belong to slot '" + name + "'");
      suite.set(std::move(st));
    } else if (kind == "dsl") {
      suite.set(Strategy::dsl(entry.at("source").get<std::string>(), *slot));
    } else {
      throw std::invalid_argument("unknown strategy kind '" + kind + "'");
    }
  }
  return suite;
}

HeuristicSuite HeuristicSuite::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open suite file '" + path + "'");
  HeuristicSuite s = from_json(nlohmann::json::parse(in));
  return s;
}

void HeuristicSuite::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write suite file '" + path + "'");
  out << to_json().dump(2) << '\n';
}

HookTable bind(const HeuristicSuite& suite) {
  if (!suite.complete()) throw std::invalid_argument("heuristic suite is incomplete");
  HookTable t;
  for (HookSlot slot : kAllSlots) {
    const Strategy& st = suite.at(slot);
    if (st.kind() == Strategy::Kind::Native) {
      t = native_table_entry(std::move(t), st.id());
      continue;
    }
    std::shared_ptr<const dsl::Program> p = st.program();
    switch (slot) {
    case HookSlot::RephaseCondition:
    case HookSlot::ReduceCondition:
    case HookSlot::RestartCondition: {
      auto fn = [p](SolverView& v) { return run_dsl(*p, v, {}).truthy(); };
      if (slot == HookSlot::RephaseCondition) t.rephase_condition = fn;
      else if (slot == HookSlot::ReduceCondition) t.reduce_condition = fn;
      else t.restart_condition = fn;
      break;
    }
    case HookSlot::RephaseFunction:
    case HookSlot::RestartFunction: {
      auto fn = [p](SolverView& v) { run_dsl(*p, v, {}); };
      if (slot == HookSlot::RephaseFunction) t.rephase_function = fn;
      else t.restart_function = fn;
      break;
    }
    case HookSlot::VarBumpActivity:
      t.var_bump_activity = [p](SolverView& v, Var x, double inc) {
        const dsl::Value args[] = {dsl::Value::of_int(x), dsl::Value::of_real(inc)};
        run_dsl(*p, v, args);
      };
      break;
    case HookSlot::ClaBumpActivity:
      t.cla_bump_activity = [p](SolverView& v, std::int64_t c) {
        const dsl::Value args[] = {dsl::Value::of_int(c)};
        run_dsl(*p, v, args);
      };
      break;
    }
  }
  return t;
}

SolveResult solve(const Formula& f, const HeuristicSuite& suite, const SolverConfig& cfg) {
  Solver s(f, bind(suite), cfg);
  return s.solve();
}

} // namespace modsat
