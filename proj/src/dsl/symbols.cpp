#include "modsat/dsl/symbols.hpp"

#include <array>

namespace modsat::dsl {

std::uint8_t class_bit(SlotClass c) {
  switch (c) {
  case SlotClass::Condition: return kCondition;
  case SlotClass::Function: return kFunction;
  case SlotClass::VarBump: return kVarBump;
  case SlotClass::ClaBump: return kClaBump;
  }
  return 0;
}

namespace {

constexpr std::uint8_t kHeuristicState = kCondition | kFunction;

#define RO_INT(NAME, EXPR)                                                                                             \
  FieldInfo {                                                                                                          \
    NAME, Type::Int, IndexSpace::None, 0, [](const SolverView& s, std::int64_t) { return Value::of_int(EXPR); },       \
        nullptr                                                                                                        \
  }
#define RO_REAL(NAME, EXPR)                                                                                            \
  FieldInfo {                                                                                                          \
    NAME, Type::Real, IndexSpace::None, 0, [](const SolverView& s, std::int64_t) { return Value::of_real(EXPR); },     \
        nullptr                                                                                                        \
  }
#define RW_INT(NAME, WRITERS, GET, SET)                                                                                \
  FieldInfo {                                                                                                          \
    NAME, Type::Int, IndexSpace::None, WRITERS,                                                                        \
        [](const SolverView& s, std::int64_t) { return Value::of_int(s.GET()); },                                      \
        [](SolverView& s, std::int64_t, const Value& v) { s.SET(v.i); }                                                \
  }
#define RW_REAL(NAME, WRITERS, GET, SET)                                                                               \
  FieldInfo {                                                                                                          \
    NAME, Type::Real, IndexSpace::None, WRITERS,                                                                       \
        [](const SolverView& s, std::int64_t) { return Value::of_real(s.GET()); },                                     \
        [](SolverView& s, std::int64_t, const Value& v) { s.SET(v.r); }                                                \
  }
#define VAR_BOOL(NAME, WRITERS, GET, SET)                                                                              \
  FieldInfo {                                                                                                          \
    NAME, Type::Bool, IndexSpace::Vars, WRITERS,                                                                       \
        [](const SolverView& s, std::int64_t i) { return Value::of_bool(s.GET(static_cast<Var>(i))); },                \
        [](SolverView& s, std::int64_t i, const Value& v) { s.SET(static_cast<Var>(i), v.b); }                         \
  }

const std::array kFields = {
    RO_INT("conflicts", s.conflicts()),
    RO_INT("decisions", s.decisions()),
    RO_INT("propagations", s.propagations()),
    RO_INT("restarts", s.restarts()),
    RO_INT("lbd_queue_size", s.lbd_queue_size()),
    RO_REAL("fast_lbd_sum", s.fast_lbd_sum()),
    RO_REAL("slow_lbd_sum", s.slow_lbd_sum()),
    RO_INT("trail_size", s.trail_size()),
    RO_INT("decision_level", s.decision_level()),
    RO_INT("num_vars", s.num_vars()),
    RO_INT("num_clauses", s.num_clauses()),
    RO_INT("learnts_size", s.learnts_size()),
    RO_REAL("max_learnts", s.max_learnts()),
    RO_REAL("garbage_frac", s.garbage_frac()),
    RO_INT("wasted_bytes", s.wasted_bytes()),
    RO_INT("arena_bytes", s.arena_bytes()),
    RO_INT("restart_first", s.restart_first()),
    RO_REAL("restart_inc", s.restart_inc()),
    RO_REAL("var_decay", s.var_decay()),
    RO_REAL("cla_decay", s.cla_decay()),
    RW_INT("conflictR", kHeuristicState, conflict_r, set_conflict_r),
    RW_INT("rephases", kFunction, rephases, set_rephases),
    RW_INT("rephase_count", kFunction, rephase_count, set_rephase_count),
    RW_INT("rephase_limit", kHeuristicState, rephase_limit, set_rephase_limit),
    RW_INT("threshold", kHeuristicState, threshold, set_threshold),
    RW_REAL("last_rephase_progress", kHeuristicState, last_rephase_progress, set_last_rephase_progress),
    RW_REAL("last_restart_progress", kHeuristicState, last_restart_progress, set_last_restart_progress),
    RW_REAL("fast_avg", kHeuristicState, fast_avg, set_fast_avg),
    RW_REAL("slow_avg", kHeuristicState, slow_avg, set_slow_avg),
    RW_INT("restart_count", kHeuristicState, restart_count, set_restart_count),
    RW_REAL("var_inc", kVarBump, var_inc, set_var_inc),
    RW_REAL("cla_inc", kClaBump, cla_inc, set_cla_inc),
    FieldInfo{"activity", Type::Real, IndexSpace::Vars, kVarBump,
              [](const SolverView& s, std::int64_t i) { return Value::of_real(s.activity(static_cast<Var>(i))); },
              [](SolverView& s, std::int64_t i, const Value& v) { s.set_activity(static_cast<Var>(i), v.r); }},
    VAR_BOOL("polarity", kFunction, polarity, set_polarity),
    VAR_BOOL("local_best", kFunction, local_best, set_local_best),
    VAR_BOOL("saved", kFunction, saved, set_saved),
    FieldInfo{"user_pol", Type::Int, IndexSpace::Vars, kFunction,
              [](const SolverView& s, std::int64_t i) { return Value::of_int(s.user_pol(static_cast<Var>(i))); },
              [](SolverView& s, std::int64_t i, const Value& v) { s.set_user_pol(static_cast<Var>(i), v.i); }},
    FieldInfo{"assigned", Type::Bool, IndexSpace::Vars, 0,
              [](const SolverView& s, std::int64_t i) { return Value::of_bool(s.assigned(static_cast<Var>(i))); },
              nullptr},
    FieldInfo{"decision", Type::Bool, IndexSpace::Vars, 0,
              [](const SolverView& s, std::int64_t i) { return Value::of_bool(s.decision_var(static_cast<Var>(i))); },
              nullptr},
    FieldInfo{"cla_activity", Type::Real, IndexSpace::Learnts, kClaBump,
              [](const SolverView& s, std::int64_t i) { return Value::of_real(s.cla_activity(i)); },
              [](SolverView& s, std::int64_t i, const Value& v) { s.set_cla_activity(i, v.r); }},
    FieldInfo{"learnt_lbd", Type::Int, IndexSpace::Learnts, 0,
              [](const SolverView& s, std::int64_t i) { return Value::of_int(s.learnt_lbd(i)); }, nullptr},
};

#undef RO_INT
#undef RO_REAL
#undef RW_INT
#undef RW_REAL
#undef VAR_BOOL

const std::array kConstants = {
    ConstantInfo{"l_False", kUserPolFalse},
    ConstantInfo{"l_True", kUserPolTrue},
    ConstantInfo{"l_Undef", kUserPolUndef},
};

const std::array kBuiltins = {
    BuiltinInfo{"min", BuiltinId::Min, 2, kAllClasses, false},
    BuiltinInfo{"max", BuiltinId::Max, 2, kAllClasses, false},
    BuiltinInfo{"abs", BuiltinId::Abs, 1, kAllClasses, false},
    BuiltinInfo{"floor", BuiltinId::Floor, 1, kAllClasses, false},
    BuiltinInfo{"ceil", BuiltinId::Ceil, 1, kAllClasses, false},
    BuiltinInfo{"sqrt", BuiltinId::Sqrt, 1, kAllClasses, false},
    BuiltinInfo{"log", BuiltinId::Log, 1, kAllClasses, false},
    BuiltinInfo{"exp", BuiltinId::Exp, 1, kAllClasses, false},
    BuiltinInfo{"rand01", BuiltinId::Rand01, 0, kAllClasses, true},
    BuiltinInfo{"progress_estimate", BuiltinId::ProgressEstimate, 0, kAllClasses, false},
    BuiltinInfo{"heap_top", BuiltinId::HeapTop, 0, kAllClasses, false},
    BuiltinInfo{"in_heap", BuiltinId::InHeap, 1, kAllClasses, false},
    BuiltinInfo{"cancel_until", BuiltinId::CancelUntil, 1, kFunction, true},
    BuiltinInfo{"reduce_db", BuiltinId::ReduceDb, 0, kFunction, true},
    BuiltinInfo{"rebuild_order_heap", BuiltinId::RebuildOrderHeap, 0, kFunction, true},
    BuiltinInfo{"clear_lbd_queue", BuiltinId::ClearLbdQueue, 0, kFunction, true},
    BuiltinInfo{"heap_update", BuiltinId::HeapUpdate, 1, kVarBump, true},
    BuiltinInfo{"heap_insert", BuiltinId::HeapInsert, 1, kVarBump, true},
};

} // namespace

std::span<const FieldInfo> fields() { return kFields; }

int find_field(std::string_view name) {
  for (std::size_t i = 0; i < kFields.size(); ++i)
    if (kFields[i].name == name) return static_cast<int>(i);
  return -1;
}

std::span<const ConstantInfo> constants() { return kConstants; }

int find_constant(std::string_view name) {
  for (std::size_t i = 0; i < kConstants.size(); ++i)
    if (kConstants[i].name == name) return static_cast<int>(i);
  return -1;
}

std::span<const BuiltinInfo> builtins() { return kBuiltins; }

int find_builtin(std::string_view name) {
  for (std::size_t i = 0; i < kBuiltins.size(); ++i)
    if (kBuiltins[i].name == name) return static_cast<int>(i);
  return -1;
}

} // namespace modsat::dsl
