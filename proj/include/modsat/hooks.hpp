#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "modsat/dsl/dsl.hpp"
#include "modsat/hook_table.hpp"
#include "modsat/solver.hpp"

namespace modsat {

// Hand-written implementations of the original and discovered heuristics.
namespace presets {

bool rephase_condition_baseline(SolverView& s);
bool rephase_condition_progress_adaptive(SolverView& s);
void rephase_function_baseline(SolverView& s);
void rephase_function_weighted_policies(SolverView& s);
bool reduce_condition_baseline(SolverView& s);
bool reduce_condition_memory_aware(SolverView& s);
bool restart_condition_baseline(SolverView& s);
bool restart_condition_lbd_adaptive(SolverView& s);
void restart_function_baseline(SolverView& s);
void restart_function_lbd_moving_average(SolverView& s);
void var_bump_activity_baseline(SolverView& s, Var v, double inc);
void var_bump_activity_level_scaled(SolverView& s, Var v, double inc);
void cla_bump_activity_baseline(SolverView& s, std::int64_t c);
void cla_bump_activity_floored_decay(SolverView& s, std::int64_t c);

} // namespace presets

struct PresetInfo {
  std::string_view id; // "<slot>/<variant>"
  HookSlot slot;
  bool baseline;
  std::string_view summary;
  // DSL transcription wrapped in start/end markers.
  std::string_view dsl_source;
};

std::span<const PresetInfo> preset_registry();
const PresetInfo* find_preset(std::string_view id);
const PresetInfo& baseline_preset(HookSlot slot);
const PresetInfo& discovered_preset(HookSlot slot);

// DSL transcription of a preset with the markers stripped.
std::string preset_dsl(std::string_view id);

class Strategy {
public:
  enum class Kind { Native, Dsl };

  static Strategy native(std::string_view id);
  // Compiles the source for the slot. Throws dsl::DslError.
  static Strategy dsl(std::string source, HookSlot slot);

  Kind kind() const { return kind_; }
  HookSlot slot() const { return slot_; }
  const std::string& id() const { return id_; }
  const std::string& source() const { return source_; }
  const std::shared_ptr<const dsl::Program>& program() const { return program_; }
  // Registry id for native strategies, "dsl:<hash of canonical text>" otherwise.
  std::string label() const;

private:
  Kind kind_ = Kind::Native;
  HookSlot slot_ = HookSlot::RestartCondition;
  std::string id_;
  std::string source_;
  std::shared_ptr<const dsl::Program> program_;
  std::string canonical_;
};

class HeuristicSuite {
public:
  static constexpr std::string_view kSchema = "modsat.suite/1";

  static HeuristicSuite all_baseline();
  static HeuristicSuite all_discovered();

  bool complete() const;
  bool has(HookSlot s) const { return slots_[slot_index(s)].has_value(); }
  const Strategy& at(HookSlot s) const;
  void set(Strategy st);

  // Stable one-line summary of every slot's label.
  std::string fingerprint() const;

  nlohmann::json to_json() const;
  static HeuristicSuite from_json(const nlohmann::json& j);
  static HeuristicSuite load(const std::string& path);
  void save(const std::string& path) const;

private:
  std::array<std::optional<Strategy>, kNumSlots> slots_;
};

// Turns a complete suite into callables. DSL runtime faults surface as HookFault.
HookTable bind(const HeuristicSuite& suite);

SolveResult solve(const Formula& f, const HeuristicSuite& suite, const SolverConfig& cfg = {});

} // namespace modsat
