#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace modsat {

// The seven heuristic hook points. Enumerator order follows the function
// candidate numbering 1..7 used by dataset manifests.
enum class HookSlot : int {
  RephaseCondition = 0,
  RephaseFunction,
  ReduceCondition,
  RestartCondition,
  RestartFunction,
  VarBumpActivity,
  ClaBumpActivity,
};

inline constexpr int kNumSlots = 7;

inline constexpr std::array<HookSlot, kNumSlots> kAllSlots = {
    HookSlot::RephaseCondition, HookSlot::RephaseFunction, HookSlot::ReduceCondition, HookSlot::RestartCondition,
    HookSlot::RestartFunction,  HookSlot::VarBumpActivity, HookSlot::ClaBumpActivity,
};

enum class SlotClass { Condition, Function, VarBump, ClaBump };

constexpr SlotClass slot_class(HookSlot s) {
  switch (s) {
  case HookSlot::RephaseCondition:
  case HookSlot::ReduceCondition:
  case HookSlot::RestartCondition:
    return SlotClass::Condition;
  case HookSlot::RephaseFunction:
  case HookSlot::RestartFunction:
    return SlotClass::Function;
  case HookSlot::VarBumpActivity:
    return SlotClass::VarBump;
  case HookSlot::ClaBumpActivity:
    return SlotClass::ClaBump;
  }
  return SlotClass::Function;
}

constexpr int slot_index(HookSlot s) { return static_cast<int>(s); }
// 1-based candidate number as written in manifests.
constexpr int slot_number(HookSlot s) { return static_cast<int>(s) + 1; }

std::string_view slot_name(HookSlot s);
// Accepts the canonical snake_case names plus the camelCase spellings used
// in solver sources (varBumpActivity, claBumpActivity).
std::optional<HookSlot> slot_from_name(std::string_view name);
std::optional<HookSlot> slot_from_number(int number);

} // namespace modsat
