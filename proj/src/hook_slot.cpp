#include "modsat/hook_slot.hpp"

#include <string>

namespace modsat {

std::string_view slot_name(HookSlot s) {
  switch (s) {
  case HookSlot::RephaseCondition: return "rephase_condition";
  case HookSlot::RephaseFunction: return "rephase_function";
  case HookSlot::ReduceCondition: return "reduce_condition";
  case HookSlot::RestartCondition: return "restart_condition";
  case HookSlot::RestartFunction: return "restart_function";
  case HookSlot::VarBumpActivity: return "var_bump_activity";
  case HookSlot::ClaBumpActivity: return "cla_bump_activity";
  }
  return "?";
}

std::optional<HookSlot> slot_from_name(std::string_view name) {
  for (HookSlot s : kAllSlots)
    if (slot_name(s) == name) return s;
  // camelCase spellings: restartCondition, varBumpActivity, ...
  std::string snake;
  for (char ch : name) {
    if (ch >= 'A' && ch <= 'Z') {
      snake += '_';
      snake += static_cast<char>(ch - 'A' + 'a');
    } else {
      snake += ch;
    }
  }
  if (snake != name)
    for (HookSlot s : kAllSlots)
      if (slot_name(s) == snake) return s;
  return std::nullopt;
}

std::optional<HookSlot> slot_from_number(int number) {
  if (number < 1 || number > kNumSlots) return std::nullopt;
  return static_cast<HookSlot>(number - 1);
}

} // namespace modsat
