#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modsat/diversity.hpp"
#include "modsat/hook_slot.hpp"
#include "modsat/llm.hpp"

namespace modsat {

enum class PromptPart { Role, Goal, Tips };

std::string_view prompt_part_name(PromptPart p);

// Coder prompt template. Sections may use {{func_name}} and the key_code
// section must contain {{replace_key_code}}; spaces inside braces are allowed.
struct PromptTemplate {
  std::string role, goal, tips;
  std::string key_code = "<key code> of SAT solver is:\n{{replace_key_code}}";

  std::string& part(PromptPart p);
  const std::string& part(PromptPart p) const;

  // Text with [role] / [goal] / [tips] / [key_code] section headers.
  static PromptTemplate parse(const std::string& text);
  static PromptTemplate load(const std::string& path);
  std::string to_text() const;
  void save(const std::string& path) const;

  // Throws PromptError when {{func_name}} or the marker contract is missing,
  // key_code lacks {{replace_key_code}}, or an unknown placeholder appears.
  void validate() const;

  bool operator==(const PromptTemplate&) const = default;
};

PromptTemplate original_prompt_template();

class PromptError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// role, goal, tips, key code in that order; throws PromptError on a missing or
// unresolved placeholder.
std::string render(const PromptTemplate& t, HookSlot slot, const std::string& key_code);

// Context appended to every coder prompt: the fields and builtins a heuristic
// may use, the main loop that calls the hooks, and the slot's current code.
std::string key_code(HookSlot slot, const std::string& current_source);

// Pulls the program for `slot` out of a completion: the text between the
// start/end markers when present, otherwise the whole reply.
std::string extract_program(const std::string& completion, HookSlot slot);

struct PromptOptConfig {
  int iterations = 10;  // i
  int generations = 20; // j
  double success_threshold = 0.5;
  std::uint64_t seed = 0;
  std::vector<HookSlot> slots{kAllSlots.begin(), kAllSlots.end()}; // generation g targets slots[g % size]
  std::optional<int> k;                                            // clusters; default max(2, ceil(sqrt N))
};

struct PromptIteration {
  int index = 0;
  PromptPart part = PromptPart::Role;
  bool refined = false; // false when the refinement call failed or returned an invalid template
  std::size_t generated = 0, successes = 0, distinct = 0;
  double diversity = 0.0, success_rate = 0.0;
  bool accepted = false;
  std::string note;
};

struct PromptOptResult {
  PromptTemplate best;
  double best_diversity = 0.0;
  std::vector<PromptIteration> history;
};

// Current source of each slot, used to build key code during generation.
using SlotSources = std::array<std::string, kNumSlots>;

PromptOptResult optimize_prompt(const PromptTemplate& t0, LlmClient& llm, const Embedder& embedder,
                                const SlotSources& current, const PromptOptConfig& cfg = {});

} // namespace modsat
