#include "discover_fixture.hpp"

#include <memory>

#include "modsat/hooks.hpp"

namespace modsat::test {

namespace {

std::string preset_text(std::string_view id) { return std::string(find_preset(id)->dsl_source); }

std::string marked(const std::string& slot, const std::string& body) {
  return "// start " + slot + "\n" + body + "\n// end " + slot + "\n";
}

} // namespace

std::string discover_fixture_dir() { return std::string(MODSAT_TEST_DATA) + "/discover"; }

EvalOptions discover_eval_options() {
  EvalOptions o;
  o.timeout = 1.0;
  o.time_model = TimeModel::Work;
  o.jobs = 1;
  o.seeds = {0};
  return o;
}

DiscoverConfig discover_config() {
  DiscoverConfig c;
  c.max_iter = 8;
  c.seed = 0;
  return c;
}

std::vector<int> discover_candidates() { return {4, 1, 6, 5}; }

GenParams discover_dataset_params() {
  GenParams p;
  p.family = "random-3sat";
  p.name = "micro";
  p.count = 10;
  p.n = 200;
  p.ratio = 4.26;
  p.seed = 5;
  p.timeout = 1.0;
  return p;
}

MockLlm::Script discover_script() {
  // Round robin over hooks 4, 1, 6, 5.
  std::vector<std::string> coder = {
      "Here is a rewrite.\n" + preset_text("restart_condition/lbd-adaptive"),
      marked("rephase_condition", "bool rephase_condition() {\n    return rephases >= ;\n}"),
      marked("var_bump_activity", preset_dsl("var_bump_activity/baseline") + "\n// same bump, new comment"),
      preset_text("restart_function/lbd-moving-average"),
      marked("restart_condition", "bool restart_condition() {\n    return conflicts % 5000 == 4999;\n}"),
      marked("rephase_condition", "bool rephase_condition() {\n    if (rephases >= rephase_limit) return true\n}"),
      preset_text("var_bump_activity/level-scaled"),
      marked("restart_function", "void restart_function() {\n    clear_lbd_queue();\n    cancelUntil(0);\n}"),
  };
  std::vector<std::string> repairs = {
      preset_text("rephase_condition/progress-adaptive"),
      marked("rephase_condition", "bool rephase_condition() {\n    return rephases >= 2 * rephase_limit;\n}"),
  };
  auto c = std::make_shared<std::vector<std::string>>(std::move(coder));
  auto r = std::make_shared<std::vector<std::string>>(std::move(repairs));
  auto ci = std::make_shared<std::size_t>(0), ri = std::make_shared<std::size_t>(0);
  return [c, r, ci, ri](const ChatRequest& req) -> std::string {
    const bool repair = req.system.find("fix") != std::string::npos;
    auto& list = repair ? *r : *c;
    auto& i = repair ? *ri : *ci;
    if (i >= list.size()) throw LlmError("script exhausted");
    return list[i++];
  };
}

} // namespace modsat::test
