#include "modsat/prompt.hpp"

#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "modsat/dsl/dsl.hpp"
#include "modsat/dsl/symbols.hpp"
#include "modsat/rng.hpp"

namespace modsat {

namespace {

const std::regex& placeholder_re() {
  static const std::regex re(R"(\{\{\s*([A-Za-z_][A-Za-z0-9_]*)\s*\}\})");
  return re;
}

bool has_placeholder(const std::string& s, std::string_view name) {
  for (std::sregex_iterator it(s.begin(), s.end(), placeholder_re()), end; it != end; ++it)
    if ((*it)[1].str() == name) return true;
  return false;
}

std::string substitute(const std::string& s, const std::string& func, const std::string& code) {
  std::string out;
  std::size_t last = 0;
  for (std::sregex_iterator it(s.begin(), s.end(), placeholder_re()), end; it != end; ++it) {
    const std::smatch& m = *it;
    out.append(s, last, static_cast<std::size_t>(m.position(0)) - last);
    const std::string name = m[1].str();
    if (name == "func_name") out += func;
    else if (name == "replace_key_code") out += code;
    else throw PromptError("unresolved placeholder {{" + name + "}}");
    last = static_cast<std::size_t>(m.position(0) + m.length(0));
  }
  out.append(s, last);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const char* const kOriginal = R"([role]
You are a SAT solver researcher trying to rewrite the {{ func_name }} function(s).

[goal]
Your goal is to improve the SAT solver by rewriting the {{ func_name }} function(s), after reading and understanding the <key code> of SAT solver below.

[tips]
Tips:
1) Your rewrited function code must start with '''// start {function name}''' and end with '''// end {function name}'''
2) Your rewrited function(s) code must be different from original code, not just rewrite code synonymous!
3) You are not allowed to create your own new function(s) in the rewrited function(s). You are not allowed to create your own new global variables, but you can use the global variables existing in the <key code>.
4) Make sure the rewrited function(s) code can be executed correctly.

[key_code]
<key code> of SAT solver is:
{{ replace_key_code }}
)";

} // namespace

std::string_view prompt_part_name(PromptPart p) {
  switch (p) {
  case PromptPart::Role: return "role";
  case PromptPart::Goal: return "goal";
  case PromptPart::Tips: return "tips";
  }
  return "role";
}

std::string& PromptTemplate::part(PromptPart p) {
  return p == PromptPart::Role ? role : p == PromptPart::Goal ? goal : tips;
}

const std::string& PromptTemplate::part(PromptPart p) const {
  return p == PromptPart::Role ? role : p == PromptPart::Goal ? goal : tips;
}

PromptTemplate PromptTemplate::parse(const std::string& text) {
  PromptTemplate t;
  std::map<std::string, std::string> sections;
  std::string current;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() > 2 && line.front() == '[' && line.back() == ']' && line.find(' ') == std::string::npos) {
      current = line.substr(1, line.size() - 2);
      if (current != "role" && current != "goal" && current != "tips" && current != "key_code")
        throw PromptError("template line " + std::to_string(n) + ": unknown section [" + current + "]");
      if (sections.count(current)) throw PromptError("template: duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    if (current.empty()) {
      if (trim(line).empty()) continue;
      throw PromptError("template line " + std::to_string(n) + ": text before the first section");
    }
    sections[current] += line + "\n";
  }
  for (const char* s : {"role", "goal", "tips"})
    if (!sections.count(s)) throw PromptError(std::string("template: missing section [") + s + "]");
  t.role = trim(sections["role"]);
  t.goal = trim(sections["goal"]);
  t.tips = trim(sections["tips"]);
  if (sections.count("key_code")) t.key_code = trim(sections["key_code"]);
  return t;
}

PromptTemplate PromptTemplate::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PromptError("cannot open template " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse(s.str());
}

std::string PromptTemplate::to_text() const {
  return "[role]\n" + role + "\n\n[goal]\n" + goal + "\n\n[tips]\n" + tips + "\n\n[key_code]\n" + key_code + "\n";
}

void PromptTemplate::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PromptError("cannot write template " + path);
  out << to_text();
}

void PromptTemplate::validate() const {
  if (!has_placeholder(role, "func_name") && !has_placeholder(goal, "func_name") && !has_placeholder(tips, "func_name"))
    throw PromptError("template never mentions {{func_name}}");
  if ((role + goal + tips).find("// start") == std::string::npos)
    throw PromptError("template lacks the '// start' marker instruction");
  if (!has_placeholder(key_code, "replace_key_code")) throw PromptError("key_code section lacks {{replace_key_code}}");
  for (const std::string* s : {&role, &goal, &tips, &key_code})
    for (std::sregex_iterator it(s->begin(), s->end(), placeholder_re()), end; it != end; ++it)
      if ((*it)[1] != "func_name" && (*it)[1] != "replace_key_code")
        throw PromptError("unresolved placeholder {{" + (*it)[1].str() + "}}");
}

PromptTemplate original_prompt_template() { return PromptTemplate::parse(kOriginal); }

std::string render(const PromptTemplate& t, HookSlot slot, const std::string& code) {
  t.validate();
  const std::string func(slot_name(slot));
  return substitute(t.role, func, code) + "\n\n" + substitute(t.goal, func, code) + "\n\n" +
         substitute(t.tips, func, code) + "\n\n" + substitute(t.key_code, func, code);
}

std::string key_code(HookSlot slot, const std::string& current_source) {
  const std::uint8_t me = dsl::class_bit(slot_class(slot));
  std::ostringstream o;
  o << "// Solver state visible to heuristics. Fields marked writable may be assigned in " << slot_name(slot)
    << ".\n";
  o << "struct Solver {\n";
  for (const dsl::FieldInfo& f : dsl::fields()) {
    o << "  " << dsl::type_name(f.type) << ' ' << f.name;
    if (f.index == dsl::IndexSpace::Vars) o << "[v]";
    if (f.index == dsl::IndexSpace::Learnts) o << "[c]";
    o << ";" << ((f.writers & me) ? " // writable" : " // read-only") << "\n";
  }
  for (const dsl::ConstantInfo& c : dsl::constants()) o << "  static const int " << c.name << " = " << c.value << ";\n";
  o << "};\n\n// Callable helpers.\n";
  for (const dsl::BuiltinInfo& b : dsl::builtins()) {
    if (!(b.callers & me)) continue;
    o << b.name << "(";
    for (int k = 0; k < b.arity; ++k) o << (k ? ", " : "") << "x" << k;
    o << ")\n";
  }
  o << R"(
// Main search loop; the seven heuristics are called from here.
lbool search() {
  for (;;) {
    confl = propagate();
    if (confl != NONE) {
      if (decision_level == 0) return UNSAT;
      learnt = analyze(confl);            // calls var_bump_activity(v, var_inc) per seen variable
                                          // and cla_bump_activity(c) per traversed learnt clause
      cancel_until(backtrack_level);
      add and enqueue learnt;             // cla_bump_activity(c) on the new learnt clause
      var_inc /= var_decay; cla_inc /= cla_decay;
      if (restart_condition()) restart_function();
      if (rephase_condition()) rephase_function();
      if (reduce_condition()) reduce_db();
    } else {
      next = pick_branch_lit();           // highest activity, saved polarity
      if (next == NONE) return SAT;
      new_decision(next);
    }
  }
}

// Current implementation of )"
    << slot_name(slot) << ":\n// start " << slot_name(slot) << "\n"
    << trim(current_source) << "\n// end " << slot_name(slot) << "\n";
  return o.str();
}

std::string extract_program(const std::string& completion, HookSlot slot) {
  if (auto m = dsl::extract_marked(completion, slot_name(slot))) return *m;
  if (auto m = dsl::extract_marked(completion)) return *m;
  return completion;
}

PromptOptResult optimize_prompt(const PromptTemplate& t0, LlmClient& llm, const Embedder& embedder,
                                const SlotSources& current, const PromptOptConfig& cfg) {
  if (cfg.iterations < 0 || cfg.generations < 1) throw std::invalid_argument("prompt-opt: need i >= 0 and j >= 1");
  if (cfg.slots.empty()) throw std::invalid_argument("prompt-opt: no target slots");
  t0.validate();
  Rng rng(cfg.seed);
  PromptOptResult res;
  res.best = t0;
  double d = 0.0;
  for (int it = 0; it < cfg.iterations; ++it) {
    PromptIteration rec;
    rec.index = it;
    rec.part = static_cast<PromptPart>(rng.below(3));
    const std::uint64_t cluster_seed = rng.next();

    PromptTemplate cand = res.best;
    try {
      ChatRequest req;
      req.system = "You are a prompt engineer improving instructions for a code-generating assistant.";
      req.user = "Rewrite the following " + std::string(prompt_part_name(rec.part)) +
                 " section of a prompt that asks for SAT solver heuristic functions. Keep every {{...}} placeholder "
                 "and any '// start' / '// end' marker instructions. Reply with the revised section only.\n\n" +
                 res.best.part(rec.part);
      req.temperature = kCoderTemperature;
      cand.part(rec.part) = trim(llm.complete(req));
      cand.validate();
      rec.refined = true;
    } catch (const LlmError& e) {
      rec.note = std::string("refinement failed: ") + e.what();
    } catch (const PromptError& e) {
      rec.note = std::string("refinement rejected: ") + e.what();
    }
    if (!rec.refined) {
      res.history.push_back(rec);
      continue;
    }

    std::set<std::string> forms;
    for (int g = 0; g < cfg.generations; ++g) {
      const HookSlot slot = cfg.slots[static_cast<std::size_t>(g) % cfg.slots.size()];
      ++rec.generated;
      try {
        ChatRequest req;
        req.user = render(cand, slot, key_code(slot, current[static_cast<std::size_t>(slot_index(slot))]));
        req.temperature = kCoderTemperature;
          const auto prog = dsl::compile(extract_program(llm.complete(req), slot), slot);
        ++rec.successes;
        forms.insert(dsl::canonicalize(*prog).text);
      } catch (const LlmError&) {
      } catch (const dsl::DslError&) {
      }
    }
    rec.distinct = forms.size();
    rec.success_rate = static_cast<double>(rec.successes) / static_cast<double>(rec.generated);
    const std::vector<std::string> texts(forms.begin(), forms.end());
    rec.diversity = code_diversity(texts, embedder, cluster_seed, cfg.k);
    rec.accepted = rec.diversity > d && rec.success_rate > cfg.success_threshold;
    if (rec.accepted) {
      d = rec.diversity;
      res.best = cand;
      res.best_diversity = d;
    }
    res.history.push_back(rec);
  }
  return res;
}

} // namespace modsat
