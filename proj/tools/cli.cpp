#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "modsat/diversity.hpp"
#include "modsat/evaluation.hpp"
#include "modsat/hooks.hpp"
#include "modsat/llm.hpp"
#include "modsat/prompt.hpp"
#include "modsat/search.hpp"

namespace modsat {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Runtime failures (exit 2) as opposed to usage errors (exit 1).
struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw RuntimeError("cannot write " + path);
}

// Writes to --out when given, otherwise to stdout.
void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) out << text;
  else write_text(path, text);
}

HeuristicSuite load_suite(const std::string& which) {
  if (which == "baseline") return HeuristicSuite::all_baseline();
  if (which == "discovered") return HeuristicSuite::all_discovered();
  return HeuristicSuite::load(which);
}

std::vector<int> parse_hooks(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int h = 0;
    try {
      h = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || h < 1 || h > kNumSlots)
      throw CLI::ValidationError("hooks", "'" + item + "' is not a hook number 1..7");
    out.push_back(h);
  }
  return out;
}

// --- shared option groups ---

struct Common {
  std::uint64_t seed = 0;
  std::string out;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--out", out, "Output path");
  }
};

struct EvalFlags {
  std::string dataset;
  double timeout = 0.0; // 0 takes the manifest's timeout
  int jobs = 1;
  int seeds = 1;
  std::string time_model = "wall";
  double work_rate = 2e7;
  bool subprocess = false;
  std::string solver;

  void add(CLI::App* app) {
    app->add_option("--dataset", dataset, "Dataset manifest")->required()->check(CLI::ExistingFile);
    app->add_option("--timeout", timeout, "Per-instance timeout in seconds (default: manifest)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seeds", seeds, "Solver seeds per instance (seed .. seed+n-1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--time-model", time_model, "wall or work")
        ->check(CLI::IsMember({"wall", "work"}))
        ->capture_default_str();
    app->add_option("--work-rate", work_rate, "Work ticks per simulated second")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_flag("--subprocess", subprocess, "Run each instance in a forked child");
    app->add_option("--solver", solver, "Solver configuration JSON")->check(CLI::ExistingFile);
  }

  DatasetManifest manifest() const {
    try {
      return DatasetManifest::load(dataset);
    } catch (const std::exception& e) {
      throw RuntimeError(e.what());
    }
  }

  EvalOptions options(const DatasetManifest& m, std::uint64_t seed) const {
    EvalOptions o;
    o.timeout = timeout > 0 ? timeout : m.timeout;
    o.jobs = jobs;
    o.time_model = time_model_from_name(time_model);
    o.work_rate = work_rate;
    o.subprocess = subprocess;
    o.seeds.clear();
    for (int i = 0; i < seeds; ++i) o.seeds.push_back(seed + static_cast<std::uint64_t>(i));
    if (!solver.empty()) o.solver = config_from_json(json::parse(read_text(solver)));
    return o;
  }
};

struct LlmFlags {
  std::string mode = "live";
  std::string transcript;
  std::string prompt;

  void add(CLI::App* app) {
    app->add_option("--llm-mode", mode, "live, record or replay")
        ->check(CLI::IsMember({"live", "record", "replay"}))
        ->capture_default_str();
    app->add_option("--transcript", transcript, "Transcript file for record/replay");
    app->add_option("--prompt", prompt, "Prompt template file (default: built-in original prompt)")
        ->check(CLI::ExistingFile);
  }

  LlmHandle client() const {
    try {
      return make_llm(mode, transcript);
    } catch (const LlmError& e) {
      throw RuntimeError(e.what());
    }
  }

  PromptTemplate templ() const { return prompt.empty() ? original_prompt_template() : PromptTemplate::load(prompt); }
};

// --- solve ---

struct SolveCmd {
  Common c;
  std::string cnf;
  std::string suite = "baseline";
  std::string solver;
  double timeout = 0.0;
  bool strict = false;
  bool no_model = false;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("solve", "Solve a DIMACS CNF file");
    s->add_option("cnf", cnf, "DIMACS file")->required()->check(CLI::ExistingFile);
    s->add_option("--suite", suite, "baseline, discovered or a suite JSON file")->capture_default_str();
    s->add_option("--solver", solver, "Solver configuration JSON")->check(CLI::ExistingFile);
    s->add_option("--timeout", timeout, "Wall-clock limit in seconds (0: none)")->check(CLI::NonNegativeNumber);
    s->add_flag("--strict", strict, "Reject header/clause-count mismatches");
    s->add_flag("--no-model", no_model, "Omit v lines");
    c.add(s);
  }

  int run(std::ostream& out, std::ostream& err) const {
    DimacsParse parsed;
    try {
      parsed = read_dimacs_file(cnf, {strict});
    } catch (const DimacsError& e) {
      throw RuntimeError(cnf + ":" + std::to_string(e.line()) + ": " + e.what());
    }
    if (parsed.clause_count_mismatch)
      err << "c warning: header declares " << parsed.declared_clauses << " clauses, found "
          << parsed.formula.clauses.size() << "\n";
    SolverConfig cfg = solver.empty() ? SolverConfig{} : config_from_json(json::parse(read_text(solver)));
    cfg.seed = c.seed;
    cfg.timeout = timeout;
    const SolveResult r = modsat::solve(parsed.formula, load_suite(suite), cfg);

    out << "c conflicts " << r.stats.conflicts << " decisions " << r.stats.decisions << " restarts "
        << r.stats.restarts << "\n";
    switch (r.status) {
    case Status::Sat: {
      out << "s SATISFIABLE\n";
      if (!no_model) {
        std::string line = "v";
        for (int v = 0; v < parsed.formula.num_vars; ++v) {
          const long lit = r.model.value(v) == LBool::False ? -(v + 1L) : v + 1L;
          line += " " + std::to_string(lit);
          if (line.size() > 70) {
            out << line << "\n";
            line = "v";
          }
        }
        out << line << " 0\n";
      }
      break;
    }
    case Status::Unsat: out << "s UNSATISFIABLE\n"; break;
    case Status::Unknown: out << "s UNKNOWN\n"; break;
    }
    if (!c.out.empty()) {
      RunRecord rec{fs::path(cnf).filename().string(), r.status, r.wall_time, r.stats, suite, c.seed, {}};
      write_text(c.out, rec.to_json().dump(2) + "\n");
    }
    return r.status == Status::Sat ? 10 : r.status == Status::Unsat ? 20 : 0;
  }
};

// --- gen ---

struct GenCmd {
  Common c;
  GenParams p;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("gen", "Generate a synthetic dataset");
    s->add_option("--family", p.family, "random-3sat, pigeonhole or parity-chain")
        ->check(CLI::IsMember({"random-3sat", "pigeonhole", "parity-chain"}))
        ->capture_default_str();
    s->add_option("--count", p.count, "Number of instances")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--n", p.n, "Variables (random-3sat)")->capture_default_str();
    s->add_option("--m", p.m, "Clauses (random-3sat; 0 derives from --ratio)")->capture_default_str();
    s->add_option("--ratio", p.ratio, "Clause/variable ratio")->capture_default_str();
    s->add_option("--holes", p.holes, "Holes (pigeonhole)")->capture_default_str();
    s->add_option("--extra-pigeons", p.extra_pigeons, "Pigeons beyond the hole count")->capture_default_str();
    s->add_option("--width", p.width, "XOR width (parity-chain)")->capture_default_str();
    s->add_option("--consistent", p.consistent, "Satisfiable parity constraint")->capture_default_str();
    s->add_option("--timeout", p.timeout, "Timeout recorded in the manifest")->capture_default_str();
    s->add_option("--name", p.name, "Dataset name (default: family)");
    c.add(s);
    s->get_option("--out")->required();
  }

  int run(std::ostream& out) {
    p.seed = c.seed;
    const DatasetManifest m = generate_instances(p, c.out);
    out << "wrote " << m.instances.size() << " instances and " << (fs::path(c.out) / "manifest.json").string()
        << "\n";
    return 0;
  }
};

// --- bench ---

// Stub runner input: one "instance<TAB>seconds|fail" line per instance.
Runner stub_runner(const std::string& path, double timeout) {
  std::map<std::string, std::optional<double>> times;
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw RuntimeError("stub file: missing tab in '" + line + "'");
    const std::string v = line.substr(tab + 1);
    times[line.substr(0, tab)] = v == "fail" ? std::nullopt : std::optional<double>(std::stod(v));
  }
  return [times, timeout](const Instance& inst, const HeuristicSuite& s, std::uint64_t seed) {
    const auto it = times.find(inst.id);
    if (it == times.end()) throw RuntimeError("stub file has no entry for " + inst.id);
    RunRecord r;
    r.instance = inst.id;
    r.suite = s.fingerprint();
    r.seed = seed;
    r.status = it->second ? Status::Sat : Status::Unknown;
    r.time = it->second.value_or(timeout);
    return r;
  };
}

struct BenchCmd {
  Common c;
  EvalFlags e;
  std::string suite = "baseline";
  std::string stub;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("bench", "PAR-2 benchmark of a heuristic suite on a dataset");
    s->add_option("--suite", suite, "baseline, discovered or a suite JSON file")->capture_default_str();
    s->add_option("--stub", stub, "Replace the solver with recorded times (instance<TAB>seconds|fail)")
        ->check(CLI::ExistingFile);
    e.add(s);
    c.add(s);
  }

  int run(std::ostream& out) const {
    const DatasetManifest m = e.manifest();
    const EvalOptions opts = e.options(m, c.seed);
    Benchmark b(load_instances(m), opts);
    if (!stub.empty()) b.set_runner(stub_runner(stub, opts.timeout));
    const EvalResult r = b.run(load_suite(suite));
    const ReportMeta meta{m.name, suite, opts.time_model};
    if (c.out.empty()) {
      out << summary_json(r, meta).dump(2) << "\n";
    } else {
      write_report(r, meta, c.out);
      char line[160];
      std::snprintf(line, sizeof line, "par2 %.6g solved %zu/%zu\n", r.report.par2, r.report.solved,
                    r.records.size());
      out << line;
    }
    return 0;
  }
};

// --- tune ---

struct TuneCmd {
  Common c;
  EvalFlags e;
  std::string suite = "baseline";
  int budget = 20;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("tune", "Random search over solver parameters");
    s->add_option("--suite", suite, "baseline, discovered or a suite JSON file")->capture_default_str();
    s->add_option("--budget", budget, "Configurations to try")->check(CLI::PositiveNumber)->capture_default_str();
    e.add(s);
    c.add(s);
  }

  int run(std::ostream& out) const {
    const DatasetManifest m = e.manifest();
    const EvalOptions base = e.options(m, c.seed);
    const auto instances = load_instances(m);
    const HeuristicSuite st = load_suite(suite);
    const TuneResult t = tune_random(
        [&](const SolverConfig& cfg) {
          EvalOptions o = base;
          o.solver = cfg;
          return Benchmark(instances, o).run(st).report.par2;
        },
        budget, c.seed, base.solver);
    json samples = json::array();
    for (std::size_t i = 0; i < t.samples.size(); ++i)
      samples.push_back({{"config", config_to_json(t.samples[i])}, {"par2", t.scores[i]}});
    const json j = {{"schema", "modsat.tune/1"},
                    {"dataset", m.name},
                    {"best", config_to_json(t.best)},
                    {"best_par2", t.best_score},
                    {"samples", samples}};
    emit(out, c.out, j.dump(2) + "\n");
    return 0;
  }
};

// --- search subcommands ---

void emit_search(std::ostream& out, const std::string& path, const SearchResult& r) {
  emit(out, path, r.to_json().dump(2) + "\n");
  if (!path.empty()) {
    char line[160];
    std::snprintf(line, sizeof line, "par2 %.6g -> %.6g after %d evaluations\n", r.initial_score, r.score,
                  r.evaluations);
    out << line;
  }
}

struct PresearchCmd {
  Common c;
  EvalFlags e;
  std::string suite = "discovered";
  int keep = 4;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("presearch", "Rank hooks by the PAR-2 cost of reverting each one");
    s->add_option("--suite", suite, "Full candidate suite")->capture_default_str();
    s->add_option("--keep", keep, "Hooks to retain")->check(CLI::Range(1, kNumSlots))->capture_default_str();
    e.add(s);
    c.add(s);
  }

  int run(std::ostream& out) const {
    const DatasetManifest m = e.manifest();
    const Benchmark b(load_instances(m), e.options(m, c.seed));
    const PresearchResult r = presearch(Evaluator::from_benchmark(b), load_suite(suite), c.seed, keep);
    emit(out, c.out, r.to_json().dump(2) + "\n");
    return 0;
  }
};

// Hooks from --hooks, a presearch result, or the manifest's candidate list.
std::vector<int> pick_hooks(const std::string& list, const std::string& presearch_file, const DatasetManifest& m) {
  if (!list.empty()) return parse_hooks(list);
  if (!presearch_file.empty()) return json::parse(read_text(presearch_file)).at("retained").get<std::vector<int>>();
  if (m.candidates.empty()) throw RuntimeError("no candidate hooks: pass --hooks or --presearch");
  return m.candidates;
}

struct EvolveCmd {
  Common c;
  EvalFlags e;
  LlmFlags l;
  std::string suite = "discovered";
  std::string hooks, presearch_file;
  std::string generator = "discovered";
  int budget = 50;
  int lambda = 1;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("evolve", "(1+lambda) evolutionary search over the retained hooks");
    s->add_option("--suite", suite, "Suite the retained hooks start from")->capture_default_str();
    s->add_option("--hooks", hooks, "Retained hooks, e.g. 2,4,5,7 (default: manifest candidates)");
    s->add_option("--presearch", presearch_file, "Take retained hooks from a presearch result")
        ->check(CLI::ExistingFile);
    s->add_option("--generator", generator, "discovered, presets or llm")
        ->check(CLI::IsMember({"discovered", "presets", "llm"}))
        ->capture_default_str();
    s->add_option("--budget", budget, "Offspring evaluations")->check(CLI::NonNegativeNumber)->capture_default_str();
    s->add_option("--lambda", lambda, "Offspring per step")->check(CLI::PositiveNumber)->capture_default_str();
    e.add(s);
    l.add(s);
    c.add(s);
  }

  int run(std::ostream& out) const {
    const DatasetManifest m = e.manifest();
    const Benchmark b(load_instances(m), e.options(m, c.seed));
    const std::vector<int> retained = pick_hooks(hooks, presearch_file, m);
    LlmHandle llm;
    PromptTemplate prompt;
    ProgramGenerator gen;
    if (generator == "discovered") {
      gen = [](HookSlot slot, const HeuristicSuite&) { return std::string(discovered_preset(slot).id); };
    } else if (generator == "presets") {
      auto rng = std::make_shared<Rng>(c.seed ^ 0x9e3779b97f4a7c15ULL);
      gen = [rng](HookSlot slot, const HeuristicSuite&) {
        return std::string(rng->bernoulli(0.5) ? discovered_preset(slot).id : baseline_preset(slot).id);
      };
    } else {
      llm = l.client();
      prompt = l.templ();
      gen = [&llm, &prompt](HookSlot slot, const HeuristicSuite& inc) {
        ChatRequest req;
        req.user = render(prompt, slot, key_code(slot, slot_source(inc, slot)));
        req.temperature = kCoderTemperature;
        return llm.get().complete(req);
      };
    }
    EvolveConfig cfg;
    cfg.budget = budget;
    cfg.lambda = lambda;
    cfg.seed = c.seed;
    emit_search(out, c.out, evolve(Evaluator::from_benchmark(b), retained, load_suite(suite), gen, cfg));
    return 0;
  }
};

struct DiscoverCmd {
  Common c;
  EvalFlags e;
  LlmFlags l;
  std::string suite = "baseline";
  std::string hooks, presearch_file;
  int max_iter = 10;
  bool random_slots = false;
  bool llm_synonyms = false;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("discover", "Coder/evaluator/repairer heuristic discovery loop");
    s->add_option("--suite", suite, "Initial suite")->capture_default_str();
    s->add_option("--hooks", hooks, "Candidate hooks, e.g. 1,3,4 (default: manifest candidates)");
    s->add_option("--presearch", presearch_file, "Take candidate hooks from a presearch result")
        ->check(CLI::ExistingFile);
    s->add_option("--max-iter", max_iter, "Iterations")->check(CLI::NonNegativeNumber)->capture_default_str();
    s->add_flag("--random-slots", random_slots, "Draw the target hook at random instead of round robin");
    s->add_flag("--llm-synonym-check", llm_synonyms, "Also ask the evaluator role whether code is synonymous");
    e.add(s);
    l.add(s);
    c.add(s);
  }

  int run(std::ostream& out) const {
    const DatasetManifest m = e.manifest();
    const Benchmark b(load_instances(m), e.options(m, c.seed));
    const std::vector<int> cands = pick_hooks(hooks, presearch_file, m);
    LlmHandle llm = l.client();
    DiscoverConfig cfg;
    cfg.max_iter = max_iter;
    cfg.random_slots = random_slots;
    cfg.seed = c.seed;
    cfg.llm_synonym_check = llm_synonyms;
    cfg.prompt = l.templ();
    LlmClient& client = llm.get();
    emit_search(out, c.out,
                discover(Evaluator::from_benchmark(b), cands, load_suite(suite), {client, client, client}, cfg));
    return 0;
  }
};

// --- prompt-opt ---

struct PromptOptCmd {
  Common c;
  LlmFlags l;
  std::string suite = "baseline";
  std::string hooks;
  std::string history;
  int iterations = 10;
  int generations = 20;
  double threshold = 0.5;
  int k = 0;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("prompt-opt", "Refine a prompt template for generation diversity");
    s->add_option("--suite", suite, "Suite whose code is shown as key code")->capture_default_str();
    s->add_option("--hooks", hooks, "Target hooks, rotated per generation (default: all)");
    s->add_option("--iterations", iterations, "Refinement iterations")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    s->add_option("--generations", generations, "Generations per iteration")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--threshold", threshold, "Minimum generation success rate")->capture_default_str();
    s->add_option("--k", k, "Clusters (default: max(2, ceil(sqrt(n))))")->check(CLI::NonNegativeNumber);
    s->add_option("--history", history, "Write per-iteration records as JSON");
    l.add(s);
    c.add(s);
  }

  int run(std::ostream& out) const {
    LlmHandle llm = l.client();
    const HeuristicSuite st = load_suite(suite);
    SlotSources sources;
    for (HookSlot slot : kAllSlots) sources[static_cast<std::size_t>(slot_index(slot))] = slot_source(st, slot);
    PromptOptConfig cfg;
    cfg.iterations = iterations;
    cfg.generations = generations;
    cfg.success_threshold = threshold;
    cfg.seed = c.seed;
    if (!hooks.empty()) {
      cfg.slots.clear();
      for (int h : parse_hooks(hooks)) cfg.slots.push_back(*slot_from_number(h));
    }
    if (k > 0) cfg.k = k;
    const auto embedder = default_embedder();
    const PromptOptResult r = optimize_prompt(l.templ(), llm.get(), *embedder, sources, cfg);
    emit(out, c.out, r.best.to_text());
    json hist = json::array();
    for (const PromptIteration& it : r.history)
      hist.push_back({{"iteration", it.index},
                      {"part", std::string(prompt_part_name(it.part))},
                      {"refined", it.refined},
                      {"generated", it.generated},
                      {"successes", it.successes},
                      {"distinct", it.distinct},
                      {"diversity", it.diversity},
                      {"success_rate", it.success_rate},
                      {"accepted", it.accepted},
                      {"note", it.note}});
    const json j = {{"schema", "modsat.prompt-opt/1"}, {"best_diversity", r.best_diversity}, {"history", hist}};
    if (!history.empty()) write_text(history, j.dump(2) + "\n");
    else if (!c.out.empty()) out << "best diversity " << r.best_diversity << "\n";
    return 0;
  }
};

// --- report ---

struct ReportCmd {
  Common c;
  std::string input;
  double timeout = 0.0;
  bool plot = false;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("report", "Summaries and plot data from bench or search outputs");
    s->add_option("input", input, "Bench records (.jsonl) or a search result (.json)")
        ->required()
        ->check(CLI::ExistingFile);
    s->add_option("--timeout", timeout, "Timeout for PAR-2 (default: from the neighbouring summary)")
        ->check(CLI::NonNegativeNumber);
    s->add_flag("--plot", plot, "Emit plot data: cactus for records, PAR-2 trace for searches");
    c.add(s);
  }

  double records_timeout() const {
    if (timeout > 0) return timeout;
    std::string summary = input;
    if (summary.ends_with(".jsonl")) summary = summary.substr(0, summary.size() - 6) + ".summary.json";
    if (!fs::exists(summary)) throw RuntimeError("pass --timeout: no summary next to " + input);
    return json::parse(read_text(summary)).at("timeout").get<double>();
  }

  int run(std::ostream& out) const {
    std::string text;
    if (input.ends_with(".jsonl")) {
      const auto records = read_records(input);
      const double t = records_timeout();
      if (plot) {
        text = cactus_tsv(records, t);
      } else {
        const Par2Report r = par2(records, t);
        char line[160];
        std::snprintf(line, sizeof line, "par2 %.6g solved %zu/%zu timeout %g\n", r.par2, r.solved,
                      records.size(), t);
        text = line;
      }
    } else {
      const json j = json::parse(read_text(input));
      if (!j.contains("trace")) throw RuntimeError(input + " is not a search result");
      if (plot) {
        text = "iteration\tpar2\n";
        const auto trace = j.at("trace").get<std::vector<double>>();
        for (std::size_t i = 0; i < trace.size(); ++i) {
          char row[64];
          std::snprintf(row, sizeof row, "%zu\t%.17g\n", i, trace[i]);
          text += row;
        }
      } else {
        char line[200];
        std::snprintf(line, sizeof line, "par2 %.6g -> %.6g, %d evaluations, %zu records\n",
                      j.at("initial_par2").get<double>(), j.at("par2").get<double>(), j.at("evaluations").get<int>(),
                      j.at("history").size());
        text = line;
      }
    }
    emit(out, c.out, text);
    return 0;
  }
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modular CDCL SAT solver with automated heuristic search", "modsat"};
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  SolveCmd solve_cmd;
  GenCmd gen_cmd;
  BenchCmd bench_cmd;
  TuneCmd tune_cmd;
  PresearchCmd presearch_cmd;
  EvolveCmd evolve_cmd;
  DiscoverCmd discover_cmd;
  PromptOptCmd prompt_cmd;
  ReportCmd report_cmd;
  solve_cmd.add(app);
  gen_cmd.add(app);
  bench_cmd.add(app);
  tune_cmd.add(app);
  presearch_cmd.add(app);
  evolve_cmd.add(app);
  discover_cmd.add(app);
  prompt_cmd.add(app);
  report_cmd.add(app);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "solve") return solve_cmd.run(out, err);
    if (name == "gen") return gen_cmd.run(out);
    if (name == "bench") return bench_cmd.run(out);
    if (name == "tune") return tune_cmd.run(out);
    if (name == "presearch") return presearch_cmd.run(out);
    if (name == "evolve") return evolve_cmd.run(out);
    if (name == "discover") return discover_cmd.run(out);
    if (name == "prompt-opt") return prompt_cmd.run(out);
    if (name == "report") return report_cmd.run(out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: unknown subcommand " << name << "\n";
  return 1;
}

} // namespace modsat
