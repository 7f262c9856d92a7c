#include "modsat/evaluation.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace modsat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Status status_from_name(std::string_view s) {
  if (s == "SAT") return Status::Sat;
  if (s == "UNSAT") return Status::Unsat;
  if (s == "UNKNOWN") return Status::Unknown;
  throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

json stats_json(const Stats& s) {
  return {{"conflicts", s.conflicts},       {"decisions", s.decisions},
          {"propagations", s.propagations}, {"restarts", s.restarts},
          {"rephases", s.rephase_calls},    {"reductions", s.reductions},
          {"learnts", s.learnts_added},     {"garbage_collections", s.garbage_collections},
          {"work", s.work}};
}

Stats stats_from_json(const json& j) {
  Stats s;
  s.conflicts = j.value("conflicts", std::int64_t{0});
  s.decisions = j.value("decisions", std::int64_t{0});
  s.propagations = j.value("propagations", std::int64_t{0});
  s.restarts = j.value("restarts", std::int64_t{0});
  s.rephase_calls = j.value("rephases", std::int64_t{0});
  s.reductions = j.value("reductions", std::int64_t{0});
  s.learnts_added = j.value("learnts", std::int64_t{0});
  s.garbage_collections = j.value("garbage_collections", std::int64_t{0});
  s.work = j.value("work", std::uint64_t{0});
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace

// --- scoring ---

json RunRecord::to_json() const {
  json j = {{"instance", instance}, {"status", status_name(status)}, {"time", time},
            {"seed", seed},         {"suite", suite},                 {"stats", stats_json(stats)}};
  if (!fault.empty()) j["fault"] = fault;
  return j;
}

RunRecord RunRecord::from_json(const json& j) {
  RunRecord r;
  r.instance = j.at("instance").get<std::string>();
  r.status = status_from_name(j.at("status").get<std::string>());
  r.time = j.at("time").get<double>();
  r.seed = j.value("seed", std::uint64_t{0});
  r.suite = j.value("suite", std::string{});
  if (j.contains("stats")) r.stats = stats_from_json(j.at("stats"));
  r.fault = j.value("fault", std::string{});
  return r;
}

json Par2Report::to_json() const {
  json per = json::array();
  for (std::size_t i = 0; i < instances.size(); ++i) per.push_back({{"instance", instances[i]}, {"tau", penalized[i]}});
  return {{"timeout", timeout}, {"par2", par2}, {"solved", solved}, {"runs", instances.size()}, {"penalized", per}};
}

bool solved_within(const RunRecord& r, double timeout) { return r.status != Status::Unknown && r.time <= timeout; }

double penalized_time(const RunRecord& r, double timeout) { return solved_within(r, timeout) ? r.time : 2.0 * timeout; }

Par2Report par2(std::span<const RunRecord> records, double timeout) {
  if (records.empty()) throw std::invalid_argument("par2: empty record set");
  if (!(timeout > 0.0)) throw std::invalid_argument("par2: timeout must be positive");
  Par2Report rep;
  rep.timeout = timeout;
  double sum = 0.0;
  for (const RunRecord& r : records) {
    const double tau = penalized_time(r, timeout);
    rep.instances.push_back(r.instance);
    rep.penalized.push_back(tau);
    sum += tau;
    if (solved_within(r, timeout)) ++rep.solved;
  }
  rep.par2 = sum / static_cast<double>(records.size());
  return rep;
}

double speedup(double a, double b) {
  const double m = std::max(a, b);
  if (m == 0.0) throw std::invalid_argument("speedup: max(a, b) is zero");
  return (a - b) / m;
}

// --- datasets ---

void DatasetManifest::validate() const {
  if (!(timeout > 0.0)) throw std::invalid_argument("dataset '" + name + "': timeout must be positive");
  std::set<int> seen;
  for (int c : candidates) {
    if (c < 1 || c > kNumSlots) throw std::invalid_argument("dataset '" + name + "': candidate out of range 1..7");
    if (!seen.insert(c).second) throw std::invalid_argument("dataset '" + name + "': duplicate candidate");
  }
}

std::string DatasetManifest::resolve(const std::string& path) const {
  const fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (fs::path(base_dir) / p).string();
}

json DatasetManifest::to_json() const {
  return {{"schema", kSchema},
          {"name", name},
          {"timeout", timeout},
          {"candidates", candidates},
          {"instances", instances}};
}

DatasetManifest DatasetManifest::from_json(const json& j, std::string base) {
  if (j.value("schema", std::string{}) != kSchema)
    throw std::invalid_argument("dataset manifest: expected schema " + std::string(kSchema));
  DatasetManifest m;
  m.name = j.value("name", std::string{});
  m.timeout = j.at("timeout").get<double>();
  m.candidates = j.value("candidates", std::vector<int>{});
  m.instances = j.value("instances", std::vector<std::string>{});
  m.base_dir = std::move(base);
  m.validate();
  return m;
}

DatasetManifest DatasetManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return from_json(j, fs::path(path).parent_path().string());
}

void DatasetManifest::save(const std::string& path) const { write_file(path, to_json().dump(2) + "\n"); }

std::vector<Instance> load_instances(const DatasetManifest& m) {
  std::vector<Instance> out;
  out.reserve(m.instances.size());
  for (const std::string& p : m.instances) {
    const std::string full = m.resolve(p);
    try {
      out.push_back({fs::path(p).filename().string(), read_dimacs_file(full).formula});
    } catch (const DimacsError& e) {
      throw std::runtime_error(full + ":" + std::to_string(e.line()) + ": " + e.what());
    }
  }
  return out;
}

// --- generators ---

Formula random_ksat(int n, int m, int k, std::uint64_t seed) {
  if (n < 1 || m < 0 || k < 1 || k > n) throw std::invalid_argument("random_ksat: need 1 <= k <= n and m >= 0");
  Rng rng(seed);
  Formula f;
  f.num_vars = n;
  f.clauses.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    Clause c;
    while (static_cast<int>(c.size()) < k) {
      const Var v = static_cast<Var>(rng.below(static_cast<std::uint64_t>(n)));
      if (std::any_of(c.begin(), c.end(), [&](Lit l) { return l.var() == v; })) continue;
      c.push_back(Lit(v, rng.bernoulli(0.5)));
    }
    f.clauses.push_back(std::move(c));
  }
  return f;
}

Formula random_3sat(int n, int m, std::uint64_t seed) { return random_ksat(n, m, 3, seed); }

Formula pigeonhole(int p, int h) {
  if (p < 1 || h < 1) throw std::invalid_argument("pigeonhole: need p, h >= 1");
  Formula f;
  f.num_vars = p * h;
  auto x = [h](int i, int j) { return Lit(static_cast<Var>(i * h + j), false); };
  for (int i = 0; i < p; ++i) {
    Clause c;
    for (int j = 0; j < h; ++j) c.push_back(x(i, j));
    f.clauses.push_back(std::move(c));
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) f.clauses.push_back({~x(a, j), ~x(b, j)});
  return f;
}

Formula parity_chain(int width, bool consistent, std::uint64_t seed) {
  if (width < 1) throw std::invalid_argument("parity_chain: width must be >= 1");
  Rng rng(seed);
  std::vector<Var> order(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = width - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  const bool parity = rng.bernoulli(0.5);

  Formula f;
  f.num_vars = width;
  // z <-> a xor b
  auto xor_gate = [&](Lit z, Lit a, Lit b) {
    f.clauses.push_back({~z, a, b});
    f.clauses.push_back({~z, ~a, ~b});
    f.clauses.push_back({z, ~a, b});
    f.clauses.push_back({z, a, ~b});
  };
  auto chain = [&](bool target) {
    Lit acc(order[0], false);
    for (int i = 1; i < width; ++i) {
      const Lit z(static_cast<Var>(f.num_vars++), false);
      xor_gate(z, acc, Lit(order[static_cast<std::size_t>(i)], false));
      acc = z;
    }
    f.clauses.push_back({target ? acc : ~acc});
  };
  chain(parity);
  if (!consistent) chain(!parity);
  return f;
}

DatasetManifest generate_instances(const GenParams& p, const std::string& dir) {
  if (p.count < 1) throw std::invalid_argument("generate: count must be >= 1");
  fs::create_directories(dir);
  DatasetManifest m;
  m.name = p.name.empty() ? p.family : p.name;
  m.timeout = p.timeout;
  m.base_dir = dir;
  Rng seeds(p.seed);
  for (int k = 0; k < p.count; ++k) {
    const std::uint64_t s = seeds.next();
    Formula f;
    if (p.family == "random-3sat") {
      if (p.n < 3) throw std::invalid_argument("random-3sat: n must be >= 3");
      const int m_clauses = p.m > 0 ? p.m : static_cast<int>(std::lround(p.ratio * p.n));
      f = random_3sat(p.n, m_clauses, s);
    } else if (p.family == "pigeonhole") {
      const int h = p.holes + k;
      f = pigeonhole(h + p.extra_pigeons, h);
    } else if (p.family == "parity-chain") {
      f = parity_chain(p.width, p.consistent, s);
    } else {
      throw std::invalid_argument("unknown family '" + p.family + "'");
    }
    char file[64];
    std::snprintf(file, sizeof file, "%s-%03d.cnf", m.name.c_str(), k);
    write_file((fs::path(dir) / file).string(), write_dimacs(f));
    m.instances.emplace_back(file);
  }
  m.validate();
  m.save((fs::path(dir) / "manifest.json").string());
  return m;
}

// --- running ---

std::string_view time_model_name(TimeModel m) { return m == TimeModel::Wall ? "wall" : "work"; }

TimeModel time_model_from_name(std::string_view name) {
  if (name == "wall") return TimeModel::Wall;
  if (name == "work") return TimeModel::Work;
  throw std::invalid_argument("unknown time model '" + std::string(name) + "'");
}

RunRecord run_instance(const Instance& inst, const HeuristicSuite& suite, const SolverConfig& base, double timeout,
                       TimeModel model, double work_rate) {
  if (!(timeout > 0.0)) throw std::invalid_argument("run_instance: timeout must be positive");
  SolverConfig cfg = base;
  if (model == TimeModel::Wall) {
    cfg.timeout = timeout;
  } else {
    cfg.timeout = 0.0;
    cfg.work_limit = static_cast<std::uint64_t>(std::ceil(timeout * work_rate)) + 1;
  }
  RunRecord rec;
  rec.instance = inst.id;
  rec.suite = suite.fingerprint();
  rec.seed = cfg.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    Solver s(inst.formula, bind(suite), cfg);
    const SolveResult r = s.solve();
    rec.status = r.status;
    rec.stats = r.stats;
    rec.time = model == TimeModel::Wall ? r.wall_time : static_cast<double>(r.stats.work) / work_rate;
  } catch (const HookFault& e) {
    rec.status = Status::Unknown;
    rec.fault = e.what();
    rec.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

RunRecord run_instance_subprocess(const Instance& inst, const HeuristicSuite& suite, const SolverConfig& cfg,
                                  double timeout, TimeModel model, double work_rate) {
  int fds[2];
  if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw std::runtime_error("fork failed");
  }
  if (pid == 0) {
    close(fds[0]);
    std::string out;
    try {
      out = run_instance(inst, suite, cfg, timeout, model, work_rate).to_json().dump();
    } catch (const std::exception& e) {
      out = json{{"error", e.what()}}.dump();
    }
    const char* p = out.data();
    std::size_t left = out.size();
    while (left > 0) {
      const ssize_t w = write(fds[1], p, left);
      if (w <= 0) break;
      p += w;
      left -= static_cast<std::size_t>(w);
    }
    close(fds[1]);
    _exit(0);
  }
  close(fds[1]);
  // Wall time gets a hard kill at 1.1x; simulated time only a generous safety net.
  const double limit = model == TimeModel::Wall ? 1.1 * timeout : 1.1 * timeout + 60.0;
  const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(limit));
  std::string buf;
  bool killed = false;
  char chunk[4096];
  for (;;) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      kill(pid, SIGKILL);
      killed = true;
      break;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{fds[0], POLLIN, 0};
    const int pr = poll(&pfd, 1, static_cast<int>(std::min<long long>(ms + 1, 1000)));
    if (pr < 0 && errno == EINTR) continue;
    if (pr <= 0) continue;
    const ssize_t n = read(fds[0], chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buf.append(chunk, static_cast<std::size_t>(n));
  }
  close(fds[0]);
  int wstatus = 0;
  while (waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  RunRecord rec;
  rec.instance = inst.id;
  rec.suite = suite.fingerprint();
  rec.seed = cfg.seed;
  if (killed || buf.empty()) {
    rec.status = Status::Unknown;
    rec.time = elapsed;
    rec.fault = killed ? "killed after exceeding the hard time limit" : "child exited without a result";
    return rec;
  }
  const json j = json::parse(buf);
  if (j.contains("error")) throw std::runtime_error("child run failed: " + j.at("error").get<std::string>());
  return RunRecord::from_json(j);
}

Benchmark::Benchmark(std::vector<Instance> instances, EvalOptions opts)
    : instances_(std::move(instances)), opts_(std::move(opts)) {
  if (instances_.empty()) throw std::invalid_argument("benchmark: no instances");
  if (opts_.seeds.empty()) throw std::invalid_argument("benchmark: no seeds");
  if (opts_.jobs < 1) throw std::invalid_argument("benchmark: jobs must be >= 1");
}

RunRecord Benchmark::run_one(const Instance& inst, const HeuristicSuite& suite, std::uint64_t seed) const {
  if (runner_) return runner_(inst, suite, seed);
  SolverConfig cfg = opts_.solver;
  cfg.seed = seed;
  if (opts_.subprocess) return run_instance_subprocess(inst, suite, cfg, opts_.timeout, opts_.time_model, opts_.work_rate);
  return run_instance(inst, suite, cfg, opts_.timeout, opts_.time_model, opts_.work_rate);
}

EvalResult Benchmark::run(const HeuristicSuite& suite) const {
  std::vector<std::size_t> all(instances_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return run(suite, all);
}

EvalResult Benchmark::run(const HeuristicSuite& suite, std::span<const std::size_t> subset) const {
  if (subset.empty()) throw std::invalid_argument("benchmark: empty subset");
  struct Task {
    std::size_t inst;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t i : subset) {
    if (i >= instances_.size()) throw std::out_of_range("benchmark: subset index out of range");
    for (std::uint64_t s : opts_.seeds) tasks.push_back({i, s});
  }
  std::vector<RunRecord> out(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      try {
        out[k] = run_one(instances_[tasks[k].inst], suite, tasks[k].seed);
        out[k].instance = instances_[tasks[k].inst].id;
        out[k].seed = tasks[k].seed;
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(opts_.jobs, static_cast<int>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::stable_sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
    return a.instance != b.instance ? a.instance < b.instance : a.seed < b.seed;
  });
  EvalResult res;
  res.records = std::move(out);
  res.report = par2(res.records, opts_.timeout);
  for (std::uint64_t s : opts_.seeds) {
    std::vector<RunRecord> mine;
    for (const RunRecord& r : res.records)
      if (r.seed == s) mine.push_back(r);
    res.per_seed_par2.push_back(par2(mine, opts_.timeout).par2);
  }
  return res;
}

// --- reports ---

json summary_json(const EvalResult& r, const ReportMeta& meta) {
  json runs = json::array();
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const RunRecord& rec = r.records[i];
    runs.push_back({{"instance", rec.instance},
                    {"seed", rec.seed},
                    {"status", status_name(rec.status)},
                    {"time", rec.time},
                    {"tau", r.report.penalized[i]}});
  }
  return {{"schema", "modsat.summary/1"},
          {"dataset", meta.dataset},
          {"suite", meta.suite},
          {"time_model", time_model_name(meta.time_model)},
          {"timeout", r.report.timeout},
          {"par2", r.report.par2},
          {"solved", r.report.solved},
          {"runs", r.records.size()},
          {"per_seed_par2", r.per_seed_par2},
          {"records", runs}};
}

void write_report(const EvalResult& r, const ReportMeta& meta, const std::string& prefix) {
  const fs::path parent = fs::path(prefix).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::string lines;
  for (const RunRecord& rec : r.records) lines += rec.to_json().dump() + "\n";
  write_file(prefix + ".jsonl", lines);
  write_file(prefix + ".summary.json", summary_json(r, meta).dump(2) + "\n");
}

std::vector<RunRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<RunRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(RunRecord::from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string cactus_tsv(std::span<const RunRecord> records, double timeout) {
  std::vector<double> times;
  for (const RunRecord& r : records)
    if (solved_within(r, timeout)) times.push_back(r.time);
  std::sort(times.begin(), times.end());
  std::ostringstream out;
  out << "solved\ttime\n";
  out.precision(9);
  for (std::size_t k = 0; k < times.size(); ++k) out << (k + 1) << '\t' << times[k] << '\n';
  return out.str();
}

// --- tuning ---

json config_to_json(const SolverConfig& c) {
  return {{"var_decay", c.var_decay}, {"cla_decay", c.cla_decay}, {"rnd_freq", c.rnd_freq},
          {"rnd_init", c.rnd_init},   {"rfirst", c.rfirst},       {"rinc", c.rinc},
          {"gc_frac", c.gc_frac},     {"min_learnts", c.min_learnts}, {"seed", c.seed},
          {"timeout", c.timeout},     {"work_limit", c.work_limit},   {"minimize", c.minimize}};
}

SolverConfig config_from_json(const json& j, SolverConfig c) {
  if (!j.is_object()) throw std::invalid_argument("solver config must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "var_decay") c.var_decay = v.get<double>();
    else if (k == "cla_decay") c.cla_decay = v.get<double>();
    else if (k == "rnd_freq") c.rnd_freq = v.get<double>();
    else if (k == "rnd_init") c.rnd_init = v.get<bool>();
    else if (k == "rfirst") c.rfirst = v.get<std::int64_t>();
    else if (k == "rinc") c.rinc = v.get<double>();
    else if (k == "gc_frac") c.gc_frac = v.get<double>();
    else if (k == "min_learnts") c.min_learnts = v.get<std::int64_t>();
    else if (k == "seed") c.seed = v.get<std::uint64_t>();
    else if (k == "timeout") c.timeout = v.get<double>();
    else if (k == "work_limit") c.work_limit = v.get<std::uint64_t>();
    else if (k == "minimize") c.minimize = v.get<bool>();
    else throw std::invalid_argument("unknown solver config key '" + k + "'");
  }
  c.validate();
  return c;
}

SolverConfig sample_config(Rng& rng, const SolverConfig& base) {
  SolverConfig c = base;
  c.var_decay = rng.open_interval(0.0, 1.0);
  c.cla_decay = rng.open_interval(0.0, 1.0);
  c.rnd_freq = rng.uniform01();
  c.rnd_init = rng.bernoulli(0.5);
  c.rfirst = rng.between(1, 10000);
  c.rinc = rng.open_interval(1.5, 4.0);
  c.gc_frac = rng.open_interval(0.0, 1.0);
  c.min_learnts = rng.between(0, 1000000);
  return c;
}

TuneResult tune_random(const std::function<double(const SolverConfig&)>& objective, int budget, std::uint64_t seed,
                       const SolverConfig& base) {
  if (budget < 1) throw std::invalid_argument("tune: budget must be >= 1");
  Rng rng(seed);
  TuneResult res;
  for (int i = 0; i < budget; ++i) {
    const SolverConfig c = sample_config(rng, base);
    const double score = objective(c);
    res.samples.push_back(c);
    res.scores.push_back(score);
    if (i == 0 || score < res.best_score) {
      res.best = c;
      res.best_score = score;
    }
  }
  return res;
}

} // namespace modsat
