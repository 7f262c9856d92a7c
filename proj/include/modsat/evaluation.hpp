#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "modsat/cnf.hpp"
#include "modsat/hooks.hpp"
#include "modsat/solver.hpp"

namespace modsat {

// --- scoring ---

struct RunRecord {
  std::string instance;
  Status status = Status::Unknown;
  double time = 0.0; // seconds under the active time model
  Stats stats;
  std::string suite;
  std::uint64_t seed = 0;
  std::string fault; // HookFault detail when a heuristic failed

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

struct Par2Report {
  double timeout = 0.0;
  std::vector<std::string> instances;
  std::vector<double> penalized; // tau_i, aligned with instances
  double par2 = 0.0;
  std::size_t solved = 0;

  nlohmann::json to_json() const;
};

// A run counts as solved when it returned SAT/UNSAT within the timeout.
bool solved_within(const RunRecord& r, double timeout);
double penalized_time(const RunRecord& r, double timeout);
Par2Report par2(std::span<const RunRecord> records, double timeout);

// (a - b) / max(a, b): positive when b is faster than a.
double speedup(double a, double b);

// --- datasets ---

struct DatasetManifest {
  static constexpr std::string_view kSchema = "modsat.dataset/1";

  std::string name;
  std::vector<std::string> instances; // paths, relative ones resolved against base_dir
  double timeout = 0.0;               // training timeout in seconds
  std::vector<int> candidates;        // hook numbers 1..7
  std::string base_dir;

  void validate() const;
  std::string resolve(const std::string& path) const;
  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j, std::string base_dir = {});
  static DatasetManifest load(const std::string& path);
  void save(const std::string& path) const;
};

struct Instance {
  std::string id;
  Formula formula;
};

std::vector<Instance> load_instances(const DatasetManifest& m);

// --- generators ---

Formula random_ksat(int n, int m, int k, std::uint64_t seed);
Formula random_3sat(int n, int m, std::uint64_t seed);
// p pigeons into h holes; UNSAT iff p > h.
Formula pigeonhole(int p, int h);
// XOR chain x1 ^ ... ^ xw = parity, Tseitin-encoded with w-1 auxiliaries;
// `consistent` false adds a contradicting copy of the constraint.
Formula parity_chain(int width, bool consistent, std::uint64_t seed);

struct GenParams {
  std::string family = "random-3sat"; // random-3sat | pigeonhole | parity-chain
  int count = 1;
  int n = 20;
  int m = 0;           // clauses; 0 derives m from ratio
  double ratio = 4.26;
  int holes = 4;       // pigeonhole: p = holes + extra_pigeons
  int extra_pigeons = 1;
  int width = 8;
  bool consistent = true;
  std::uint64_t seed = 0;
  double timeout = 10.0;
  std::string name;
};

// Writes `count` instances plus manifest.json into `dir`.
DatasetManifest generate_instances(const GenParams& p, const std::string& dir);

// --- running ---

enum class TimeModel { Wall, Work };

std::string_view time_model_name(TimeModel m);
TimeModel time_model_from_name(std::string_view name);

struct EvalOptions {
  double timeout = 10.0;
  int jobs = 1;
  TimeModel time_model = TimeModel::Wall;
  double work_rate = 2e7; // work ticks per simulated second under TimeModel::Work
  std::vector<std::uint64_t> seeds{0};
  bool subprocess = false; // fork per run with a hard kill at 1.1 * timeout
  SolverConfig solver;
};

RunRecord run_instance(const Instance& inst, const HeuristicSuite& suite, const SolverConfig& cfg, double timeout,
                       TimeModel model = TimeModel::Wall, double work_rate = 2e7);

// Runs one instance in a forked child; the parent kills it at 1.1 * timeout.
RunRecord run_instance_subprocess(const Instance& inst, const HeuristicSuite& suite, const SolverConfig& cfg,
                                  double timeout, TimeModel model = TimeModel::Wall, double work_rate = 2e7);

using Runner = std::function<RunRecord(const Instance&, const HeuristicSuite&, std::uint64_t seed)>;

struct EvalResult {
  std::vector<RunRecord> records; // sorted by (instance, seed)
  Par2Report report;              // over every record
  std::vector<double> per_seed_par2;
};

class Benchmark {
public:
  Benchmark(std::vector<Instance> instances, EvalOptions opts);

  // Replaces the solver with a custom runner (tests, stubs).
  void set_runner(Runner r) { runner_ = std::move(r); }

  EvalResult run(const HeuristicSuite& suite) const;
  EvalResult run(const HeuristicSuite& suite, std::span<const std::size_t> subset) const;

  const std::vector<Instance>& instances() const { return instances_; }
  const EvalOptions& options() const { return opts_; }

private:
  RunRecord run_one(const Instance& inst, const HeuristicSuite& suite, std::uint64_t seed) const;

  std::vector<Instance> instances_;
  EvalOptions opts_;
  Runner runner_;
};

// --- reports ---

struct ReportMeta {
  std::string dataset;
  std::string suite;
  TimeModel time_model = TimeModel::Wall;
};

nlohmann::json summary_json(const EvalResult& r, const ReportMeta& meta);
// Writes <prefix>.jsonl (one record per line) and <prefix>.summary.json.
void write_report(const EvalResult& r, const ReportMeta& meta, const std::string& prefix);
std::vector<RunRecord> read_records(const std::string& jsonl_path);
// Cactus data: k-th fastest solved time against k, tab separated.
std::string cactus_tsv(std::span<const RunRecord> records, double timeout);

// --- configuration tuning ---

nlohmann::json config_to_json(const SolverConfig& c);
// Keys absent from `j` keep their value from `base`; unknown keys throw.
SolverConfig config_from_json(const nlohmann::json& j, SolverConfig base = {});

struct TuneResult {
  SolverConfig best;
  double best_score = 0.0;
  std::vector<SolverConfig> samples;
  std::vector<double> scores;
};

SolverConfig sample_config(Rng& rng, const SolverConfig& base = {});
// Uniform random search over the configuration space; ties keep the earlier sample.
TuneResult tune_random(const std::function<double(const SolverConfig&)>& objective, int budget, std::uint64_t seed,
                       const SolverConfig& base = {});

} // namespace modsat
