#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "modsat/cnf.hpp"
#include "modsat/hook_table.hpp"
#include "modsat/order_heap.hpp"
#include "modsat/rng.hpp"
#include "modsat/solver_view.hpp"

namespace modsat {

struct SolverConfig {
  double var_decay = 0.95;
  double cla_decay = 0.999;
  double rnd_freq = 0.0;
  bool rnd_init = false;
  std::int64_t rfirst = 100;
  double rinc = 2.0;
  double gc_frac = 0.20;
  std::int64_t min_learnts = 0;
  std::uint64_t seed = 0;
  // Wall-clock limit in seconds; 0 disables it.
  double timeout = 0.0;
  // Deterministic work limit (see Stats::work); 0 disables it.
  std::uint64_t work_limit = 0;
  bool minimize = false;
  // Re-verify trail/reason/heap invariants after every propagation.
  bool debug_checks = false;

  // Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
};

enum class Status { Sat, Unsat, Unknown };

std::string_view status_name(Status s);

struct Stats {
  std::int64_t conflicts = 0;
  std::int64_t decisions = 0;
  std::int64_t propagations = 0;
  std::int64_t restarts = 0;
  std::int64_t rephase_calls = 0;
  std::int64_t reductions = 0;
  std::int64_t learnts_added = 0;
  std::int64_t garbage_collections = 0;
  // Watcher visits + analysed literals + hook calls + interpreted DSL steps.
  std::uint64_t work = 0;

  bool operator==(const Stats&) const = default;
};

struct SolveResult {
  Status status = Status::Unknown;
  Assignment model; // filled when status == Sat
  Stats stats;
  double wall_time = 0.0;
};

struct AnalyzeResult {
  Clause learnt; // learnt[0] is the asserting literal
  int backtrack_level = 0;
  int lbd = 0;
};

class Solver final : public SolverView {
public:
  static constexpr int kLbdQueueCapacity = 500;

  Solver(const Formula& f, HookTable hooks, SolverConfig cfg = {});

  SolveResult solve();

  // --- building blocks, public for tests ---
  // Returns the conflicting clause reference, if any.
  std::optional<int> propagate();
  AnalyzeResult analyze(int conflict);
  void backtrack(int level) { cancel_until(level); }
  // Returns nullopt when every decision variable is assigned.
  std::optional<Lit> pick_branch_lit();
  void new_decision(Lit l);
  bool enqueue(Lit l, int reason = -1);
  // Adds a learnt clause (size >= 2) and returns its reference.
  int add_learnt(const Clause& lits, int lbd);
  bool okay() const { return ok_; }

  LBool value(Lit l) const {
    const LBool b = assigns_[l.var()];
    return b == LBool::Undef ? b : to_lbool((b == LBool::True) != l.negated());
  }
  LBool value(Var v) const { return assigns_[v]; }
  int level(Var v) const { return vardata_[v].level; }
  int reason(Var v) const { return vardata_[v].reason; }
  const std::vector<Lit>& trail() const { return trail_; }
  const Clause& clause(int cref) const { return clauses_[cref].lits; }
  const std::vector<int>& learnt_refs() const { return learnts_; }
  const OrderHeap& order_heap() const { return heap_; }
  const Stats& stats() const { return stats_; }
  double clause_activity(int cref) const { return clauses_[cref].activity; }
  int clause_lbd(int cref) const { return clauses_[cref].lbd; }
  bool clause_deleted(int cref) const { return clauses_[cref].deleted; }
  std::size_t num_clause_refs() const { return clauses_.size(); }

  // Checks trail consistency, reason soundness, watch and heap invariants.
  // Returns an empty string when all hold, else a description of the first
  // violation.
  std::string check_invariants() const;

  // Observer for each learnt clause, including units.
  std::function<void(const Clause&)> on_learnt;

  // --- SolverView ---
  std::int64_t conflicts() const override { return stats_.conflicts; }
  std::int64_t decisions() const override { return stats_.decisions; }
  std::int64_t propagations() const override { return stats_.propagations; }
  std::int64_t restarts() const override { return stats_.restarts; }
  std::int64_t lbd_queue_size() const override { return lbd_queue_size_; }
  double fast_lbd_sum() const override { return fast_lbd_sum_; }
  double slow_lbd_sum() const override { return slow_lbd_sum_; }
  std::int64_t trail_size() const override { return static_cast<std::int64_t>(trail_.size()); }
  std::int64_t decision_level() const override { return static_cast<std::int64_t>(trail_lim_.size()); }
  std::int64_t num_vars() const override { return num_vars_; }
  std::int64_t num_clauses() const override { return num_original_; }
  std::int64_t learnts_size() const override { return static_cast<std::int64_t>(learnts_.size()); }
  double max_learnts() const override { return max_learnts_; }
  double garbage_frac() const override { return cfg_.gc_frac; }
  std::int64_t wasted_bytes() const override { return wasted_bytes_; }
  std::int64_t arena_bytes() const override { return arena_bytes_; }
  std::int64_t restart_first() const override { return cfg_.rfirst; }
  double restart_inc() const override { return cfg_.rinc; }
  double var_decay() const override { return cfg_.var_decay; }
  double cla_decay() const override { return cfg_.cla_decay; }

  std::int64_t conflict_r() const override { return conflict_r_; }
  void set_conflict_r(std::int64_t x) override { conflict_r_ = x; }
  std::int64_t rephases() const override { return rephases_; }
  void set_rephases(std::int64_t x) override { rephases_ = x; }
  std::int64_t rephase_count() const override { return rephase_count_; }
  void set_rephase_count(std::int64_t x) override { rephase_count_ = x; }
  std::int64_t rephase_limit() const override { return rephase_limit_; }
  void set_rephase_limit(std::int64_t x) override { rephase_limit_ = x; }
  std::int64_t threshold() const override { return threshold_; }
  void set_threshold(std::int64_t x) override { threshold_ = x; }
  double last_rephase_progress() const override { return last_rephase_progress_; }
  void set_last_rephase_progress(double x) override { last_rephase_progress_ = x; }
  double last_restart_progress() const override { return last_restart_progress_; }
  void set_last_restart_progress(double x) override { last_restart_progress_ = x; }
  double fast_avg() const override { return fast_avg_; }
  void set_fast_avg(double x) override { fast_avg_ = x; }
  double slow_avg() const override { return slow_avg_; }
  void set_slow_avg(double x) override { slow_avg_ = x; }
  std::int64_t restart_count() const override { return restart_count_; }
  void set_restart_count(std::int64_t x) override { restart_count_ = x; }
  double var_inc() const override { return var_inc_; }
  void set_var_inc(double x) override { var_inc_ = x; }
  double cla_inc() const override { return cla_inc_; }
  void set_cla_inc(double x) override { cla_inc_ = x; }

  double activity(Var v) const override { return activity_[v]; }
  void set_activity(Var v, double x) override {
    activity_[v] = x;
    heap_.update(v);
  }
  bool polarity(Var v) const override { return polarity_[v] != 0; }
  void set_polarity(Var v, bool b) override { polarity_[v] = b; }
  bool local_best(Var v) const override { return local_best_[v] != 0; }
  void set_local_best(Var v, bool b) override { local_best_[v] = b; }
  bool saved(Var v) const override { return saved_[v] != 0; }
  void set_saved(Var v, bool b) override { saved_[v] = b; }
  std::int64_t user_pol(Var v) const override { return user_pol_[v]; }
  void set_user_pol(Var v, std::int64_t code) override { user_pol_[v] = code; }
  bool assigned(Var v) const override { return assigns_[v] != LBool::Undef; }
  bool decision_var(Var v) const override { return decision_[v] != 0; }

  double cla_activity(std::int64_t i) const override { return clauses_[learnts_[i]].activity; }
  void set_cla_activity(std::int64_t i, double x) override { clauses_[learnts_[i]].activity = x; }
  std::int64_t learnt_lbd(std::int64_t i) const override { return clauses_[learnts_[i]].lbd; }

  bool in_heap(Var v) const override { return heap_.in_heap(v); }
  Var heap_top() const override { return heap_.top(); }
  void heap_update(Var v) override { heap_.update(v); }
  void heap_insert(Var v) override { heap_.insert(v); }

  void cancel_until(std::int64_t level) override;
  void reduce_db() override;
  void rebuild_order_heap() override;
  void clear_lbd_queue() override;
  double progress_estimate() const override;
  double rand01() override { return rng_.uniform01(); }
  void account_steps(std::uint64_t steps) override { stats_.work += steps; }

private:
  struct ClauseRec {
    Clause lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0.0;
    int lbd = 0;
    std::int64_t learnt_pos = -1;
  };
  struct Watcher {
    int cref;
    Lit blocker;
  };
  struct VarData {
    int reason = -1;
    int level = 0;
  };

  static std::int64_t clause_bytes(const Clause& c) { return 16 + 4 * static_cast<std::int64_t>(c.size()); }

  int store_clause(Clause lits, bool learnt);
  void attach(int cref);
  bool locked(int cref) const;
  void remove_clause(int cref);
  void garbage_collect();
  void push_lbd(int lbd);
  void update_local_best();
  bool redundant(Lit p, std::uint32_t abstract_levels);
  std::uint32_t abstract_level(Var v) const { return 1u << (static_cast<std::uint32_t>(level(v)) & 31u); }
  bool out_of_budget(std::chrono::steady_clock::time_point deadline, std::uint64_t iteration) const;
  Assignment extract_model() const;

  Formula formula_;
  HookTable hooks_;
  SolverConfig cfg_;
  Rng rng_;
  bool ok_ = true;

  int num_vars_ = 0;
  std::int64_t num_original_ = 0;
  std::vector<ClauseRec> clauses_;
  std::vector<int> learnts_;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<LBool> assigns_;
  std::vector<VarData> vardata_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  OrderHeap heap_{activity_};
  std::vector<char> polarity_, local_best_, saved_, decision_;
  std::vector<std::int64_t> user_pol_;
  std::vector<char> seen_;
  std::vector<Lit> analyze_stack_, analyze_toclear_;
  std::vector<int> level_stamp_;
  int stamp_ = 0;
  std::vector<Var> rnd_pool_;

  std::array<int, kLbdQueueCapacity> lbd_queue_{};
  std::int64_t lbd_queue_size_ = 0;
  std::int64_t lbd_queue_pos_ = 0;
  double fast_lbd_sum_ = 0.0;
  double slow_lbd_sum_ = 0.0;

  std::int64_t conflict_r_ = 0;
  std::int64_t rephases_ = 0;
  std::int64_t rephase_count_ = 0;
  std::int64_t rephase_limit_ = 1024;
  std::int64_t threshold_ = 0;
  double last_rephase_progress_ = 0.0;
  double last_restart_progress_ = 0.0;
  double fast_avg_ = 0.0;
  double slow_avg_ = 0.0;
  std::int64_t restart_count_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0.0;

  std::int64_t wasted_bytes_ = 0;
  std::int64_t arena_bytes_ = 0;

  Stats stats_;
};

} // namespace modsat
