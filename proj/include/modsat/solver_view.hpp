#pragma once

#include <cstdint>

#include "modsat/cnf.hpp"

namespace modsat {

// Codes stored in user_pol, matching the lbool encoding heuristics see.
inline constexpr std::int64_t kUserPolFalse = 0;
inline constexpr std::int64_t kUserPolTrue = 1;
inline constexpr std::int64_t kUserPolUndef = 2;

// The only handle a heuristic receives. Every read reflects live solver
// state and every write lands before the hook returns. Per-variable indices
// are 0-based; learnt indices address positions in the learnt-clause list.
class SolverView {
public:
  virtual ~SolverView() = default;

  // --- counters and statistics (read-only) ---
  virtual std::int64_t conflicts() const = 0;
  virtual std::int64_t decisions() const = 0;
  virtual std::int64_t propagations() const = 0;
  virtual std::int64_t restarts() const = 0;
  virtual std::int64_t lbd_queue_size() const = 0;
  virtual double fast_lbd_sum() const = 0;
  virtual double slow_lbd_sum() const = 0;
  virtual std::int64_t trail_size() const = 0;
  virtual std::int64_t decision_level() const = 0;
  virtual std::int64_t num_vars() const = 0;
  virtual std::int64_t num_clauses() const = 0;
  virtual std::int64_t learnts_size() const = 0;
  virtual double max_learnts() const = 0;
  virtual double garbage_frac() const = 0;
  virtual std::int64_t wasted_bytes() const = 0;
  virtual std::int64_t arena_bytes() const = 0;
  virtual std::int64_t restart_first() const = 0;
  virtual double restart_inc() const = 0;
  virtual double var_decay() const = 0;
  virtual double cla_decay() const = 0;

  // --- heuristic state (read/write, subject to slot capabilities) ---
  virtual std::int64_t conflict_r() const = 0;
  virtual void set_conflict_r(std::int64_t x) = 0;
  virtual std::int64_t rephases() const = 0;
  virtual void set_rephases(std::int64_t x) = 0;
  virtual std::int64_t rephase_count() const = 0;
  virtual void set_rephase_count(std::int64_t x) = 0;
  virtual std::int64_t rephase_limit() const = 0;
  virtual void set_rephase_limit(std::int64_t x) = 0;
  virtual std::int64_t threshold() const = 0;
  virtual void set_threshold(std::int64_t x) = 0;
  virtual double last_rephase_progress() const = 0;
  virtual void set_last_rephase_progress(double x) = 0;
  virtual double last_restart_progress() const = 0;
  virtual void set_last_restart_progress(double x) = 0;
  virtual double fast_avg() const = 0;
  virtual void set_fast_avg(double x) = 0;
  virtual double slow_avg() const = 0;
  virtual void set_slow_avg(double x) = 0;
  virtual std::int64_t restart_count() const = 0;
  virtual void set_restart_count(std::int64_t x) = 0;
  virtual double var_inc() const = 0;
  virtual void set_var_inc(double x) = 0;
  virtual double cla_inc() const = 0;
  virtual void set_cla_inc(double x) = 0;

  // --- per-variable arrays ---
  virtual double activity(Var v) const = 0;
  virtual void set_activity(Var v, double x) = 0;
  virtual bool polarity(Var v) const = 0;
  virtual void set_polarity(Var v, bool b) = 0;
  virtual bool local_best(Var v) const = 0;
  virtual void set_local_best(Var v, bool b) = 0;
  virtual bool saved(Var v) const = 0;
  virtual void set_saved(Var v, bool b) = 0;
  virtual std::int64_t user_pol(Var v) const = 0;
  virtual void set_user_pol(Var v, std::int64_t code) = 0;
  virtual bool assigned(Var v) const = 0;
  virtual bool decision_var(Var v) const = 0;

  // --- per-learnt arrays ---
  virtual double cla_activity(std::int64_t learnt) const = 0;
  virtual void set_cla_activity(std::int64_t learnt, double x) = 0;
  virtual std::int64_t learnt_lbd(std::int64_t learnt) const = 0;

  // --- order heap ---
  virtual bool in_heap(Var v) const = 0;
  // Variable at the top of the order heap; -1 when empty.
  virtual Var heap_top() const = 0;
  virtual void heap_update(Var v) = 0;
  virtual void heap_insert(Var v) = 0;

  // --- effects ---
  virtual void cancel_until(std::int64_t level) = 0;
  virtual void reduce_db() = 0;
  virtual void rebuild_order_heap() = 0;
  // Zeroes fast_lbd_sum, lbd_queue_size and the queue cursor together.
  virtual void clear_lbd_queue() = 0;
  virtual double progress_estimate() const = 0;
  virtual double rand01() = 0;

  // Interpreted hooks report the steps they executed; the solver folds these
  // into its deterministic work counter.
  virtual void account_steps(std::uint64_t /*steps*/) {}
};

} // namespace modsat
