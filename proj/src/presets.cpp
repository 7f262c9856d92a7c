#include <algorithm>
#include <cmath>

#include "modsat/hooks.hpp"

namespace modsat::presets {

namespace {

// C++ double-to-int conversion, refusing values that do not fit.
std::int64_t to_int(double x, HookSlot slot) {
  const double t = std::trunc(x);
  if (!std::isfinite(t) || t < -9.223372036854775808e18 || t >= 9.223372036854775808e18)
    throw HookFault(slot, "domain: real value does not fit an int");
  return static_cast<std::int64_t>(t);
}

double as_real(std::int64_t x) { return static_cast<double>(x); }

} // namespace

bool rephase_condition_baseline(SolverView& s) { return s.rephases() >= s.rephase_limit(); }

bool rephase_condition_progress_adaptive(SolverView& s) {
  constexpr std::int64_t base_rephase_limit = 1024;
  constexpr double progress_factor = 0.02;
  if (s.conflict_r() < s.rephase_limit()) return false;
  const std::int64_t progress =
      to_int(as_real(s.trail_size()) - s.last_rephase_progress(), HookSlot::RephaseCondition);
  const std::int64_t progress_threshold =
      std::max<std::int64_t>(50, to_int(as_real(s.num_vars()) * progress_factor, HookSlot::RephaseCondition));
  if (progress < progress_threshold)
    s.set_rephase_limit(std::max(base_rephase_limit, s.rephase_limit() * 2 / 3));
  else
    s.set_rephase_limit(std::min(base_rephase_limit * 16, s.rephase_limit() * 3 / 2));
  return true;
}

void rephase_function_baseline(SolverView& s) {
  const auto n = static_cast<Var>(s.num_vars());
  s.set_conflict_r(0);
  s.set_rephases(0);
  s.set_threshold(to_int(as_real(s.threshold()) * 0.9, HookSlot::RephaseFunction));
  s.set_rephase_limit(s.rephase_limit() + 8192);
  const std::int64_t phase_rand = to_int(s.rand01() * 100, HookSlot::RephaseFunction);
  if (phase_rand < 40) {
    for (Var i = 0; i < n; ++i) s.set_polarity(i, s.local_best(i));
  } else if (phase_rand < 65) {
    for (Var i = 0; i < n; ++i) s.set_polarity(i, !s.local_best(i));
  } else if (phase_rand < 80) {
    for (Var i = 0; i < n; ++i) s.set_polarity(i, !s.polarity(i));
  } else {
    for (Var i = 0; i < n; ++i) s.set_polarity(i, s.saved(i));
  }
}

void rephase_function_weighted_policies(SolverView& s) {
  const auto n = static_cast<Var>(s.num_vars());
  if (s.rephases() > 0 && as_real(s.conflict_r()) > s.last_rephase_progress()) {
    s.set_rephase_limit(to_int(as_real(s.rephase_limit()) * 1.5, HookSlot::RephaseFunction));
  } else {
    s.set_rephase_limit(to_int(as_real(s.rephase_limit()) * 0.9, HookSlot::RephaseFunction));
    if (s.rephase_limit() < 512) s.set_rephase_limit(512);
  }
  s.set_last_rephase_progress(as_real(s.conflict_r()));
  s.set_rephase_count(s.rephase_count() + 1);

  const double rand_val = s.rand01();
  if (rand_val < 0.4) {
    for (Var v = 0; v < n; ++v) s.set_polarity(v, s.local_best(v));
  } else if (rand_val < 0.7) {
    for (Var v = 0; v < n; ++v) s.set_polarity(v, !s.polarity(v));
  } else if (rand_val < 0.9) {
    const double activity_threshold = 0.2 * s.var_inc();
    for (Var v = 0; v < n; ++v)
      if (s.activity(v) < activity_threshold) s.set_polarity(v, s.rand01() < 0.5);
  } else {
    for (Var v = 0; v < n; ++v)
      if (s.user_pol(v) != kUserPolUndef) s.set_polarity(v, s.user_pol(v) == kUserPolTrue);
  }
  s.set_threshold(to_int(as_real(s.trail_size()) * 0.8, HookSlot::RephaseFunction));
  s.cancel_until(0);
}

bool reduce_condition_baseline(SolverView& s) { return as_real(s.learnts_size()) >= s.max_learnts(); }

bool reduce_condition_memory_aware(SolverView& s) {
  const double learnts = as_real(s.learnts_size());
  if (learnts >= s.max_learnts()) return true;
  if (as_real(s.wasted_bytes()) > as_real(s.arena_bytes()) * s.garbage_frac() * 0.8) return true;
  if (s.learnts_size() > 0 && s.learnts_size() > 2 * s.num_clauses()) return true;
  if (s.conflict_r() > 1000 && learnts > s.max_learnts() * 0.8) return true;
  return false;
}

bool restart_condition_baseline(SolverView& s) {
  if (s.conflicts() <= 0) return false;
  return s.lbd_queue_size() == 50 &&
         0.8 * s.fast_lbd_sum() / as_real(s.lbd_queue_size()) > s.slow_lbd_sum() / as_real(s.conflicts());
}

bool restart_condition_lbd_adaptive(SolverView& s) {
  if (s.conflicts() <= 0) return false;
  double restart_threshold;
  if (s.lbd_queue_size() > 0) {
    const double avg_lbd = s.fast_lbd_sum() / as_real(s.lbd_queue_size());
    const double conflict_rate = as_real(s.conflict_r()) / as_real(s.conflicts());
    restart_threshold = as_real(s.restart_first()) * (0.8 + 0.4 * avg_lbd) * (1.0 + 0.5 * conflict_rate);
    if (s.progress_estimate() - s.last_rephase_progress() < 0.01) restart_threshold *= 0.7;
  } else {
    restart_threshold = as_real(s.restart_first());
  }
  if (as_real(s.conflict_r()) >= restart_threshold) {
    s.set_conflict_r(0);
    return true;
  }
  return false;
}

void restart_function_baseline(SolverView& s) {
  s.clear_lbd_queue();
  s.cancel_until(0);
}

void restart_function_lbd_moving_average(SolverView& s) {
  if (s.lbd_queue_size() > 0) {
    const double curr_fast = s.fast_lbd_sum() / as_real(s.lbd_queue_size());
    s.set_fast_avg(0.9 * s.fast_avg() + 0.1 * curr_fast);
    s.set_slow_avg(0.99 * s.slow_avg() + 0.01 * curr_fast);
  }
  std::int64_t restart_level = 0;
  if (s.fast_avg() > 0 && s.slow_avg() > 0) {
    const double ratio = s.fast_avg() / s.slow_avg();
    if (ratio > 1.2) restart_level = 0;
    else if (ratio > 1.0) restart_level = std::max<std::int64_t>(0, s.decision_level() / 2);
    else restart_level = std::max<std::int64_t>(0, s.decision_level() - 1);
  }
  s.clear_lbd_queue();
  s.cancel_until(restart_level);
  const std::int64_t count = s.restart_count();
  s.set_restart_count(count + 1);
  if (count % 16 == 15) s.reduce_db();
  s.rebuild_order_heap();
}

void var_bump_activity_baseline(SolverView& s, Var v, double inc) {
  s.set_activity(v, s.activity(v) + inc);
  if (s.activity(v) > 1e50) {
    const auto n = static_cast<Var>(s.num_vars());
    for (Var i = 0; i < n; ++i) s.set_activity(i, s.activity(i) * 1e-50);
    s.set_var_inc(s.var_inc() * 1e-50);
  }
}

void var_bump_activity_level_scaled(SolverView& s, Var v, double inc) {
  const double scaled_inc = inc * (1.0 + 0.1 * as_real(s.decision_level()));
  s.set_activity(v, s.activity(v) + scaled_inc);
  if (s.activity(v) > 1e100) {
    const double scale_factor = 1e-100;
    const auto n = static_cast<Var>(s.num_vars());
    for (Var i = 0; i < n; ++i) {
      double a = s.activity(i) * scale_factor;
      if (a < 1e-100) a = 1e-100;
      s.set_activity(i, a);
    }
    s.set_var_inc(s.var_inc() * scale_factor);
  }
  if (s.in_heap(v)) {
    if (s.activity(v) > s.activity(s.heap_top())) s.heap_update(v);
  } else if (s.decision_var(v) && !s.assigned(v)) {
    s.heap_insert(v);
  }
}

void cla_bump_activity_baseline(SolverView& s, std::int64_t c) {
  s.set_cla_activity(c, s.cla_activity(c) + s.cla_inc());
  if (s.cla_activity(c) > 1e20) {
    for (std::int64_t i = 0; i < s.learnts_size(); ++i) s.set_cla_activity(i, s.cla_activity(i) * 1e-20);
    s.set_cla_inc(s.cla_inc() * 1e-20);
  }
}

void cla_bump_activity_floored_decay(SolverView& s, std::int64_t c) {
  s.set_cla_activity(c, s.cla_activity(c) + s.cla_inc());
  if (s.cla_activity(c) > 1e20) {
    const double scale_factor = 1e-20;
    const double min_activity = 1e-20;
    for (std::int64_t i = 0; i < s.learnts_size(); ++i) {
      double a = s.cla_activity(i) * scale_factor;
      if (a < min_activity) a = min_activity;
      s.set_cla_activity(i, a);
    }
    s.set_cla_inc(s.cla_inc() * scale_factor);
    if (s.cla_inc() < min_activity) s.set_cla_inc(min_activity);
  }
  if (s.conflicts() > 1000 && s.lbd_queue_size() > 50) {
    const double conflict_scale = 1.0 - 0.01 * (as_real(s.lbd_queue_size()) / 50.0);
    s.set_cla_inc(s.cla_inc() * (conflict_scale > 0.8 ? conflict_scale : 0.8));
  }
}

} // namespace modsat::presets
