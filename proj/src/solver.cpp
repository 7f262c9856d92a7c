#include "modsat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace modsat {

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("solver config: " + what); };
  if (!(var_decay > 0.0 && var_decay < 1.0)) fail("var_decay must lie in (0,1)");
  if (!(cla_decay > 0.0 && cla_decay < 1.0)) fail("cla_decay must lie in (0,1)");
  if (!(rnd_freq >= 0.0 && rnd_freq <= 1.0)) fail("rnd_freq must lie in [0,1]");
  if (rfirst < 1 || rfirst > 10000) fail("rfirst must lie in [1,10000]");
  if (!(rinc > 1.5 && rinc < 4.0)) fail("rinc must lie in (1.5,4)");
  if (!(gc_frac > 0.0 && gc_frac < 1.0)) fail("gc_frac must lie in (0,1)");
  if (min_learnts < 0 || min_learnts > 1000000) fail("min_learnts must lie in [0,1e6]");
  if (!(timeout >= 0.0) || !std::isfinite(timeout)) fail("timeout must be a finite non-negative number");
}

std::string_view status_name(Status s) {
  switch (s) {
  case Status::Sat: return "SAT";
  case Status::Unsat: return "UNSAT";
  case Status::Unknown: return "UNKNOWN";
  }
  return "?";
}

Solver::Solver(const Formula& f, HookTable hooks, SolverConfig cfg)
    : formula_(f), hooks_(std::move(hooks)), cfg_(cfg), rng_(cfg.seed) {
  cfg_.validate();
  if (!hooks_.complete()) throw std::invalid_argument("heuristic suite is incomplete");
  if (f.num_vars < 0) throw std::invalid_argument("negative variable count");

  num_vars_ = f.num_vars;
  const auto n = static_cast<std::size_t>(num_vars_);
  assigns_.assign(n, LBool::Undef);
  vardata_.assign(n, VarData{});
  activity_.assign(n, 0.0);
  polarity_.assign(n, 0);
  local_best_.assign(n, 0);
  saved_.assign(n, 0);
  decision_.assign(n, 1);
  user_pol_.assign(n, static_cast<std::int64_t>(LBool::Undef));
  seen_.assign(n, 0);
  level_stamp_.assign(n + 1, 0);
  watches_.resize(2 * n);
  if (cfg_.rnd_init)
    for (auto& a : activity_) a = rng_.uniform01() * 1e-5;

  for (const Clause& orig : f.clauses) {
    Clause c = orig;
    for (Lit l : c)
      if (l.var() < 0 || l.var() >= num_vars_)
        throw std::invalid_argument("literal " + std::to_string(l.to_dimacs()) + " exceeds variable count");
    if (!normalize_clause(c)) continue;
    ++num_original_;
    if (!ok_) continue;
    if (c.empty()) {
      ok_ = false;
    } else if (c.size() == 1) {
      if (!enqueue(c[0])) ok_ = false;
    } else {
      attach(store_clause(std::move(c), false));
    }
  }

  max_learnts_ = std::max(static_cast<double>(num_original_) / 3.0, static_cast<double>(cfg_.min_learnts));
  heap_.grow(num_vars_);
  rebuild_order_heap();
}

int Solver::store_clause(Clause lits, bool learnt) {
  ClauseRec rec;
  rec.lits = std::move(lits);
  rec.learnt = learnt;
  arena_bytes_ += clause_bytes(rec.lits);
  clauses_.push_back(std::move(rec));
  return static_cast<int>(clauses_.size()) - 1;
}

void Solver::attach(int cref) {
  const Clause& c = clauses_[cref].lits;
  watches_[(~c[0]).code()].push_back({cref, c[1]});
  watches_[(~c[1]).code()].push_back({cref, c[0]});
}

bool Solver::locked(int cref) const {
  const Lit first = clauses_[cref].lits[0];
  return value(first) == LBool::True && reason(first.var()) == cref;
}

void Solver::remove_clause(int cref) {
  ClauseRec& c = clauses_[cref];
  c.deleted = true;
  wasted_bytes_ += clause_bytes(c.lits);
}

bool Solver::enqueue(Lit l, int from) {
  const LBool v = value(l);
  if (v == LBool::False) return false;
  if (v == LBool::True) return true;
  const Var x = l.var();
  assigns_[x] = to_lbool(!l.negated());
  vardata_[x] = {from, static_cast<int>(trail_lim_.size())};
  polarity_[x] = !l.negated();
  trail_.push_back(l);
  return true;
}

void Solver::new_decision(Lit l) {
  trail_lim_.push_back(static_cast<int>(trail_.size()));
  ++stats_.decisions;
  enqueue(l);
}

std::optional<int> Solver::propagate() {
  std::optional<int> conflict;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = ~p;
    auto& ws = watches_[p.code()];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    const std::size_t end = ws.size();
    while (i < end) {
      ++stats_.work;
      const Watcher w = ws[i];
      if (clauses_[w.cref].deleted) {
        ++i;
        continue;
      }
      if (value(w.blocker) == LBool::True) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.cref].lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      ++i;
      const Lit first = c[0];
      const Watcher nw{w.cref, first};
      if (first != w.blocker && value(first) == LBool::True) {
        ws[j++] = nw;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != LBool::False) {
          std::swap(c[1], c[k]);
          watches_[(~c[1]).code()].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = nw;
      if (value(first) == LBool::False) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < end) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (conflict) break;
  }
  if (cfg_.debug_checks) {
    const std::string err = check_invariants();
    if (!err.empty()) throw std::logic_error("solver invariant violated: " + err);
  }
  return conflict;
}

void Solver::push_lbd(int lbd) {
  if (lbd_queue_size_ == kLbdQueueCapacity) fast_lbd_sum_ -= lbd_queue_[lbd_queue_pos_];
  else ++lbd_queue_size_;
  lbd_queue_[lbd_queue_pos_] = lbd;
  fast_lbd_sum_ += lbd;
  lbd_queue_pos_ = (lbd_queue_pos_ + 1) % kLbdQueueCapacity;
  slow_lbd_sum_ += std::min(lbd, 50);
}

bool Solver::redundant(Lit p, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  const std::size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    const Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const Clause& c = clauses_[reason(q.var())].lits;
    for (std::size_t i = 1; i < c.size(); ++i) {
      const Lit r = c[i];
      const Var v = r.var();
      ++stats_.work;
      if (seen_[v] || level(v) == 0) continue;
      if (reason(v) != -1 && (abstract_level(v) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(r);
        analyze_toclear_.push_back(r);
      } else {
        for (std::size_t k = top; k < analyze_toclear_.size(); ++k) seen_[analyze_toclear_[k].var()] = 0;
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

AnalyzeResult Solver::analyze(int confl) {
  if (trail_lim_.empty()) throw std::logic_error("analyze called at decision level 0");
  ++stats_.conflicts;
  ++conflict_r_;
  ++rephases_;

  const int current = static_cast<int>(trail_lim_.size());
  Clause out;
  out.push_back(Lit{});
  int path = 0;
  bool have_p = false;
  Lit p;
  int index = static_cast<int>(trail_.size()) - 1;

  do {
    const ClauseRec& rec = clauses_[confl];
    if (rec.learnt) {
      ++stats_.work;
      hooks_.cla_bump_activity(*this, rec.learnt_pos);
    }
    const Clause& c = clauses_[confl].lits;
    for (std::size_t j = have_p ? 1 : 0; j < c.size(); ++j) {
      const Lit q = c[j];
      const Var v = q.var();
      ++stats_.work;
      if (seen_[v] || level(v) == 0) continue;
      seen_[v] = 1;
      ++stats_.work;
      hooks_.var_bump_activity(*this, v, var_inc_);
      if (level(v) >= current) ++path;
      else out.push_back(q);
    }
    while (!seen_[trail_[index--].var()]) {
    }
    p = trail_[index + 1];
    have_p = true;
    confl = reason(p.var());
    seen_[p.var()] = 0;
    --path;
  } while (path > 0);
  out[0] = ~p;

  analyze_toclear_.assign(out.begin(), out.end());
  if (cfg_.minimize) {
    std::uint32_t levels = 0;
    for (std::size_t i = 1; i < out.size(); ++i) levels |= abstract_level(out[i].var());
    std::size_t j = 1;
    for (std::size_t i = 1; i < out.size(); ++i)
      if (reason(out[i].var()) == -1 || !redundant(out[i], levels)) out[j++] = out[i];
    out.resize(j);
  }
  for (Lit l : analyze_toclear_) seen_[l.var()] = 0;

  AnalyzeResult res;
  if (out.size() > 1) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < out.size(); ++i)
      if (level(out[i].var()) > level(out[best].var())) best = i;
    std::swap(out[1], out[best]);
    res.backtrack_level = level(out[1].var());
  }
  ++stamp_;
  int lbd = 0;
  for (Lit l : out) {
    const int lv = level(l.var());
    if (level_stamp_[lv] != stamp_) {
      level_stamp_[lv] = stamp_;
      ++lbd;
    }
  }
  if (cfg_.debug_checks) {
    int at_current = 0;
    for (Lit l : out) {
      if (value(l) != LBool::False) throw std::logic_error("learnt clause not falsified under trail");
      if (level(l.var()) == current) ++at_current;
    }
    if (at_current != 1) throw std::logic_error("learnt clause is not first-UIP");
  }
  res.learnt = std::move(out);
  res.lbd = lbd;
  push_lbd(lbd);
  return res;
}

int Solver::add_learnt(const Clause& lits, int lbd) {
  if (lits.size() < 2) throw std::invalid_argument("learnt clause must have at least two literals");
  const int cref = store_clause(lits, true);
  ClauseRec& rec = clauses_[cref];
  rec.lbd = lbd;
  rec.learnt_pos = static_cast<std::int64_t>(learnts_.size());
  learnts_.push_back(cref);
  attach(cref);
  return cref;
}

void Solver::cancel_until(std::int64_t lvl) {
  if (lvl < 0) throw std::invalid_argument("cancel_until to a negative level");
  if (lvl >= decision_level()) return;
  const auto keep = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(lvl)]);
  for (std::size_t c = trail_.size(); c-- > keep;) {
    const Var v = trail_[c].var();
    assigns_[v] = LBool::Undef;
    vardata_[v].reason = -1;
    saved_[v] = polarity_[v];
    if (decision_[v]) heap_.insert(v);
  }
  qhead_ = keep;
  trail_.resize(keep);
  trail_lim_.resize(static_cast<std::size_t>(lvl));
}

std::optional<Lit> Solver::pick_branch_lit() {
  Var next = -1;
  if (cfg_.rnd_freq > 0.0 && rng_.uniform01() < cfg_.rnd_freq) {
    rnd_pool_.clear();
    for (Var v = 0; v < num_vars_; ++v)
      if (decision_[v] && assigns_[v] == LBool::Undef) rnd_pool_.push_back(v);
    if (!rnd_pool_.empty()) next = rnd_pool_[rng_.below(rnd_pool_.size())];
  }
  while (next == -1 || assigns_[next] != LBool::Undef || !decision_[next]) {
    if (heap_.empty()) return std::nullopt;
    next = heap_.remove_max();
  }
  return Lit(next, !polarity_[next]);
}

void Solver::reduce_db() {
  ++stats_.reductions;
  std::vector<int> order = learnts_;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return clauses_[a].activity < clauses_[b].activity; });
  const std::size_t half = order.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const int cref = order[i];
    if (clauses_[cref].lits.size() > 2 && !locked(cref)) remove_clause(cref);
  }
  std::size_t j = 0;
  for (int cref : learnts_) {
    if (clauses_[cref].deleted) continue;
    clauses_[cref].learnt_pos = static_cast<std::int64_t>(j);
    learnts_[j++] = cref;
  }
  learnts_.resize(j);
  if (static_cast<double>(wasted_bytes_) > static_cast<double>(arena_bytes_) * cfg_.gc_frac) garbage_collect();
}

void Solver::garbage_collect() {
  ++stats_.garbage_collections;
  std::vector<int> remap(clauses_.size(), -1);
  std::vector<ClauseRec> kept;
  kept.reserve(clauses_.size());
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (clauses_[i].deleted) continue;
    remap[i] = static_cast<int>(kept.size());
    kept.push_back(std::move(clauses_[i]));
  }
  clauses_ = std::move(kept);
  for (Lit l : trail_) {
    int& r = vardata_[l.var()].reason;
    if (r != -1) r = remap[r];
  }
  for (int& cref : learnts_) cref = remap[cref];
  for (auto& w : watches_) w.clear();
  for (std::size_t i = 0; i < clauses_.size(); ++i) attach(static_cast<int>(i));
  arena_bytes_ -= wasted_bytes_;
  wasted_bytes_ = 0;
}

void Solver::rebuild_order_heap() {
  std::vector<Var> vars;
  for (Var v = 0; v < num_vars_; ++v)
    if (decision_[v] && assigns_[v] == LBool::Undef) vars.push_back(v);
  heap_.build(vars);
}

void Solver::clear_lbd_queue() {
  fast_lbd_sum_ = 0.0;
  lbd_queue_size_ = 0;
  lbd_queue_pos_ = 0;
}

double Solver::progress_estimate() const {
  if (num_vars_ == 0) return 1.0;
  const double f = 1.0 / num_vars_;
  double progress = 0.0;
  const std::size_t levels = trail_lim_.size();
  for (std::size_t i = 0; i <= levels; ++i) {
    const std::size_t beg = i == 0 ? 0 : static_cast<std::size_t>(trail_lim_[i - 1]);
    const std::size_t end = i == levels ? trail_.size() : static_cast<std::size_t>(trail_lim_[i]);
    progress += std::pow(f, static_cast<double>(i)) * static_cast<double>(end - beg);
  }
  return progress / num_vars_;
}

void Solver::update_local_best() {
  if (trail_size() <= threshold_) return;
  threshold_ = trail_size();
  for (Var v = 0; v < num_vars_; ++v)
    local_best_[v] = assigns_[v] == LBool::Undef ? saved_[v] : assigns_[v] == LBool::True;
}

bool Solver::out_of_budget(std::chrono::steady_clock::time_point deadline, std::uint64_t iteration) const {
  if (cfg_.work_limit != 0 && stats_.work >= cfg_.work_limit) return true;
  if (cfg_.timeout > 0.0 && iteration % 1024 == 0 && std::chrono::steady_clock::now() >= deadline) return true;
  return false;
}

Assignment Solver::extract_model() const {
  Assignment a(num_vars_);
  for (Var v = 0; v < num_vars_; ++v)
    if (assigns_[v] != LBool::Undef) a.set(v, assigns_[v] == LBool::True);
  return a;
}

SolveResult Solver::solve() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto deadline = start + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(cfg_.timeout));
  SolveResult res;
  auto finish = [&](Status s) {
    res.status = s;
    res.stats = stats_;
    res.wall_time = std::chrono::duration<double>(clock::now() - start).count();
    return res;
  };
  if (!ok_) return finish(Status::Unsat);

  for (std::uint64_t iteration = 1;; ++iteration) {
    if (out_of_budget(deadline, iteration)) {
      cancel_until(0);
      return finish(Status::Unknown);
    }
    const auto confl = propagate();
    if (confl) {
      if (trail_lim_.empty()) {
        ++stats_.conflicts;
        ok_ = false;
        return finish(Status::Unsat);
      }
      AnalyzeResult a = analyze(*confl);
      if (on_learnt) on_learnt(a.learnt);
      cancel_until(a.backtrack_level);
      if (a.learnt.size() == 1) {
        enqueue(a.learnt[0]);
      } else {
        const int cref = add_learnt(a.learnt, a.lbd);
        ++stats_.work;
        hooks_.cla_bump_activity(*this, clauses_[cref].learnt_pos);
        enqueue(a.learnt[0], cref);
      }
      ++stats_.learnts_added;
      var_inc_ /= cfg_.var_decay;
      cla_inc_ /= cfg_.cla_decay;

      stats_.work += 3;
      if (hooks_.restart_condition(*this)) {
        ++stats_.work;
        hooks_.restart_function(*this);
        ++stats_.restarts;
      }
      if (hooks_.rephase_condition(*this)) {
        ++stats_.work;
        hooks_.rephase_function(*this);
        ++stats_.rephase_calls;
      }
      if (hooks_.reduce_condition(*this)) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
    } else {
      update_local_best();
      const auto next = pick_branch_lit();
      if (!next) {
        Assignment model = extract_model();
        if (evaluate(formula_, model) != Evaluation::Satisfied)
          throw std::logic_error("solver produced a model that does not satisfy the formula");
        res.model = std::move(model);
        return finish(Status::Sat);
      }
      new_decision(*next);
    }
  }
}

std::string Solver::check_invariants() const {
  const std::size_t n = static_cast<std::size_t>(num_vars_);
  std::vector<int> pos(n, -1);
  std::size_t assigned = 0;
  for (Var v = 0; v < num_vars_; ++v)
    if (assigns_[v] != LBool::Undef) ++assigned;
  if (assigned != trail_.size()) return "assigned variable count differs from trail size";
  for (std::size_t i = 0; i < trail_.size(); ++i) {
    const Lit l = trail_[i];
    if (value(l) != LBool::True) return "trail literal " + std::to_string(l.to_dimacs()) + " is not true";
    if (pos[l.var()] != -1) return "variable on trail twice";
    pos[l.var()] = static_cast<int>(i);
  }
  for (std::size_t k = 0; k < trail_lim_.size(); ++k) {
    const auto at = static_cast<std::size_t>(trail_lim_[k]);
    if (k > 0 && trail_lim_[k] < trail_lim_[k - 1]) return "decision boundaries out of order";
    if (at < trail_.size() && reason(trail_[at].var()) != -1) return "decision literal carries a reason";
  }
  for (std::size_t i = 0; i < trail_.size(); ++i) {
    const Lit l = trail_[i];
    const int r = reason(l.var());
    if (r == -1) continue;
    if (r < 0 || static_cast<std::size_t>(r) >= clauses_.size() || clauses_[r].deleted) return "reason clause missing";
    const Clause& c = clauses_[r].lits;
    if (c[0] != l) return "reason clause does not imply its literal";
    for (std::size_t k = 1; k < c.size(); ++k) {
      if (value(c[k]) != LBool::False) return "reason clause has a non-false antecedent";
      if (pos[c[k].var()] >= static_cast<int>(i)) return "reason antecedent assigned after the implied literal";
    }
  }
  if (!heap_.valid()) return "order heap property broken";
  for (Var v = 0; v < num_vars_; ++v)
    if (decision_[v] && assigns_[v] == LBool::Undef && !heap_.in_heap(v)) return "unassigned decision variable missing from heap";
  for (Var v = 0; v < num_vars_; ++v)
    if (!(activity_[v] >= 0.0)) return "negative variable activity";
  if (lbd_queue_size_ < 0 || lbd_queue_size_ > kLbdQueueCapacity) return "lbd queue size out of range";
  double sum = 0.0;
  for (std::int64_t k = 0; k < lbd_queue_size_; ++k)
    sum += lbd_queue_[static_cast<std::size_t>((lbd_queue_pos_ - 1 - k + kLbdQueueCapacity) % kLbdQueueCapacity)];
  if (sum != fast_lbd_sum_) return "fast_lbd_sum differs from queue contents";
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (clauses_[i].deleted) continue;
    const Clause& c = clauses_[i].lits;
    for (int w = 0; w < 2; ++w) {
      const auto& ws = watches_[(~c[w]).code()];
      if (std::none_of(ws.begin(), ws.end(), [&](const Watcher& x) { return x.cref == static_cast<int>(i); }))
        return "clause " + std::to_string(i) + " is not watched on its first two literals";
    }
  }
  return {};
}

} // namespace modsat
