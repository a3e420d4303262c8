#include "elfe/sat.hpp"

#include <algorithm>

namespace elfe {

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

int SatSolver::new_var() {
  int v = num_vars();
  assign_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(-1);
  activity_.push_back(0.0);
  seen_.push_back(0);
  phase_.push_back(kFalse);
  heap_pos_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v + 1;
}

int SatSolver::attach(std::vector<int> lits, bool learnt) {
  int index = static_cast<int>(clauses_.size());
  watches_[static_cast<std::size_t>(neg(lits[0]))].push_back(index);
  watches_[static_cast<std::size_t>(neg(lits[1]))].push_back(index);
  clauses_.push_back({std::move(lits), learnt});
  return index;
}

bool SatSolver::add_clause(std::vector<int> lits) {
  if (unsat_) return false;
  backtrack(0);
  std::vector<int> internal;
  for (int l : lits) internal.push_back(to_internal(l));
  std::sort(internal.begin(), internal.end());
  internal.erase(std::unique(internal.begin(), internal.end()), internal.end());
  std::vector<int> kept;
  for (std::size_t i = 0; i < internal.size(); ++i) {
    if (i + 1 < internal.size() && internal[i + 1] == neg(internal[i])) return true;  // tautology
    std::int8_t v = lit_value(internal[i]);
    if (v == kTrue) return true;
    if (v == kUndef) kept.push_back(internal[i]);
  }
  if (kept.empty()) {
    unsat_ = true;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) unsat_ = true;
    return !unsat_;
  }
  attach(std::move(kept), false);
  return true;
}

void SatSolver::enqueue(int ilit, int reason) {
  auto v = static_cast<std::size_t>(var_of(ilit));
  assign_[v] = (ilit & 1) ? kFalse : kTrue;
  level_[v] = static_cast<int>(trail_lim_.size());
  reason_[v] = reason;
  trail_.push_back(ilit);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];  // p became true; clauses watching ¬p may need work
    auto& ws = watches_[static_cast<std::size_t>(p)];
    std::size_t i = 0, j = 0;
    int conflict = -1;
    while (i < ws.size()) {
      int ci = ws[i++];
      auto& lits = clauses_[static_cast<std::size_t>(ci)].lits;
      const int false_lit = neg(p);
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      if (lit_value(lits[0]) == kTrue) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (lit_value(lits[k]) != kFalse) {
          std::swap(lits[1], lits[k]);
          watches_[static_cast<std::size_t>(neg(lits[1]))].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (lit_value(lits[0]) == kFalse) {
        conflict = ci;
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(lits[0], ci);
      }
    }
    ws.resize(j);
    if (conflict >= 0) return conflict;
  }
  return -1;
}

void SatSolver::analyze(int conflict, std::vector<int>& learnt, int& backtrack_level) {
  learnt.assign(1, 0);
  int pending = 0;
  int p = -1;
  std::size_t index = trail_.size();
  const int current = static_cast<int>(trail_lim_.size());
  int ci = conflict;
  do {
    const auto& lits = clauses_[static_cast<std::size_t>(ci)].lits;
    for (std::size_t k = (p == -1 ? 0 : 1); k < lits.size(); ++k) {
      int q = lits[k];
      auto v = static_cast<std::size_t>(var_of(q));
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump(var_of(q));
      if (level_[v] == current) {
        ++pending;
      } else {
        learnt.push_back(q);
      }
    }
    do {
      p = trail_[--index];
    } while (!seen_[static_cast<std::size_t>(var_of(p))]);
    ci = reason_[static_cast<std::size_t>(var_of(p))];
    seen_[static_cast<std::size_t>(var_of(p))] = 0;
    --pending;
    // The reason clause has p at position 0 once it propagated.
    if (ci >= 0) {
      auto& rl = clauses_[static_cast<std::size_t>(ci)].lits;
      if (rl[0] != p) std::swap(*std::find(rl.begin(), rl.end(), p), rl[0]);
    }
  } while (pending > 0);
  learnt[0] = neg(p);

  backtrack_level = 0;
  std::size_t max_i = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    int lv = level_[static_cast<std::size_t>(var_of(learnt[k]))];
    if (lv > backtrack_level) {
      backtrack_level = lv;
      max_i = k;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  for (int q : learnt) seen_[static_cast<std::size_t>(var_of(q))] = 0;
}

void SatSolver::backtrack(int level) {
  if (static_cast<int>(trail_lim_.size()) <= level) return;
  for (std::size_t k = trail_.size(); k > static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]);
       --k) {
    int ilit = trail_[k - 1];
    auto v = static_cast<std::size_t>(var_of(ilit));
    phase_[v] = assign_[v];
    assign_[v] = kUndef;
    reason_[v] = -1;
    if (heap_pos_[v] < 0) heap_insert(static_cast<int>(v));
  }
  trail_.resize(static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]));
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = trail_.size();
}

void SatSolver::bump(int var) {
  auto v = static_cast<std::size_t>(var);
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void SatSolver::heap_insert(int var) {
  heap_pos_[static_cast<std::size_t>(var)] = static_cast<int>(heap_.size());
  heap_.push_back(var);
  heap_up(heap_.size() - 1);
}

void SatSolver::heap_up(std::size_t pos) {
  int var = heap_[pos];
  while (pos > 0) {
    std::size_t parent = (pos - 1) / 2;
    if (activity_[static_cast<std::size_t>(heap_[parent])] >= activity_[static_cast<std::size_t>(var)]) break;
    heap_[pos] = heap_[parent];
    heap_pos_[static_cast<std::size_t>(heap_[pos])] = static_cast<int>(pos);
    pos = parent;
  }
  heap_[pos] = var;
  heap_pos_[static_cast<std::size_t>(var)] = static_cast<int>(pos);
}

void SatSolver::heap_down(std::size_t pos) {
  int var = heap_[pos];
  while (true) {
    std::size_t child = 2 * pos + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() &&
        activity_[static_cast<std::size_t>(heap_[child + 1])] > activity_[static_cast<std::size_t>(heap_[child])]) {
      ++child;
    }
    if (activity_[static_cast<std::size_t>(heap_[child])] <= activity_[static_cast<std::size_t>(var)]) break;
    heap_[pos] = heap_[child];
    heap_pos_[static_cast<std::size_t>(heap_[pos])] = static_cast<int>(pos);
    pos = child;
  }
  heap_[pos] = var;
  heap_pos_[static_cast<std::size_t>(var)] = static_cast<int>(pos);
}

int SatSolver::pick_branch() {
  while (!heap_.empty()) {
    int var = heap_.front();
    heap_.front() = heap_.back();
    heap_pos_[static_cast<std::size_t>(heap_.front())] = 0;
    heap_.pop_back();
    heap_pos_[static_cast<std::size_t>(var)] = -1;
    if (!heap_.empty()) heap_down(0);
    if (assign_[static_cast<std::size_t>(var)] == kUndef) return var;
  }
  return -1;
}

SatSolver::Result SatSolver::solve(const std::function<bool()>& should_stop) {
  if (unsat_) return Result::kUnsat;
  backtrack(0);
  if (propagate() >= 0) {
    unsat_ = true;
    return Result::kUnsat;
  }
  int restart = 0;
  std::vector<int> learnt;
  while (true) {
    const auto limit = static_cast<std::uint64_t>(luby(2.0, restart++) * 100);
    std::uint64_t local = 0;
    while (true) {
      int conflict = propagate();
      if (conflict >= 0) {
        ++conflicts_;
        ++local;
        if (trail_lim_.empty()) {
          unsat_ = true;
          return Result::kUnsat;
        }
        int level = 0;
        analyze(conflict, learnt, level);
        backtrack(level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int ci = attach(learnt, true);
          enqueue(learnt[0], ci);
        }
        var_inc_ /= 0.95;
        if ((conflicts_ & 255) == 0 && should_stop && should_stop()) {
          backtrack(0);
          return Result::kUnknown;
        }
      } else {
        if (local >= limit) {
          backtrack(0);
          break;
        }
        int var = pick_branch();
        if (var < 0) return Result::kSat;
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        auto v = static_cast<std::size_t>(var);
        enqueue(phase_[v] == kTrue ? 2 * var : 2 * var + 1, -1);
      }
    }
    if (should_stop && should_stop()) return Result::kUnknown;
  }
}

}  // namespace elfe
