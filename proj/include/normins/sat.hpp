#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace normins::sat {

// Small CDCL solver: two watched literals, first-UIP learning, VSIDS with a
// binary heap, phase saving, Luby restarts. Deterministic. Literals are
// DIMACS-style nonzero ints.
class Solver {
 public:
  enum class Result { sat, unsat, unknown };

  int new_var() {
    int v = static_cast<int>(val_.size());
    val_.push_back(-1);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    phase_.push_back(0);
    seen_.push_back(0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v + 1;
  }
  int vars() const { return static_cast<int>(val_.size()); }

  void add_clause(std::vector<int> dimacs) {
    if (!ok_) return;
    std::vector<int> c;
    for (int d : dimacs) {
      int l = lit(d);
      int v = lvalue(l);
      if (v == 1) return;  // satisfied at level 0
      if (v == 0) continue;
      bool dup = false;
      for (int x : c) {
        if (x == l) dup = true;
        if (x == (l ^ 1)) return;  // tautology
      }
      if (!dup) c.push_back(l);
    }
    if (c.empty()) {
      ok_ = false;
      return;
    }
    if (c.size() == 1) {
      assign(c[0], -1);
      if (propagate() != -1) ok_ = false;
      return;
    }
    attach(std::move(c));
  }

  Result solve(std::uint64_t conflict_budget = 0) {
    if (!ok_) return Result::unsat;
    std::uint64_t conflicts = 0;
    for (std::uint64_t restart = 0;; ++restart) {
      std::uint64_t limit = 100 * luby(restart);
      std::uint64_t here = 0;
      for (;;) {
        int confl = propagate();
        if (confl != -1) {
          ++conflicts;
          ++here;
          if (decision_level() == 0) {
            ok_ = false;
            return Result::unsat;
          }
          int back;
          std::vector<int> learnt = analyze(confl, back);
          cancel_until(back);
          if (learnt.size() == 1) {
            assign(learnt[0], -1);
          } else {
            int ci = attach(learnt);
            assign(learnt[0], ci);
          }
          var_inc_ /= 0.95;
          if (conflict_budget && conflicts >= conflict_budget) {
            cancel_until(0);
            return Result::unknown;
          }
        } else {
          if (here >= limit) {
            cancel_until(0);
            break;
          }
          int v = pick();
          if (v < 0) {
            model_.assign(val_.begin(), val_.end());
            cancel_until(0);
            return Result::sat;
          }
          trail_lim_.push_back(static_cast<int>(trail_.size()));
          assign(2 * v + (phase_[v] ? 0 : 1), -1);
        }
      }
    }
  }

  // value of a variable in the last model
  bool model_value(int var) const { return model_[var - 1] == 1; }

 private:
  static int lit(int d) { return 2 * (std::abs(d) - 1) + (d < 0 ? 1 : 0); }
  int lvalue(int l) const {
    int v = val_[l >> 1];
    return v < 0 ? -1 : v ^ (l & 1);
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int attach(std::vector<int> c) {
    int ci = static_cast<int>(clauses_.size());
    watches_[c[0] ^ 1].push_back(ci);
    watches_[c[1] ^ 1].push_back(ci);
    clauses_.push_back(std::move(c));
    return ci;
  }

  void assign(int l, int reason) {
    int v = l >> 1;
    val_[v] = (l & 1) ? 0 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];  // p became true; clauses watching ~p
      int fl = p ^ 1;
      auto& ws = watches_[p];
      std::size_t i = 0, j = 0;
      int confl = -1;
      while (i < ws.size()) {
        int ci = ws[i++];
        auto& c = clauses_[ci];
        if (c[0] == fl) std::swap(c[0], c[1]);
        if (lvalue(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lvalue(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1] ^ 1].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (lvalue(c[0]) == 0) {
          confl = ci;
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          assign(c[0], ci);
        }
      }
      ws.resize(j);
      if (confl != -1) return confl;
    }
    return -1;
  }

  std::vector<int> analyze(int confl, int& back) {
    std::vector<int> learnt(1);
    int counter = 0, p = -1;
    std::size_t idx = trail_.size();
    do {
      auto& c = clauses_[confl];
      for (std::size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
        int q = c[k], v = q >> 1;
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(v);
        if (level_[v] == decision_level())
          ++counter;
        else
          learnt.push_back(q);
      }
      while (!seen_[trail_[--idx] >> 1]) {
      }
      p = trail_[idx];
      confl = reason_[p >> 1];
      seen_[p >> 1] = 0;
      --counter;
      if (counter > 0 && confl != -1) {
        // reason clauses keep the implied literal at c[0]
        auto& rc = clauses_[confl];
        if (rc[0] != p) {
          for (std::size_t k = 1; k < rc.size(); ++k)
            if (rc[k] == p) std::swap(rc[0], rc[k]);
        }
      }
    } while (counter > 0);
    learnt[0] = p ^ 1;
    back = 0;
    std::size_t maxi = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      seen_[learnt[k] >> 1] = 0;
      if (level_[learnt[k] >> 1] > back) {
        back = level_[learnt[k] >> 1];
        maxi = k;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[maxi]);
    return learnt;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[lvl]);) {
      int v = trail_[i] >> 1;
      phase_[v] = val_[v];
      val_[v] = -1;
      reason_[v] = -1;
      if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  int pick() {
    while (!heap_.empty()) {
      int v = heap_pop();
      if (val_[v] < 0) return v;
    }
    return -1;
  }

  void bump(int v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
  }

  static std::uint64_t luby(std::uint64_t x) {
    std::uint64_t size = 1, seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x %= size;
    }
    return std::uint64_t{1} << seq;
  }

  // max-heap on activity, ties to the lower index
  bool above(int a, int b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_insert(int v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
  }
  void heap_up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!above(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  int heap_pop() {
    int top = heap_[0];
    heap_pos_[top] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      int i = 0, n = static_cast<int>(heap_.size());
      for (;;) {
        int c = 2 * i + 1;
        if (c >= n) break;
        if (c + 1 < n && above(heap_[c + 1], heap_[c])) ++c;
        if (!above(heap_[c], last)) break;
        heap_[i] = heap_[c];
        heap_pos_[heap_[i]] = i;
        i = c;
      }
      heap_[i] = last;
      heap_pos_[last] = i;
    }
    return top;
  }

  bool ok_ = true;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> val_, level_, reason_, heap_pos_, heap_, trail_, trail_lim_;
  std::vector<char> phase_, seen_, model_;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::size_t qhead_ = 0;
};

// At most one of lits, sequential counter encoding.
inline void at_most_one(Solver& s, const std::vector<int>& lits) {
  if (lits.size() <= 1) return;
  if (lits.size() <= 6) {
    for (std::size_t i = 0; i < lits.size(); ++i)
      for (std::size_t j = i + 1; j < lits.size(); ++j) s.add_clause({-lits[i], -lits[j]});
    return;
  }
  std::vector<int> r(lits.size() - 1);
  for (auto& x : r) x = s.new_var();
  s.add_clause({-lits[0], r[0]});
  for (std::size_t i = 1; i + 1 < lits.size(); ++i) {
    s.add_clause({-lits[i], r[i]});
    s.add_clause({-r[i - 1], r[i]});
    s.add_clause({-lits[i], -r[i - 1]});
  }
  s.add_clause({-lits.back(), -r.back()});
}

inline void exactly_one(Solver& s, const std::vector<int>& lits) {
  s.add_clause(lits);
  at_most_one(s, lits);
}

}  // namespace normins::sat
