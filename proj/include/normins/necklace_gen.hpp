#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "astute_graph.hpp"
#include "bigint.hpp"
#include "stream.hpp"
#include "word.hpp"

namespace normins {

inline constexpr std::uint64_t kMaxGeneratedLength = std::uint64_t{1} << 30;

struct Necklace {
  Word word;
  std::size_t n = 0;
  std::size_t k = 0;
  Word canonical() const { return canonical_necklace(word); }
};

namespace detail {
inline std::uint64_t checked_length(std::size_t b, std::size_t n, std::size_t k) {
  std::uint64_t bn = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (bn > kMaxGeneratedLength / b) throw Error("necklace exceeds maximum stream length");
    bn *= b;
  }
  if (bn > kMaxGeneratedLength / k) throw Error("necklace exceeds maximum stream length");
  return bn * k;
}
}  // namespace detail

// All n-words in lexicographic order, concatenated.
inline Necklace ordered_necklace(const Alphabet& a, std::size_t n) {
  if (n < 1) throw Error("n must be at least 1");
  const std::size_t b = a.size();
  std::uint64_t len = detail::checked_length(b, n, n);
  std::vector<Symbol> w;
  w.reserve(len);
  std::vector<Symbol> cur(n, 0);
  for (std::uint64_t i = 0; i < len / n; ++i) {
    w.insert(w.end(), cur.begin(), cur.end());
    for (std::size_t j = n; j-- > 0;) {
      if (++cur[j] < b) break;
      cur[j] = 0;
    }
  }
  return {Word(a, std::move(w)), n, n};
}

// Base-b encodings of 0, r, 2r, ... mod b^n.
inline Necklace arithmetic_necklace(const Alphabet& a, std::size_t n, std::uint64_t r) {
  if (n < 1) throw Error("n must be at least 1");
  const std::size_t b = a.size();
  if (std::gcd<std::uint64_t, std::uint64_t>(r, b) != 1)
    throw Error("r must be coprime with alphabet size");
  std::uint64_t len = detail::checked_length(b, n, n);
  std::uint64_t bn = len / n;
  std::vector<Symbol> w;
  w.reserve(len);
  std::uint64_t x = 0, step = r % bn;
  for (std::uint64_t i = 0; i < bn; ++i) {
    auto d = decode(x, n, b);
    w.insert(w.end(), d.begin(), d.end());
    x = (x + step) % bn;
  }
  return {Word(a, std::move(w)), n, n};
}

inline AstuteGraph build_astute_graph(const Alphabet& a, std::size_t n, std::size_t k) {
  return AstuteGraph(a, n, k);
}

struct EulerianNecklace {
  Necklace necklace;
  AstuteGraph graph;
  PointedEulerianCycle cycle;
};

inline EulerianNecklace eulerian_perfect_necklace(const Alphabet& a, std::size_t n, std::size_t k) {
  if (n < 1 || k < 1) throw Error("n and k must be at least 1");
  detail::checked_length(a.size(), n, k);
  AstuteGraph g(a, n - 1, k);
  PointedEulerianCycle c = hierholzer(g, g.vertex(0, 0));
  Word w(a, c.spell(g));
  return {{std::move(w), n, k}, std::move(g), std::move(c)};
}

namespace detail {
inline std::uint64_t euler_phi(std::uint64_t m) {
  std::uint64_t r = m;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    r -= r / p;
  }
  if (m > 1) r -= r / m;
  return r;
}
}  // namespace detail

// Number of (n,k)-perfect necklaces over b symbols, as rotation classes.
inline BigInt count_perfect(std::size_t b, std::size_t n, std::size_t k) {
  if (b < 2 || n < 1 || k < 1) throw Error("count_perfect needs b >= 2, n >= 1, k >= 1");
  // d = product of p^alpha over primes p dividing b and k, alpha the exponent in k
  std::uint64_t d = 1, kk = k;
  for (std::uint64_t p = 2; p <= kk; ++p) {
    if (kk % p) continue;
    std::uint64_t pa = 1;
    while (kk % p == 0) {
      kk /= p;
      pa *= p;
    }
    if (b % p == 0) d *= pa;
  }
  BigInt fact = 1;
  for (std::size_t i = 2; i <= b; ++i) fact *= i;
  BigInt bn = big_pow(BigInt(b), n);
  std::uint64_t bn1 = ipow(b, n - 1);
  BigInt sum = 0;
  for (std::uint64_t j = d; j <= k; j += d) {
    if (k % j) continue;
    BigInt num = big_pow(fact, static_cast<unsigned long>(j * bn1));
    if (num % bn != 0) throw Error("counting formula inconsistency");
    sum += (num / bn) * detail::euler_phi(k / j);
  }
  if (sum % k != 0) throw Error("counting formula inconsistency");
  return sum / k;
}

struct Enumeration {
  std::set<std::vector<Symbol>> classes;  // canonical representatives
  std::uint64_t pointed = 0;              // distinct linear words
  std::uint64_t circuits = 0;             // Eulerian circuits walked from the start vertex

  std::vector<Word> words(const Alphabet& a) const {
    std::vector<Word> out;
    for (auto& c : classes) out.emplace_back(a, c);
    return out;
  }
};

namespace detail {
inline std::uint64_t distinct_rotations(const std::vector<Symbol>& w) {
  for (std::size_t p = 1; p <= w.size(); ++p) {
    if (w.size() % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < w.size() && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return p;
  }
  return w.size();
}
}  // namespace detail

inline constexpr std::uint64_t kEnumerateEdgeGuard = 24;

// Every Eulerian circuit of G_A(n-1,k) from one start vertex; each perfect
// necklace shows up as at least one such circuit.
inline Enumeration enumerate_perfect(const Alphabet& a, std::size_t n, std::size_t k) {
  if (n < 1 || k < 1) throw Error("n and k must be at least 1");
  AstuteGraph g(a, n - 1, k);
  const std::uint64_t E = g.edge_count();
  if (E > kEnumerateEdgeGuard)
    throw Error("instance too large for enumeration: " + std::to_string(E) +
                " edges, guard is " + std::to_string(kEnumerateEdgeGuard));
  // second guard on the number of circuits, roughly (b!)^(k b^(n-1))
  double est = 1;
  for (std::uint64_t i = 0; i < g.vertex_count(); ++i)
    for (std::size_t f = 2; f <= a.size(); ++f) est *= static_cast<double>(f);
  if (est > 2e8) throw Error("instance too large for enumeration: too many Eulerian circuits");

  Enumeration out;
  std::vector<char> used(E, 0);
  std::vector<Symbol> word;
  word.reserve(E);
  const std::uint64_t start = g.vertex(0, 0);
  std::vector<std::uint64_t> path{start};
  auto rec = [&](auto&& self, std::uint64_t v) -> void {
    if (word.size() == E) {
      if (v != start) return;
      ++out.circuits;
      out.classes.insert(canonical_symbols(word));
      return;
    }
    for (Symbol c = 0; c < a.size(); ++c) {
      std::uint64_t e = g.out_edge(v, c);
      if (used[e]) continue;
      used[e] = 1;
      word.push_back(c);
      self(self, g.head(e));
      word.pop_back();
      used[e] = 0;
    }
  };
  rec(rec, start);
  for (auto& c : out.classes) out.pointed += detail::distinct_rotations(c);
  return out;
}

namespace detail {

// Depth-first search for nested (n,k)-perfect words. Every aligned block of
// length k b^j must be (j,k)-perfect, so each (j-word, residue) pair may
// occur at most once inside it, wrap-around windows included.
class NestedSearch {
 public:
  NestedSearch(std::size_t b, std::size_t n, std::size_t k, std::uint64_t budget)
      : b_(b), n_(n), k_(k), budget_(budget) {
    len_ = checked_length(b, n, k);
    for (std::size_t j = 1; j <= n; ++j) {
      std::uint64_t bj = ipow(b, j);
      block_len_.push_back(k * bj);
      words_.push_back(bj);
      counts_.emplace_back(len_ / (k * bj) * bj * k, 0);
    }
    w_.resize(len_);
  }

  // Calls visit(word) for each solution in lexicographic order until it
  // returns false. Returns false if the budget ran out.
  template <class F>
  bool run(F&& visit) {
    stop_ = false;
    nodes_ = 0;
    exhausted_ = false;
    for (auto& c : counts_) std::fill(c.begin(), c.end(), 0);
    dfs(visit);
    return !exhausted_;
  }

 private:
  // apply (+1) or undo (-1) all windows that close at position p
  bool touch(std::uint64_t p, int delta) {
    bool ok = true;
    for (std::size_t j = 1; j <= n_; ++j) {
      std::uint64_t L = block_len_[j - 1];
      std::uint64_t s = p - p % L;
      auto& cnt = counts_[j - 1];
      std::uint64_t base = (p / L) * words_[j - 1] * k_;
      auto hit = [&](std::uint64_t start) {
        std::uint64_t code = 0;
        for (std::size_t t = 0; t < j; ++t) code = code * b_ + w_[s + (start - s + t) % L];
        auto& x = cnt[base + code * k_ + start % k_];
        x = static_cast<std::uint8_t>(x + delta);
        if (x > 1) ok = false;
      };
      if (p + 1 >= s + j) hit(p + 1 - j);
      if (p == s + L - 1)  // block closed: the wrapping windows
        for (std::uint64_t start = s + L - j + 1; start < s + L; ++start) hit(start);
    }
    return ok;
  }

  // iterative, since the depth is the word length
  template <class F>
  void dfs(F& visit) {
    if (len_ == 0) return;
    std::uint64_t p = 0;
    w_[0] = 0;
    for (;;) {
      if (++nodes_ > budget_) {
        exhausted_ = stop_ = true;
        return;
      }
      if (touch(p, +1)) {
        if (p + 1 < len_) {
          w_[++p] = 0;
          continue;
        }
        if (!visit(w_)) {
          stop_ = true;
          return;
        }
      }
      touch(p, -1);
      while (++w_[p] == b_) {
        if (p == 0) return;
        touch(--p, -1);
      }
    }
  }

  std::size_t b_, n_, k_;
  std::uint64_t budget_, len_ = 0, nodes_ = 0;
  bool stop_ = false, exhausted_ = false;
  std::vector<std::uint64_t> block_len_, words_;
  std::vector<std::vector<std::uint8_t>> counts_;
  std::vector<Symbol> w_;
};

}  // namespace detail

inline constexpr std::uint64_t kNestedSearchBudget = 200'000'000;

// First nested (n,k)-perfect word in lexicographic order.
inline Necklace nested_perfect(const Alphabet& a, std::size_t n, std::size_t k,
                               std::uint64_t budget = kNestedSearchBudget) {
  if (n < 1 || k < 1) throw Error("n and k must be at least 1");
  detail::NestedSearch s(a.size(), n, k, budget);
  std::vector<Symbol> found;
  bool ok = s.run([&](const std::vector<Symbol>& w) {
    found = w;
    return false;
  });
  if (found.empty())
    throw Error("nested (" + std::to_string(n) + "," + std::to_string(k) + ")-perfect search " +
                (ok ? "exhausted" : "ran out of budget"));
  return {Word(a, std::move(found)), n, k};
}

// All nested words: pointed = linear words, classes = their rotation classes.
struct NestedEnumeration {
  std::uint64_t pointed = 0;
  std::set<std::vector<Symbol>> classes;
};

inline NestedEnumeration enumerate_nested(const Alphabet& a, std::size_t n, std::size_t k,
                                          std::uint64_t budget = kNestedSearchBudget) {
  detail::NestedSearch s(a.size(), n, k, budget);
  NestedEnumeration out;
  bool ok = s.run([&](const std::vector<Symbol>& w) {
    ++out.pointed;
    out.classes.insert(canonical_symbols(w));
    return true;
  });
  if (!ok) throw Error("nested enumeration ran out of budget");
  return out;
}

// Concatenation of (n, alpha*n+beta)-perfect Eulerian necklaces, n = 1, 2, ...
class PerfectStream : public BlockStream {
 public:
  explicit PerfectStream(Alphabet a, std::size_t n_max = 0, std::size_t alpha = 1,
                         std::size_t beta = 0)
      : a_(std::move(a)), n_max_(n_max), alpha_(alpha), beta_(beta) {
    if (alpha < 1) throw Error("k_n = alpha*n + beta needs alpha >= 1");
  }
  const Alphabet& alphabet() const override { return a_; }
  std::size_t k_of(std::size_t n) const { return alpha_ * n + beta_; }

 protected:
  bool produce(std::size_t index, std::vector<Symbol>& out) override {
    std::size_t n = index + 1;
    if (n_max_ && n > n_max_) return false;
    auto r = eulerian_perfect_necklace(a_, n, k_of(n));
    auto s = r.necklace.word.symbols();
    out.assign(s.begin(), s.end());
    return true;
  }

 private:
  Alphabet a_;
  std::size_t n_max_, alpha_, beta_;
};

inline constexpr std::size_t kNestedStreamMaxD = 3;

// Concatenation of nested (2^d, 2^d)-perfect necklaces, d = d_start..d_max.
class NestedStream : public BlockStream {
 public:
  NestedStream(Alphabet a, std::size_t d_max, std::size_t d_start = 0,
               std::size_t d_guard = kNestedStreamMaxD)
      : a_(std::move(a)), d_max_(d_max), d_start_(d_start) {
    if (d_max > d_guard)
      throw Error("d_max " + std::to_string(d_max) + " exceeds the search guard " +
                  std::to_string(d_guard));
  }
  const Alphabet& alphabet() const override { return a_; }

 protected:
  bool produce(std::size_t index, std::vector<Symbol>& out) override {
    std::size_t d = d_start_ + index;
    if (d > d_max_) return false;
    std::size_t m = std::size_t{1} << d;
    auto it = cache_.find(d);
    if (it == cache_.end()) {
      auto nk = nested_perfect(a_, m, m);
      auto s = nk.word.symbols();
      it = cache_.emplace(d, std::vector<Symbol>(s.begin(), s.end())).first;
    }
    out = it->second;
    return true;
  }

 private:
  Alphabet a_;
  std::size_t d_max_, d_start_;
  std::map<std::size_t, std::vector<Symbol>> cache_;
};

}  // namespace normins
