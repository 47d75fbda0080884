#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "word.hpp"

namespace normins {

// G_A(n,k), kept implicit. Vertex (w,m) has id m*b^n + code(w); the edge
// leaving (w,m) that appends c has id m*b^(n+1) + code(wc). The residue of
// a vertex is the position of the last symbol of its word, so the edge
// appending c puts c at position m+1.
class AstuteGraph {
 public:
  static constexpr std::uint64_t npos = std::numeric_limits<std::uint64_t>::max();

  AstuteGraph(Alphabet alphabet, std::size_t n, std::size_t k)
      : alphabet_(std::move(alphabet)), n_(n), k_(k) {
    if (k < 1) throw Error("k must be at least 1");
    b_ = alphabet_.size();
    bn_ = ipow(b_, n);
    bn1_ = ipow(b_, n + 1);
    if (bn1_ > UINT64_MAX / k) throw Error("astute graph too large");
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t base() const { return b_; }
  std::uint64_t vertex_count() const { return k_ * bn_; }
  std::uint64_t edge_count() const { return k_ * bn1_; }

  std::uint64_t vertex(std::uint64_t word_code, std::size_t m) const { return m * bn_ + word_code; }
  std::uint64_t vertex(std::span<const Symbol> w, std::size_t m) const {
    return vertex(encode(w, b_), m % k_);
  }
  std::size_t residue(std::uint64_t v) const { return static_cast<std::size_t>(v / bn_); }
  std::uint64_t word_code(std::uint64_t v) const { return v % bn_; }
  Word vertex_word(std::uint64_t v) const { return Word(alphabet_, decode(word_code(v), n_, b_)); }

  std::uint64_t out_edge(std::uint64_t v, Symbol c) const {
    return residue(v) * bn1_ + word_code(v) * b_ + c;
  }
  std::uint64_t tail(std::uint64_t e) const {
    return (e / bn1_) * bn_ + (e % bn1_) / b_;
  }
  std::uint64_t head(std::uint64_t e) const {
    std::size_t m = static_cast<std::size_t>(e / bn1_);
    return ((m + 1) % k_) * bn_ + (e % bn1_) % bn_;
  }
  std::uint64_t label_code(std::uint64_t e) const { return e % bn1_; }
  Word label(std::uint64_t e) const { return Word(alphabet_, decode(label_code(e), n_ + 1, b_)); }
  Symbol last_symbol(std::uint64_t e) const { return static_cast<Symbol>(e % b_); }

  bool is_strongly_connected() const {
    std::uint64_t V = vertex_count();
    auto reach = [&](bool forward) {
      std::vector<char> seen(V, 0);
      std::queue<std::uint64_t> q;
      q.push(0);
      seen[0] = 1;
      std::uint64_t cnt = 1;
      while (!q.empty()) {
        std::uint64_t v = q.front();
        q.pop();
        for (Symbol c = 0; c < b_; ++c) {
          std::uint64_t w;
          if (forward) {
            w = head(out_edge(v, c));
          } else {  // predecessor: prepend c, residue - 1
            std::size_t m = (residue(v) + k_ - 1) % k_;
            std::uint64_t code = n_ ? c * (bn_ / b_) + word_code(v) / b_ : 0;
            w = vertex(code, m);
          }
          if (!seen[w]) {
            seen[w] = 1;
            ++cnt;
            q.push(w);
          }
        }
      }
      return cnt == V;
    };
    return reach(true) && reach(false);
  }

 private:
  Alphabet alphabet_;
  std::size_t n_, k_, b_;
  std::uint64_t bn_, bn1_;
};

struct PointedEulerianCycle {
  std::vector<std::uint64_t> edges;  // in traversal order
  std::size_t start_edge = 0;

  // last symbol of each label, starting at start_edge
  std::vector<Symbol> spell(const AstuteGraph& g) const {
    std::vector<Symbol> w;
    w.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
      w.push_back(g.last_symbol(edges[(start_edge + i) % edges.size()]));
    return w;
  }

  bool is_valid(const AstuteGraph& g) const {
    if (edges.size() != g.edge_count()) return false;
    std::vector<char> used(g.edge_count(), 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      std::uint64_t e = edges[i];
      if (e >= g.edge_count() || used[e]) return false;
      used[e] = 1;
      if (g.head(e) != g.tail(edges[(i + 1) % edges.size()])) return false;
    }
    return true;
  }
};

// Hierholzer with the least unused label first.
inline PointedEulerianCycle hierholzer(const AstuteGraph& g, std::uint64_t start) {
  const std::size_t b = g.base();
  std::vector<Symbol> next(g.vertex_count(), 0);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> stack;  // (vertex, edge used to get here)
  std::vector<std::uint64_t> circuit;
  circuit.reserve(g.edge_count());
  stack.emplace_back(start, AstuteGraph::npos);
  while (!stack.empty()) {
    std::uint64_t v = stack.back().first;
    if (next[v] < b) {
      std::uint64_t e = g.out_edge(v, next[v]++);
      stack.emplace_back(g.head(e), e);
    } else {
      if (stack.back().second != AstuteGraph::npos) circuit.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  return PointedEulerianCycle{std::move(circuit), 0};
}

// The pointed cycle of G_A(n-1,k) read off a circular word v: edge i emits
// v[i] and its head sits at residue i mod k.
inline PointedEulerianCycle cycle_of_word(const AstuteGraph& g, std::span<const Symbol> v) {
  const std::size_t N = g.n() + 1, E = v.size(), b = g.base(), k = g.k();
  PointedEulerianCycle c;
  c.edges.resize(E);
  for (std::size_t i = 0; i < E; ++i) {
    std::uint64_t code = 0;
    for (std::size_t j = 0; j < N; ++j) code = code * b + v[(i + E * N - (N - 1) + j) % E];
    std::size_t m = (i + k - 1) % k;
    c.edges[i] = m * (g.edge_count() / k) + code;
  }
  return c;
}

}  // namespace normins
