#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "astute_graph.hpp"
#include "matching.hpp"
#include "necklace_gen.hpp"
#include "sat.hpp"
#include "stream.hpp"

namespace normins {

// Edges of G_Ahat(N-1,k) keyed by (label code, residue of the emitted
// symbol): key = code*k + r. Rotating a label one step to the left and
// bumping the residue gives the next edge of its class cycle.
class HatEdges {
 public:
  HatEdges(std::size_t b, std::size_t N, std::size_t k) : B_(b + 1), N_(N), k_(k) {
    BN_ = ipow(B_, N);
    Bn_ = BN_ / B_;
    if (BN_ > (std::uint64_t{1} << 32) / k) throw Error("extended graph too large");
  }
  std::size_t B() const { return B_; }
  std::size_t N() const { return N_; }
  std::size_t k() const { return k_; }
  Symbol sigma() const { return static_cast<Symbol>(B_ - 1); }
  std::uint64_t key_count() const { return BN_ * k_; }
  std::uint64_t key(std::uint64_t code, std::size_t r) const { return code * k_ + r % k_; }
  std::uint64_t code(std::uint64_t key) const { return key / k_; }
  std::size_t residue(std::uint64_t key) const { return key % k_; }
  Symbol first(std::uint64_t code) const { return static_cast<Symbol>(code / Bn_); }
  Symbol last(std::uint64_t code) const { return static_cast<Symbol>(code % B_); }
  std::uint64_t rotate(std::uint64_t code) const { return (code % Bn_) * B_ + code / Bn_; }
  std::uint64_t next(std::uint64_t key) const {
    return this->key(rotate(code(key)), residue(key) + 1);
  }
  std::size_t sigma_count(std::uint64_t code) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < N_; ++i, code /= B_) s += code % B_ == B_ - 1;
    return s;
  }
  // length of the class cycle through key
  std::size_t class_size(std::uint64_t key) const {
    std::size_t p = 1;
    for (std::uint64_t c = rotate(code(key)); c != code(key); c = rotate(c)) ++p;
    return std::lcm(p, k_);
  }

 private:
  std::size_t B_, N_, k_;
  std::uint64_t BN_, Bn_;
};

// A word of length N over Ahat with a residue; equal up to simultaneous rotation.
struct NecklacePair {
  std::uint64_t code = 0;
  std::size_t residue = 0;
  friend bool operator==(const NecklacePair&, const NecklacePair&) = default;
  friend auto operator<=>(const NecklacePair&, const NecklacePair&) = default;
};

inline NecklacePair canonical_pair(const HatEdges& h, NecklacePair p) {
  NecklacePair best = p;
  std::uint64_t key = h.key(p.code, p.residue);
  for (std::size_t t = 1, L = h.class_size(key); t < L; ++t) {
    key = h.next(key);
    NecklacePair q{h.code(key), h.residue(key)};
    if (q < best) best = q;
  }
  return best;
}

struct Section {
  std::size_t index = 0;
  std::vector<std::uint64_t> heads;  // vertices of G_A(N-1,k)
};

inline std::vector<Section> sections(const AstuteGraph& g, const PointedEulerianCycle& c) {
  const std::size_t b = g.base(), E = c.edges.size();
  if (E % b) throw Error("cycle length is not a multiple of the alphabet size");
  std::vector<Section> out(E / b);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].index = j;
    for (std::size_t i = j * b; i < j * b + b; ++i)
      out[j].heads.push_back(g.head(c.edges[(c.start_edge + i) % E]));
  }
  return out;
}

// chosen[j] = the vertex matched to section j
inline std::vector<std::uint64_t> distribution_matching(const AstuteGraph& g,
                                                        const std::vector<Section>& secs) {
  std::vector<std::vector<int>> adj(secs.size());
  for (auto& s : secs) {
    for (auto v : s.heads) adj[s.index].push_back(static_cast<int>(v));
    std::sort(adj[s.index].begin(), adj[s.index].end());
    adj[s.index].erase(std::unique(adj[s.index].begin(), adj[s.index].end()), adj[s.index].end());
  }
  auto m = max_matching(adj, g.vertex_count());
  if (m.size != secs.size() || secs.size() != g.vertex_count()) throw Error("Hall violation");
  return {m.left_to_right.begin(), m.left_to_right.end()};
}

inline std::vector<std::uint64_t> distribution_matching(const AstuteGraph& g,
                                                        const PointedEulerianCycle& c) {
  return distribution_matching(g, sections(g, c));
}

// Nodes are the sigma-containing classes of G_Ahat(N-1,k). Level-1 nodes
// hang off the root (the input cycle) at their ports; a deeper node is
// spliced into its parent right after the parent edge a.u whose head it
// shares, entering through the edge u.sigma....
struct PetalsTree {
  struct Node {
    std::uint64_t start_key = 0;  // first edge traversed
    std::size_t length = 0;
    std::size_t level = 0;
    int parent = -1;                    // -1: the root
    std::uint64_t attach_key = 0;       // parent edge it follows (deeper levels)
    std::vector<std::uint64_t> ports;   // level 1: vertices of G_A(N-1,k)
  };
  std::vector<Symbol> root;
  std::vector<Node> nodes;
  std::vector<std::int32_t> child_at;  // per edge key
  std::vector<std::int32_t> node_of;   // per edge key, -1 for sigma-free edges
  std::vector<std::int32_t> port_node; // per vertex of G_A(N-1,k)

  std::size_t height() const {
    std::size_t h = 0;
    for (auto& x : nodes) h = std::max(h, x.level);
    return h;
  }
};

inline PetalsTree build_petals_tree(const HatEdges& h, std::span<const Symbol> root) {
  const std::size_t b = h.B() - 1, N = h.N(), k = h.k();
  const Symbol s = h.sigma();
  PetalsTree t;
  t.root.assign(root.begin(), root.end());
  t.child_at.assign(h.key_count(), -1);
  t.node_of.assign(h.key_count(), -1);
  const std::uint64_t bn = ipow(b, N - 1);
  t.port_node.assign(bn * k, -1);

  auto add = [&](std::uint64_t start, std::size_t level, int parent, std::uint64_t attach) {
    PetalsTree::Node x;
    x.start_key = start;
    x.length = h.class_size(start);
    x.level = level;
    x.parent = parent;
    x.attach_key = attach;
    int id = static_cast<int>(t.nodes.size());
    std::uint64_t key = start;
    for (std::size_t i = 0; i < x.length; ++i, key = h.next(key)) t.node_of[key] = id;
    t.nodes.push_back(std::move(x));
    return id;
  };

  // level 1: port (u,m) enters with u.sigma emitted at m+1
  for (std::uint64_t v = 0; v < bn * k; ++v) {
    std::size_t m = v / bn;
    auto u = decode(v % bn, N - 1, b);
    std::uint64_t code = encode(u, h.B()) * h.B() + s;
    std::uint64_t key = h.key(code, m + 1);
    int id = t.node_of[key];
    if (id < 0) id = add(key, 1, -1, 0);
    t.nodes[id].ports.push_back(v);
    t.port_node[v] = id;
  }
  // breadth first: for parent edge a.u (a != sigma), the class of sigma.u
  std::uint64_t Bn = ipow(h.B(), N - 1);
  for (std::size_t q = 0; q < t.nodes.size(); ++q) {
    std::uint64_t key = t.nodes[q].start_key;
    for (std::size_t i = 0; i < t.nodes[q].length; ++i, key = h.next(key)) {
      std::uint64_t c = h.code(key);
      if (h.first(c) == s || N < 2) continue;
      std::uint64_t child = s * Bn + c % Bn;
      std::uint64_t ck = h.key(child, h.residue(key));
      if (t.node_of[ck] >= 0) continue;
      int id = add(h.next(ck), t.nodes[q].level + 1, static_cast<int>(q), key);
      t.child_at[key] = id;
    }
  }
  return t;
}

struct LiberalReport {
  bool perfect = false;
  std::size_t max_gap = 0;
  std::size_t bound = 0;  // n + 2|A| - 2
  bool gap_ok = false;
  bool subsequence = false;
  bool skipped_all_sigma = false;
  std::size_t skipped_non_sigma = 0;
  std::uint64_t edges_total = 0, edges_covered = 0, edges_repeated = 0;
};

// k not dividing n: closed excursions inserted after chosen A-edges.
struct InsertionPlan {
  std::vector<std::vector<Symbol>> after;  // after[i]: excursion emitted after v[i]
  std::size_t lmax = 0;
  std::size_t gap_points = 0;  // at most this many points between insertions
  bool relaxed = false;        // the gap constraint had to be loosened
};

struct LiberalOptions {
  std::uint64_t conflict_budget = 300'000;
  std::size_t lmax_steps = 3;
};

struct LiberalResult {
  Word output;
  std::string method;  // "petals" or "plan"
  std::vector<Section> sections;
  std::vector<std::uint64_t> matching;
  std::vector<std::size_t> insert_after;  // edge index of each petal insertion
  PetalsTree tree;
  InsertionPlan plan;
  LiberalReport report;
};

namespace detail {

// Excursions from the sigma-free word u: every window has a sigma and the
// walk ends on u again.
inline std::vector<std::vector<Symbol>> excursions(std::span<const Symbol> u, std::size_t b,
                                                   std::size_t N, std::size_t lmax) {
  const Symbol s = static_cast<Symbol>(b);
  const std::size_t n = N - 1;
  std::vector<std::vector<Symbol>> out;
  std::vector<Symbol> full(u.begin(), u.end());
  auto rec = [&](auto&& self) -> void {
    std::size_t len = full.size() - n;
    if (len > 0 && std::equal(full.end() - n, full.end(), u.begin()))
      out.emplace_back(full.begin() + n, full.end());
    if (len >= lmax) return;
    for (Symbol c = 0; c <= s; ++c) {
      full.push_back(c);
      if (std::find(full.end() - N, full.end(), s) != full.end()) self(self);
      full.pop_back();
    }
  };
  rec(rec);
  std::sort(out.begin(), out.end(), [](auto& x, auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

struct PlanAttempt {
  bool found = false;
  bool unknown = false;
  InsertionPlan plan;
};

inline PlanAttempt solve_plan(std::span<const Symbol> v, std::size_t b, std::size_t N, std::size_t k,
                              std::size_t lmax, std::size_t G, std::uint64_t budget) {
  const std::size_t E = v.size(), n = N - 1, B = b + 1;
  HatEdges h(b, N, k);
  std::vector<std::uint64_t> label(E), word(E);
  for (std::size_t i = 0; i < E; ++i) {
    std::uint64_t l = 0, w = 0;
    for (std::size_t j = 0; j < N; ++j) l = l * B + v[(i + E * N - n + j) % E];
    for (std::size_t j = 0; j < n; ++j) w = w * B + v[(i + E * N - n + 1 + j) % E];
    label[i] = l;
    word[i] = w;
  }
  std::map<std::uint64_t, std::vector<std::vector<Symbol>>> cand;
  for (std::size_t i = 0; i < E; ++i)
    if (!cand.count(word[i])) {
      std::vector<Symbol> u;
      for (std::size_t j = 0; j < n; ++j) u.push_back(v[(i + E * N - n + 1 + j) % E]);
      cand[word[i]] = excursions(u, b, N, lmax);
    }

  sat::Solver S;
  std::vector<std::vector<int>> sh(E + 1, std::vector<int>(k));
  for (auto& row : sh)
    for (auto& x : row) x = S.new_var();
  for (auto& row : sh) sat::exactly_one(S, row);
  S.add_clause({sh[0][0]});
  S.add_clause({sh[E][0]});

  std::vector<int> none(E);
  std::vector<std::vector<int>> X(E);
  std::vector<std::vector<int>> use(h.key_count());
  for (std::size_t i = 0; i < E; ++i) {
    auto& cs = cand[word[i]];
    none[i] = S.new_var();
    std::vector<int> pick{none[i]};
    for (std::size_t c = 0; c < cs.size(); ++c) {
      X[i].push_back(S.new_var());
      pick.push_back(X[i].back());
    }
    sat::exactly_one(S, pick);
    for (std::size_t r = 0; r < k; ++r) {
      S.add_clause({-none[i], -sh[i][r], sh[i + 1][r]});
      for (std::size_t c = 0; c < cs.size(); ++c) {
        S.add_clause({-X[i][c], -sh[i][r], sh[i + 1][(r + cs[c].size()) % k]});
        int z = S.new_var();
        S.add_clause({-X[i][c], -sh[i][r], z});
        // edges of the excursion: emitted at residues i + r + 1 + j
        std::vector<std::uint64_t> keys;
        std::uint64_t w = word[i];
        for (std::size_t j = 0; j < cs[c].size(); ++j) {
          std::uint64_t l = w * B + cs[c][j];
          keys.push_back(h.key(l, i + r + 1 + j));
          w = n ? l % ipow(B, n) : 0;
        }
        auto sorted = keys;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
          S.add_clause({-z});
          continue;
        }
        for (auto key : keys) use[key].push_back(z);
      }
    }
  }
  if (G < E)
    for (std::size_t i = 0; i < E; ++i) {
      std::vector<int> cl;
      for (std::size_t j = 0; j < G; ++j) cl.push_back(-none[(i + j) % E]);
      S.add_clause(cl);
    }
  // equal labels must keep distinct residues
  std::map<std::uint64_t, std::vector<std::size_t>> occ;
  for (std::size_t i = 0; i < E; ++i) occ[label[i]].push_back(i);
  for (auto& [l, ii] : occ)
    for (std::size_t a = 0; a < ii.size(); ++a)
      for (std::size_t c = a + 1; c < ii.size(); ++c)
        for (std::size_t r1 = 0; r1 < k; ++r1)
          for (std::size_t r2 = 0; r2 < k; ++r2)
            if ((ii[a] + r1) % k == (ii[c] + r2) % k) S.add_clause({-sh[ii[a]][r1], -sh[ii[c]][r2]});
  for (auto& zs : use) sat::at_most_one(S, zs);

  PlanAttempt at;
  auto res = S.solve(budget);
  if (res == sat::Solver::Result::unknown) at.unknown = true;
  if (res != sat::Solver::Result::sat) return at;
  at.found = true;
  at.plan.lmax = lmax;
  at.plan.gap_points = G;
  at.plan.after.resize(E);
  for (std::size_t i = 0; i < E; ++i)
    for (std::size_t c = 0; c < X[i].size(); ++c)
      if (S.model_value(X[i][c])) at.plan.after[i] = cand[word[i]][c];
  return at;
}

// Closes a circular word over Ahat into an (N,k)-perfect one by splicing
// Euler tours of the missing edges wherever they touch it.
inline std::vector<Symbol> splice_missing(const std::vector<Symbol>& out, std::size_t b, std::size_t N,
                                          std::size_t k) {
  const std::size_t B = b + 1, n = N - 1, L = out.size();
  HatEdges h(b, N, k);
  const std::uint64_t Bn = ipow(B, n);
  std::vector<char> have(h.key_count(), 0);
  for (std::size_t p = 0; p < L; ++p) {
    std::uint64_t l = 0;
    for (std::size_t j = 0; j < N; ++j) l = l * B + out[(p + L * N - n + j) % L];
    have[h.key(l, p)] = 1;
  }
  // missing out-edges per vertex (word, residue of the next symbol)
  std::vector<std::uint64_t> rest(Bn * k, 0);
  for (std::uint64_t key = 0; key < h.key_count(); ++key)
    if (!have[key]) {
      std::uint64_t c = h.code(key);
      std::size_t r = h.residue(key);
      rest[(c / B) * k + r] |= std::uint64_t{1} << (c % B);
    }
  auto tour = [&](std::uint64_t vtx) {
    std::vector<std::pair<std::uint64_t, int>> stack{{vtx, -1}};
    std::vector<Symbol> res;
    while (!stack.empty()) {
      auto [x, c] = stack.back();
      if (rest[x]) {
        int c2 = std::countr_zero(rest[x]);
        rest[x] &= rest[x] - 1;
        std::uint64_t w = x / k;
        std::size_t r = x % k;
        std::uint64_t nw = n ? (w * B + c2) % Bn : 0;
        stack.emplace_back(nw * k + (r + 1) % k, c2);
      } else {
        if (c >= 0) res.push_back(static_cast<Symbol>(c));
        stack.pop_back();
      }
    }
    std::reverse(res.begin(), res.end());
    return res;
  };
  std::vector<Symbol> res;
  res.reserve(h.key_count());
  for (std::size_t p = 0; p < L; ++p) {
    res.push_back(out[p]);
    std::uint64_t w = 0;
    for (std::size_t j = 0; j < n; ++j) w = w * B + out[(p + L * n - n + 1 + j) % L];
    std::uint64_t x = w * k + (p + 1) % k;
    if (rest[x]) {
      auto t = tour(x);
      res.insert(res.end(), t.begin(), t.end());
    }
  }
  return res;
}

}  // namespace detail

// Embeds an (n,k)-perfect necklace over A into one over A+{sigma}.
inline LiberalResult liberal_insert(const Word& v, std::size_t n, std::size_t k, char sigma,
                                    const LiberalOptions& opt = {}) {
  const Alphabet& a = v.alphabet();
  if (a.has_sigma()) throw Error("input alphabet already has a sigma");
  if (n < 1 || k < 1) throw Error("n and k must be at least 1");
  if (!is_perfect(v, n, k).is_perfect)
    throw Error("input is not (" + std::to_string(n) + "," + std::to_string(k) + ")-perfect");
  const std::size_t b = a.size(), N = n, E = v.size();
  Alphabet ahat = a.with_sigma(sigma);
  HatEdges h(b, N, k);
  AstuteGraph g(a, N - 1, k);
  PointedEulerianCycle cyc = cycle_of_word(g, v.symbols());

  LiberalResult res{Word(ahat), {}, {}, {}, {}, {}, {}, {}};
  res.sections = sections(g, cyc);
  std::vector<Symbol> out;
  out.reserve(h.key_count());
  std::vector<std::uint32_t> count(h.key_count(), 0);

  if (N % k == 0) {
    res.method = "petals";
    res.matching = distribution_matching(g, res.sections);
    res.tree = build_petals_tree(h, v.symbols());
    std::vector<std::int64_t> port_after(E, -1);
    for (auto& sec : res.sections) {
      std::uint64_t want = res.matching[sec.index];
      for (std::size_t t = 0; t < b; ++t)
        if (sec.heads[t] == want) {
          port_after[sec.index * b + t] = static_cast<std::int64_t>(want);
          res.insert_after.push_back(sec.index * b + t);
          break;
        }
    }
    auto emit = [&](auto&& self, int id) -> void {
      std::uint64_t key = res.tree.nodes[id].start_key;
      for (std::size_t i = 0; i < res.tree.nodes[id].length; ++i, key = h.next(key)) {
        out.push_back(h.last(h.code(key)));
        if (res.tree.child_at[key] >= 0) self(self, res.tree.child_at[key]);
      }
    };
    for (std::size_t i = 0; i < E; ++i) {
      out.push_back(v[i]);
      if (port_after[i] >= 0) emit(emit, res.tree.port_node[port_after[i]]);
    }
  } else {
    res.method = "plan";
    const std::size_t G0 = 2 * b - 1, l0 = std::max<std::size_t>(4, N + 1);
    detail::PlanAttempt at;
    for (std::size_t l = l0; l < l0 + opt.lmax_steps && !at.found; ++l)
      at = detail::solve_plan(v.symbols(), b, N, k, l, G0, opt.conflict_budget);
    for (std::size_t G = 2 * G0; !at.found; G = std::min(2 * G, E)) {
      at = detail::solve_plan(v.symbols(), b, N, k, l0, G, opt.conflict_budget);
      if (!at.found && G >= E) {
        at.found = true;  // empty plan
        at.plan.after.assign(E, {});
        at.plan.gap_points = E;
      }
      at.plan.relaxed = true;
    }
    res.plan = std::move(at.plan);
    std::vector<Symbol> raw;
    for (std::size_t i = 0; i < E; ++i) {
      raw.push_back(v[i]);
      raw.insert(raw.end(), res.plan.after[i].begin(), res.plan.after[i].end());
    }
    out = detail::splice_missing(raw, b, N, k);
  }

  // coverage of G_Ahat(n-1,k)
  const std::size_t L = out.size();
  for (std::size_t p = 0; p < L; ++p) {
    std::uint64_t l = 0;
    for (std::size_t j = 0; j < N; ++j) l = l * (b + 1) + out[(p + L * N - (N - 1) + j) % L];
    ++count[h.key(l, p)];
  }
  auto& rep = res.report;
  rep.edges_total = h.key_count();
  for (auto c : count) {
    rep.edges_covered += c > 0;
    rep.edges_repeated += c > 1;
  }
  if (rep.edges_covered != rep.edges_total || rep.edges_repeated || L != h.key_count())
    throw Error("petal coverage failure");

  res.output = Word(ahat, std::move(out));
  rep.perfect = is_perfect(res.output, n, k).is_perfect;
  auto gr = sigma_gaps(res.output, true);
  rep.max_gap = gr.max_gap;
  rep.bound = n + 2 * b - 2;
  rep.gap_ok = rep.max_gap <= rep.bound;
  auto sr = subsequence_report(v.symbols(), res.output.symbols(), ahat.sigma());
  rep.subsequence = sr.subsequence;
  rep.skipped_all_sigma = sr.skipped_all_sigma;
  rep.skipped_non_sigma = sr.skipped_non_sigma;
  return res;
}

// Liberal insertion applied to each block of the perfect stream.
class LiberalStream : public BlockStream {
 public:
  LiberalStream(Alphabet a, char sigma, std::size_t n_max = 0, std::size_t alpha = 1,
                std::size_t beta = 0)
      : a_(std::move(a)), ahat_(a_.with_sigma(sigma)), sigma_(sigma), n_max_(n_max), alpha_(alpha),
        beta_(beta) {
    if (alpha < 1) throw Error("k_n = alpha*n + beta needs alpha >= 1");
  }
  const Alphabet& alphabet() const override { return ahat_; }
  const LiberalReport& last_report() const { return last_; }

 protected:
  bool produce(std::size_t index, std::vector<Symbol>& out) override {
    std::size_t n = index + 1;
    if (n_max_ && n > n_max_) return false;
    std::size_t k = alpha_ * n + beta_;
    auto r = liberal_insert(eulerian_perfect_necklace(a_, n, k).necklace.word, n, k, sigma_);
    last_ = r.report;
    auto s = r.output.symbols();
    out.assign(s.begin(), s.end());
    return true;
  }

 private:
  Alphabet a_, ahat_;
  char sigma_;
  std::size_t n_max_, alpha_, beta_;
  LiberalReport last_;
};

}  // namespace normins
