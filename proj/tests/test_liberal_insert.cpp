#include <gtest/gtest.h>

#include <numeric>

#include "normins/analysis.hpp"
#include "normins/liberal_insert.hpp"
#include "normins/necklace_gen.hpp"
#include "oracles.hpp"

using namespace normins;

namespace {
const Alphabet kBin("01");

// sigma-containing classes of (N-word over Ahat, residue mod k) under
// simultaneous rotation, counted with strings
std::size_t sigma_classes(const std::string& ahat, std::size_t N, std::size_t k) {
  std::set<std::pair<std::string, std::size_t>> seen;
  std::size_t classes = 0;
  for (auto& w : oracle::all_words(ahat, N)) {
    if (w.find(ahat.back()) == std::string::npos) continue;
    for (std::size_t r = 0; r < k; ++r) {
      if (seen.count({w, r})) continue;
      ++classes;
      std::string u = w;
      std::size_t m = r;
      while (seen.insert({u, m}).second) {
        u = u.substr(1) + u[0];
        m = (m + 1) % k;
      }
    }
  }
  return classes;
}

// output perfect over Ahat, input a subsequence, circular gap within n + 2b - 2
void expect_liberal_ok(const Word& v, std::size_t n, std::size_t k) {
  auto r = liberal_insert(v, n, k, 's');
  std::string a = v.alphabet().chars(), ah = a + "s", out = r.output.str();
  SCOPED_TRACE(v.str() + " n=" + std::to_string(n) + " k=" + std::to_string(k));
  EXPECT_TRUE(oracle::perfect(out, ah, n, k));
  // greedy embedding, independent of the library
  std::size_t j = 0;
  std::string vs = v.str();
  for (char c : out)
    if (j < vs.size() && c == vs[j]) ++j;
  EXPECT_EQ(j, vs.size());
  EXPECT_LE(oracle::max_circular_gap(out, 's'), n + 2 * a.size() - 2);
  EXPECT_TRUE(r.report.perfect);
  EXPECT_TRUE(r.report.subsequence);
  EXPECT_TRUE(r.report.gap_ok);
  EXPECT_EQ(r.report.max_gap, oracle::max_circular_gap(out, 's'));
}
}  // namespace

TEST(Sections, WorkedExample) {
  auto v = Word::parse(kBin, "00011011");
  AstuteGraph g(kBin, 1, 2);
  auto c = cycle_of_word(g, v.symbols());
  ASSERT_TRUE(c.is_valid(g));
  auto s = sections(g, c);
  ASSERT_EQ(s.size(), 4u);
  std::size_t total = 0;
  for (auto& x : s) total += x.heads.size();
  EXPECT_EQ(total, 8u);
  // vertex id = residue * 2 + word
  EXPECT_EQ(s[0].heads, (std::vector<std::uint64_t>{g.vertex(0, 0), g.vertex(0, 1)}));
}

TEST(Matching, WorkedExample) {
  auto v = Word::parse(kBin, "00011011");
  AstuteGraph g(kBin, 1, 2);
  auto secs = sections(g, cycle_of_word(g, v.symbols()));
  auto m = distribution_matching(g, secs);
  // {0:(0,0), 1:(1,1), 2:(0,1), 3:(1,0)} as (word, residue)
  EXPECT_EQ(m, (std::vector<std::uint64_t>{g.vertex(0, 0), g.vertex(1, 1), g.vertex(0, 1), g.vertex(1, 0)}));
}

TEST(Matching, PerfectAndInsideSections) {
  for (std::string a : {"01", "012"})
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t k = 1; k <= n; ++k) {
        if (n % k) continue;
        Alphabet al(a);
        auto r = eulerian_perfect_necklace(al, n, k);
        AstuteGraph g(al, n - 1, k);
        auto secs = sections(g, cycle_of_word(g, r.necklace.word.symbols()));
        auto m = distribution_matching(g, secs);
        ASSERT_EQ(m.size(), g.vertex_count());
        std::set<std::uint64_t> distinct(m.begin(), m.end());
        EXPECT_EQ(distinct.size(), m.size());
        for (auto& s : secs)
          EXPECT_NE(std::find(s.heads.begin(), s.heads.end(), m[s.index]), s.heads.end());
      }
}

TEST(PetalsTree, WorkedExampleShape) {
  auto v = Word::parse(kBin, "00011011");
  HatEdges h(2, 2, 2);
  auto t = build_petals_tree(h, v.symbols());
  std::size_t level1 = 0, level2 = 0;
  for (auto& x : t.nodes) {
    level1 += x.level == 1;
    level2 += x.level == 2;
    EXPECT_EQ(h.sigma_count(h.code(x.start_key)), x.level);
  }
  EXPECT_EQ(level1, 4u);
  // [ss,0] and [ss,1] are one class: ss rotates to itself while the residue moves
  EXPECT_EQ(level2, 1u);
  EXPECT_EQ(t.height(), 2u);
  EXPECT_EQ(sigma_classes("01s", 2, 2), 5u);
}

TEST(PetalsTree, CoversEverySigmaClass) {
  for (std::string a : {"01", "012"})
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t k = 1; k <= n; ++k) {
        if (n % k || (a.size() == 3 && n == 3)) continue;
        Alphabet al(a);
        auto v = eulerian_perfect_necklace(al, n, k).necklace.word;
        HatEdges h(a.size(), n, k);
        auto t = build_petals_tree(h, v.symbols());
        EXPECT_EQ(t.nodes.size(), sigma_classes(a + "s", n, k)) << a << n << k;
        std::size_t len = 0;
        for (auto& x : t.nodes) {
          len += x.length;
          if (x.level > 1) EXPECT_EQ(t.nodes[x.parent].level + 1, x.level);
        }
        EXPECT_EQ(len + v.size(), h.key_count());
      }
}

TEST(LiberalInsert, WorkedExample) {
  auto v = Word::parse(kBin, "00011011");
  auto r = liberal_insert(v, 2, 2, 's');
  EXPECT_EQ(r.method, "petals");
  EXPECT_EQ(r.output.size(), 18u);
  expect_liberal_ok(v, 2, 2);
  // the input has four 0s but a (2,2)-perfect word over {0,1,s} has six,
  // so some skipped symbols cannot be sigma
  std::string out = r.output.str();
  EXPECT_EQ(std::count(out.begin(), out.end(), '0'), 6);
  EXPECT_FALSE(r.report.skipped_all_sigma);
  EXPECT_GT(r.report.skipped_non_sigma, 0u);
}

TEST(LiberalInsert, PrintedExampleWordIsNotPerfect) {
  // the hand-drawn traversal in the text, read literally
  std::string w = "0s0001s110ss01ss11";
  EXPECT_FALSE(oracle::perfect(w, "01s", 2, 2));
  EXPECT_EQ(oracle::max_circular_gap(w, 's'), 4u);
}

TEST(LiberalInsert, GridDividing) {
  for (std::string a : {"01", "012"}) {
    Alphabet al(a);
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t k = 1; k <= 3; ++k) {
        if (n % k) continue;
        expect_liberal_ok(eulerian_perfect_necklace(al, n, k).necklace.word, n, k);
      }
    for (std::size_t n = 1; n <= 3; ++n) expect_liberal_ok(ordered_necklace(al, n).word, n, n);
  }
}

TEST(LiberalInsert, GridNonDividing) {
  for (std::string a : {"01", "012"}) {
    Alphabet al(a);
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t k = 1; k <= 3; ++k) {
        if (n % k == 0) continue;
        auto r = liberal_insert(eulerian_perfect_necklace(al, n, k).necklace.word, n, k, 's');
        EXPECT_EQ(r.method, "plan");
        EXPECT_FALSE(r.plan.relaxed);
        expect_liberal_ok(eulerian_perfect_necklace(al, n, k).necklace.word, n, k);
      }
  }
}

TEST(LiberalInsert, OutsideTheGrid) {
  for (auto [b, n, k] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{
           {2, 4, 3}, {2, 5, 2}, {3, 3, 4}, {2, 1, 5}, {2, 4, 4}}) {
    Alphabet al = Alphabet::digits(b);
    expect_liberal_ok(eulerian_perfect_necklace(al, n, k).necklace.word, n, k);
  }
}

TEST(LiberalInsert, RejectsBadInput) {
  EXPECT_THROW(liberal_insert(Word::parse(kBin, "00011110"), 2, 2, 's'), Error);
  EXPECT_THROW(liberal_insert(Word::parse(kBin, "00011011"), 2, 2, '0'), Error);
}

TEST(LiberalStream, BlocksArePerfectOverAhat) {
  LiberalStream s(kBin, 's', 4);
  auto v = s.take(SIZE_MAX);
  Alphabet ah = kBin.with_sigma('s');
  std::string str = Word(ah, v).str();
  std::size_t off = 0;
  PerfectStream p(kBin, 4);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t len = n * ipow(3, n);
    std::string blk = str.substr(off, len);
    EXPECT_TRUE(oracle::perfect(blk, "01s", n, n)) << n;
    std::string in = Word(kBin, p.take(n << n)).str();
    std::size_t j = 0;
    for (char c : blk)
      if (j < in.size() && c == in[j]) ++j;
    EXPECT_EQ(j, in.size());
    off += len;
  }
  EXPECT_EQ(off, str.size());
}
