#include <gtest/gtest.h>

#include <numeric>

#include "normins/analysis.hpp"
#include "normins/necklace_gen.hpp"
#include "oracles.hpp"

using namespace normins;

namespace {
const Alphabet kBin("01");

std::size_t brute_pointed(const std::string& a, std::size_t n, std::size_t k) {
  std::size_t len = k;
  for (std::size_t i = 0; i < n; ++i) len *= a.size();
  std::size_t c = 0;
  for (auto& w : oracle::all_words(a, len)) c += oracle::perfect(w, a, n, k);
  return c;
}
}  // namespace

TEST(Ordered, Examples) {
  EXPECT_EQ(ordered_necklace(kBin, 2).word.str(), "00011011");
  EXPECT_EQ(ordered_necklace(kBin, 3).word.str(), "000001010011100101110111");
  EXPECT_EQ(ordered_necklace(kBin, 1).word.str(), "01");
  EXPECT_THROW(ordered_necklace(kBin, 0), Error);
}

TEST(Arithmetic, Examples) {
  EXPECT_EQ(arithmetic_necklace(kBin, 2, 1).word.str(), "00011011");
  auto w = arithmetic_necklace(kBin, 2, 3).word;
  EXPECT_EQ(w.str(), "00111001");
  EXPECT_TRUE(oracle::perfect(w.str(), "01", 2, 2));
  EXPECT_THROW(arithmetic_necklace(kBin, 2, 2), Error);
}

TEST(Generators, PerfectOnSmallGrid) {
  for (std::string a : {"01", "012"})
    for (std::size_t n = 1; n <= 3; ++n) {
      Alphabet al(a);
      EXPECT_TRUE(oracle::perfect(ordered_necklace(al, n).word.str(), a, n, n));
      std::uint64_t bn = ipow(a.size(), n);
      for (std::uint64_t r = 1; r < bn; ++r)
        if (std::gcd(r, a.size()) == 1)
          EXPECT_TRUE(oracle::perfect(arithmetic_necklace(al, n, r).word.str(), a, n, n));
      for (std::size_t k = 1; k <= 3; ++k)
        EXPECT_TRUE(oracle::perfect(eulerian_perfect_necklace(al, n, k).necklace.word.str(), a, n, k))
            << a << " " << n << " " << k;
    }
}

TEST(AstuteGraph, Sizes) {
  auto g = build_astute_graph(kBin, 1, 2);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.edge_count(), 8u);
  auto g0 = build_astute_graph(kBin, 0, 1);
  EXPECT_EQ(g0.vertex_count(), 1u);
  EXPECT_EQ(g0.edge_count(), 2u);
  auto g3 = build_astute_graph(Alphabet("012"), 1, 1);
  EXPECT_EQ(g3.vertex_count(), 3u);
  EXPECT_EQ(g3.edge_count(), 9u);
  EXPECT_TRUE(g3.is_strongly_connected());
}

TEST(AstuteGraph, EdgesMoveResidueAndShiftWord) {
  AstuteGraph g(Alphabet("012"), 2, 3);
  for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
    auto t = g.tail(e), h = g.head(e);
    EXPECT_EQ(g.residue(h), (g.residue(t) + 1) % 3);
    std::string lab = g.label(e).str();
    EXPECT_EQ(g.vertex_word(t).str(), lab.substr(0, 2));
    EXPECT_EQ(g.vertex_word(h).str(), lab.substr(1, 2));
  }
}

TEST(Eulerian, Examples) {
  auto r = eulerian_perfect_necklace(kBin, 2, 2);
  EXPECT_TRUE(r.cycle.is_valid(r.graph));
  std::string c = r.necklace.canonical().str();
  EXPECT_TRUE(c == "00011011" || c == "00100111") << c;
  auto d = eulerian_perfect_necklace(kBin, 3, 1).necklace.word.str();
  EXPECT_EQ(d.size(), 8u);
  EXPECT_TRUE(oracle::perfect(d, "01", 3, 1));
  EXPECT_EQ(eulerian_perfect_necklace(kBin, 1, 1).necklace.canonical().str(), "01");
}

TEST(Eulerian, CycleOfWordRoundTrips) {
  auto r = eulerian_perfect_necklace(Alphabet("012"), 2, 3);
  auto c = cycle_of_word(r.graph, r.necklace.word.symbols());
  EXPECT_TRUE(c.is_valid(r.graph));
  EXPECT_EQ(Word(r.graph.alphabet(), c.spell(r.graph)), r.necklace.word);
}

struct CountCase {
  const char* a;
  std::size_t n, k;
};

class CountVsBruteForce : public ::testing::TestWithParam<CountCase> {};

TEST_P(CountVsBruteForce, FormulaEnumerationAndExhaustiveSearchAgree) {
  auto [a, n, k] = GetParam();
  std::string as(a);
  auto brute = oracle::perfect_classes(as, n, k);
  EXPECT_EQ(count_perfect(as.size(), n, k), BigInt(brute.size()));
  Alphabet al(as);
  if (AstuteGraph(al, n - 1, k).edge_count() <= kEnumerateEdgeGuard) {
    auto e = enumerate_perfect(al, n, k);
    std::set<std::string> got;
    for (auto& w : e.words(al)) got.insert(w.str());
    EXPECT_EQ(got, brute);
    EXPECT_EQ(e.pointed, brute_pointed(as, n, k));
  }
}

INSTANTIATE_TEST_SUITE_P(Small, CountVsBruteForce,
                         ::testing::Values(CountCase{"01", 1, 1}, CountCase{"01", 2, 1},
                                           CountCase{"01", 2, 2}, CountCase{"01", 3, 1},
                                           CountCase{"01", 1, 2}, CountCase{"01", 1, 3},
                                           CountCase{"01", 1, 4}, CountCase{"01", 2, 3},
                                           CountCase{"01", 2, 4}, CountCase{"01", 3, 2},
                                           CountCase{"01", 4, 1}, CountCase{"012", 1, 1},
                                           CountCase{"012", 1, 2}, CountCase{"012", 2, 1},
                                           CountCase{"012", 1, 3}));

TEST(Enumerate, PrintedPair) {
  auto e = enumerate_perfect(kBin, 2, 2);
  std::set<std::string> got;
  for (auto& w : e.words(kBin)) got.insert(w.str());
  EXPECT_EQ(got, (std::set<std::string>{"00011011", "00100111"}));
  EXPECT_EQ(count_perfect(2, 2, 2), 2);
  auto e1 = enumerate_perfect(kBin, 2, 1);
  ASSERT_EQ(e1.classes.size(), 1u);
  EXPECT_EQ(e1.words(kBin)[0].str(), "0011");
}

TEST(Enumerate, GuardRejectsLargeInstances) { EXPECT_THROW(enumerate_perfect(kBin, 4, 4), Error); }

TEST(Count, LargeValuesAreExact) {
  // (b!)^(b^(n-1)) / b^n for k = 1: the de Bruijn count
  EXPECT_EQ(count_perfect(2, 5, 1), BigInt(2048));
  EXPECT_EQ(count_perfect(3, 2, 1), BigInt(24));
  EXPECT_THROW(count_perfect(1, 2, 2), Error);
}

TEST(Nested, PrintedWitnessesAndGenerated) {
  EXPECT_TRUE(oracle::nested("00110110", "01", 2, 2));
  auto w22 = nested_perfect(kBin, 2, 2).word.str();
  EXPECT_TRUE(oracle::nested(w22, "01", 2, 2));
  auto w14 = nested_perfect(kBin, 1, 4).word.str();
  EXPECT_TRUE(oracle::perfect(w14, "01", 1, 4));
  auto w44 = nested_perfect(kBin, 4, 4).word.str();
  EXPECT_EQ(w44.size(), 64u);
  EXPECT_TRUE(oracle::nested(w44, "01", 4, 4));
}

TEST(Nested, EnumerationMatchesBruteForce) {
  for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{
           {1, 1}, {1, 2}, {1, 4}, {2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {2, 4}}) {
    std::size_t len = k << n;
    std::size_t pointed = 0;
    std::set<std::string> classes;
    for (auto& w : oracle::all_words("01", len))
      if (oracle::nested(w, "01", n, k)) {
        ++pointed;
        classes.insert(oracle::least_rotation(w));
      }
    auto e = enumerate_nested(kBin, n, k);
    EXPECT_EQ(e.pointed, pointed) << n << "," << k;
    std::set<std::string> got;
    for (auto& c : e.classes) got.insert(Word(kBin, c).str());
    EXPECT_EQ(got, classes) << n << "," << k;
  }
}

TEST(Nested, PowerOfTwoCountsArePointedWords) {
  // 2^(2^(d+1)-1) matches the pointed count, not the class count
  EXPECT_EQ(enumerate_nested(kBin, 1, 1).pointed, 2u);
  EXPECT_EQ(enumerate_nested(kBin, 1, 1).classes.size(), 1u);
  EXPECT_EQ(enumerate_nested(kBin, 2, 2).pointed, 8u);
  EXPECT_EQ(enumerate_nested(kBin, 4, 4).pointed, 128u);
}

TEST(Streams, PerfectStreamBlocks) {
  PerfectStream s(kBin);
  auto v = s.take(2 + 8 + 24);
  std::string str = Word(kBin, v).str();
  EXPECT_EQ(str.substr(0, 2), "01");
  EXPECT_TRUE(oracle::perfect(str.substr(2, 8), "01", 2, 2));
  EXPECT_TRUE(oracle::perfect(str.substr(10, 24), "01", 3, 3));
  EXPECT_EQ(s.blocks(), 3u);
  PerfectStream f(kBin, 2);
  EXPECT_EQ(f.take(100).size(), 10u);
}

TEST(Streams, NestedStreamBlocks) {
  NestedStream s(kBin, 3);
  auto v = s.take(SIZE_MAX);
  ASSERT_EQ(v.size(), 2u + 8 + 64 + 2048);
  std::size_t off = 0;
  for (std::size_t d = 0; d <= 3; ++d) {
    std::size_t m = std::size_t{1} << d, len = m << m;
    std::span<const Symbol> blk(v.data() + off, len);
    EXPECT_TRUE(is_nested_symbols(blk, 2, m, m)) << d;
    off += len;
  }
  EXPECT_THROW(NestedStream(kBin, 4), Error);
  s.restart();
  EXPECT_EQ(s.take(2).size(), 2u);
}
