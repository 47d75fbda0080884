#include <gtest/gtest.h>

#include <random>

#include "normins/analysis.hpp"
#include "normins/necklace_gen.hpp"
#include "oracles.hpp"

using namespace normins;

namespace {
const Alphabet kBin("01");
const Alphabet kHat = kBin.with_sigma('s');
Word W(std::string_view s) { return Word::parse(kBin, s); }

// max over l-words of |aligned count / blocks - b^-l|, exact
Rational naive_delta(const std::string& v, const std::string& a, std::size_t l) {
  std::size_t blocks = v.size() / l;
  Rational expect(1, BigInt(ipow(a.size(), l)));
  Rational best = 0;
  for (auto& u : oracle::all_words(a, l)) {
    Rational d = Rational(static_cast<long long>(oracle::aligned(v, u)), static_cast<long long>(blocks)) - expect;
    if (d < 0) d = -d;
    best = std::max(best, d);
  }
  return best;
}
}  // namespace

TEST(IsPerfect, Examples) {
  EXPECT_TRUE(is_perfect(W("00011011"), 2, 2).is_perfect);
  EXPECT_FALSE(is_perfect(W("00011110"), 2, 2).is_perfect);
  EXPECT_TRUE(is_perfect(W("000110101111001010011100"), 3, 3).is_perfect);
  EXPECT_FALSE(is_perfect(W("000101110111010001011100"), 3, 3).is_perfect);
  EXPECT_THROW(is_perfect(W("0001101"), 2, 2), Error);
}

TEST(IsPerfect, ViolationIsReal) {
  auto r = is_perfect(W("00011110"), 2, 2);
  ASSERT_TRUE(r.violation_word);
  std::string u = r.violation_word->str();
  std::string w = "00011110";
  std::vector<std::size_t> res;
  for (std::size_t p = 0; p < w.size(); ++p)
    if ((w + w).compare(p, 2, u) == 0) res.push_back(p % 2);
  EXPECT_EQ(r.violation_residues, res);
  std::set<std::size_t> distinct(res.begin(), res.end());
  EXPECT_LT(distinct.size(), res.size());
}

TEST(IsPerfect, AgreesWithOracleExhaustively) {
  for (auto& w : oracle::all_words("01", 8))
    ASSERT_EQ(is_perfect(W(w), 2, 2).is_perfect, oracle::perfect(w, "01", 2, 2)) << w;
  for (auto& w : oracle::all_words("012", 9))
    ASSERT_EQ(is_perfect(Word::parse(Alphabet("012"), w), 1, 3).is_perfect, oracle::perfect(w, "012", 1, 3))
        << w;
}

TEST(IsNested, Examples) {
  EXPECT_TRUE(is_nested(W("00110110"), 2, 2));
  EXPECT_FALSE(is_nested(ordered_necklace(kHat, 2).word, 2, 2));
  EXPECT_TRUE(is_perfect(ordered_necklace(kHat, 2).word, 2, 2).is_perfect);
  std::string rows[4] = {"0000111101011010", "0011110001101001", "0001111001001011",
                         "0010110101111000"};
  for (auto& r : rows) EXPECT_TRUE(is_perfect(W(r), 2, 4).is_perfect);
  EXPECT_TRUE(is_nested(W(rows[0] + rows[1]), 3, 4));
  EXPECT_TRUE(is_nested(W(rows[2] + rows[3]), 3, 4));
  EXPECT_TRUE(is_nested(W(rows[0] + rows[1] + rows[2] + rows[3]), 4, 4));
}

TEST(IsNested, AgreesWithOracleExhaustively) {
  for (auto& w : oracle::all_words("01", 16))
    ASSERT_EQ(is_nested(W(w), 2, 4), oracle::nested(w, "01", 2, 4)) << w;
}

TEST(Discrepancy, Examples) {
  EXPECT_EQ(discrete_discrepancy(W("00000000"), 2).delta, Rational(3, 4));
  EXPECT_EQ(discrete_discrepancy(W("00011011"), 2).delta, Rational(0));
  EXPECT_EQ(discrete_discrepancy(W("00000000"), 2).argmax.str(), "00");
}

TEST(Discrepancy, MatchesOracle) {
  std::mt19937 rng(5);
  for (int it = 0; it < 200; ++it) {
    std::size_t len = 3 + rng() % 40, l = 1 + rng() % 3;
    std::string v;
    for (std::size_t i = 0; i < len; ++i) v += "01"[rng() % 2];
    if (v.size() < l) continue;
    EXPECT_EQ(discrete_discrepancy(W(v), l).delta, naive_delta(v, "01", l)) << v << " " << l;
  }
}

TEST(Crucial, Examples) {
  auto r = check_crucial(W("00011011"), 2, 2);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.point3_checked);
  auto bad = check_crucial(W("00000000"), 2, 2);
  EXPECT_FALSE(bad.point1);
  EXPECT_FALSE(bad.witness.empty());
  auto n = check_crucial(W("00110110"), 2, 2, true);
  EXPECT_TRUE(n.point3_checked);
  EXPECT_TRUE(n.ok());
}

TEST(Crucial, BoundsForSingleSymbols) {
  // |u| = 1: floor(k b^(n-1)) - 1 <= count <= ceil(k b^(n-1))
  EXPECT_EQ(detail::crucial_bounds(3, 1, 2, 2), (std::pair<long long, long long>{12, 12}));
  EXPECT_EQ(detail::crucial_bounds(2, 2, 2, 0), (std::pair<long long, long long>{1, 1}));
  EXPECT_EQ(detail::crucial_bounds(3, 2, 2, 0), (std::pair<long long, long long>{1, 2}));
  EXPECT_EQ(detail::crucial_bounds(3, 2, 2, -1), (std::pair<long long, long long>{0, 1}));
}

TEST(Gaps, Examples) {
  auto w = Word::parse(kHat, "0s0001s110ss01ss11");
  auto g = sigma_gaps(w, false);
  EXPECT_EQ(g.positions, (std::vector<std::size_t>{2, 7, 11, 12, 15, 16}));
  EXPECT_EQ(g.max_gap, 4u);
  EXPECT_EQ(sigma_gaps(Word::parse(kHat, "sss"), false).max_gap, 0u);
  EXPECT_TRUE(sigma_gaps(Word::parse(kHat, "0s0"), false).insufficient);
  EXPECT_EQ(sigma_gaps(Word::parse(kHat, "0s00"), true).max_gap, 3u);
  EXPECT_FALSE(sigma_gaps(w, false, 3.0).pass);
  EXPECT_TRUE(sigma_gaps(w, false, 4.0).pass);
}

TEST(Gaps, CircularMatchesOracle) {
  std::mt19937 rng(9);
  for (int it = 0; it < 300; ++it) {
    std::string v;
    std::size_t len = 1 + rng() % 30;
    for (std::size_t i = 0; i < len; ++i) v += "01s"[rng() % 3];
    if (std::count(v.begin(), v.end(), 's') == 0) continue;
    EXPECT_EQ(sigma_gaps(Word::parse(kHat, v), true).max_gap, oracle::max_circular_gap(v, 's')) << v;
  }
}

TEST(Gaps, GapFunction) {
  auto w = Word::parse(kHat, "0s00s0s");
  auto g = gap_function(w.symbols(), kHat.sigma());
  EXPECT_EQ(g, (std::vector<long long>{-1, 2, 2, 2, 2, 1, 1}));
}

TEST(Gaps, StreamBoundReportsFirstViolation) {
  // b = 2: bound at N is ceil(4 + log3 N); a gap of 6 breaks it below N = 9
  std::string v = "s000000s" + std::string(20, 's');
  auto w = Word::parse(kHat, v);
  auto r = check_stream_gap_bound(w.symbols(), kHat.sigma(), 2, 1);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_violation, 1u);
  auto ok = check_stream_gap_bound(w.symbols(), kHat.sigma(), 2, 9);
  EXPECT_TRUE(ok.pass);
}

TEST(Ps, Examples) {
  std::string alt;
  for (int i = 0; i < 5000; ++i) alt += "01";
  EXPECT_DOUBLE_EQ(ps_statistic(W(alt), 1).value, 1.0);
  EXPECT_DOUBLE_EQ(ps_statistic(W(std::string(10000, '0')), 1).value, 2.0);
  EXPECT_THROW(ps_statistic(W(std::string(100, '0')), 2), Error);
}

TEST(StarDiscrepancy, Examples) {
  EXPECT_DOUBLE_EQ(star_discrepancy_points({0.5}), 0.5);
  EXPECT_DOUBLE_EQ(star_discrepancy_points({0.25, 0.75}), 0.25);
  std::vector<Symbol> zeros(100, 0);
  EXPECT_DOUBLE_EQ(star_discrepancy(zeros, 2, 10), 1.0);
  EXPECT_THROW(star_discrepancy(zeros, 2, 40), Error);
}

TEST(StarDiscrepancy, PointsReadFromDigits) {
  // 0.0101... in base 2 is 1/3, 0.1010... is 2/3
  std::vector<Symbol> d;
  for (int i = 0; i < 200; ++i) d.push_back(static_cast<Symbol>(i % 2));
  double got = star_discrepancy(d, 2, 2);
  EXPECT_NEAR(got, 1.0 / 3.0, 1e-12);
}

TEST(Subsequence, Examples) {
  auto r = subsequence_report(W("0011").symbols(), Word::parse(kHat, "0s0s11").symbols(), kHat.sigma());
  EXPECT_TRUE(r.subsequence);
  EXPECT_EQ(r.skipped, 2u);
  EXPECT_TRUE(r.skipped_all_sigma);
  EXPECT_FALSE(is_subsequence(W("01"), W("10")));
  auto s = subsequence_report(W("01").symbols(), Word::parse(kHat, "0s11").symbols(), kHat.sigma());
  EXPECT_TRUE(s.subsequence);
  EXPECT_FALSE(s.skipped_all_sigma);
  EXPECT_EQ(s.skipped_non_sigma, 1u);
}

TEST(Conversion, HoldsOnPerfectNecklaces) {
  auto v = eulerian_perfect_necklace(kBin, 4, 4).necklace.word;
  auto r = check_discrepancy_conversion(v, 2, 2);
  EXPECT_TRUE(r.aligned_applicable);
  EXPECT_TRUE(r.unaligned_applicable);
  EXPECT_TRUE(r.ok()) << r.witness;
}

TEST(Crucial, FailsWhenLengthDoesNotDivideK) {
  // (2,3)-perfect: 01 sits at three aligned positions, above ceil(3/2)
  auto r = check_crucial(W("000101011110"), 2, 3);
  EXPECT_FALSE(r.point1);
  EXPECT_EQ(r.failing_lengths, (std::vector<std::size_t>{2}));
  // the nested (4,4) example built from the (1,4) rows: 001 occurs 4 times
  auto n = check_crucial(W("0000111101011010001111000110100100011110010010110010110101111000"), 4, 4, true);
  EXPECT_FALSE(n.point1);
  EXPECT_EQ(n.failing_lengths, (std::vector<std::size_t>{3}));
}

TEST(Crucial, HoldsForLengthsDividingK) {
  for (std::string a : {"01", "012"})
    for (std::size_t n = 1; n <= 4; ++n)
      for (std::size_t k = 1; k <= 4; ++k) {
        if (ipow(a.size(), n) * k > 4096) continue;
        auto w = eulerian_perfect_necklace(Alphabet(a), n, k).necklace.word;
        for (auto l : check_crucial(w, n, k).failing_lengths) EXPECT_NE(k % l, 0u) << a << n << k;
        for (std::size_t l = 1; l <= n; ++l)
          if (k % l == 0)
            EXPECT_LE(discrete_discrepancy(w, l).delta, Rational(2, static_cast<long long>(w.size() / l)));
      }
}
