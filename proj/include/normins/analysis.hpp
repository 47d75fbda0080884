#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "word.hpp"

namespace normins {

struct PerfectnessReport {
  bool is_perfect = false;
  std::size_t n = 0, k = 0;
  // first word with a repeated residue, and the residues of all its occurrences
  std::optional<Word> violation_word;
  std::vector<std::size_t> violation_residues;
};

// Circular windows of length n starting at each position p; the k
// occurrences of every n-word must have distinct residues p mod k.
inline bool is_perfect_symbols(std::span<const Symbol> w, std::size_t b, std::size_t n,
                               std::size_t k, std::uint64_t* bad_code = nullptr) {
  const std::size_t L = w.size();
  if (L == 0) return false;
  const std::uint64_t bn = ipow(b, n);
  std::vector<std::uint64_t> seen((bn * k + 63) / 64, 0);
  std::uint64_t code = 0;
  for (std::size_t j = 0; j < n; ++j) code = code * b + w[j % L];
  const std::uint64_t top = bn / b;
  for (std::size_t p = 0; p < L; ++p) {
    std::uint64_t cell = code * k + p % k;
    if (seen[cell >> 6] >> (cell & 63) & 1) {
      if (bad_code) *bad_code = code;
      return false;
    }
    seen[cell >> 6] |= std::uint64_t{1} << (cell & 63);
    code = (code % top) * b + w[(p + n) % L];
  }
  return true;
}

inline PerfectnessReport is_perfect(const Word& w, std::size_t n, std::size_t k) {
  const std::size_t b = w.alphabet().size();
  if (n < 1 || k < 1) throw Error("n and k must be at least 1");
  std::uint64_t expected = ipow(b, n) * k;
  if (w.size() != expected)
    throw Error("length " + std::to_string(w.size()) + " does not match k*b^n = " +
                std::to_string(expected));
  PerfectnessReport r;
  r.n = n;
  r.k = k;
  std::uint64_t bad = 0;
  r.is_perfect = is_perfect_symbols(w.symbols(), b, n, k, &bad);
  if (!r.is_perfect) {
    auto u = decode(bad, n, b);
    r.violation_word = Word(w.alphabet(), u);
    const std::size_t L = w.size();
    for (std::size_t p = 0; p < L; ++p) {
      bool eq = true;
      for (std::size_t j = 0; j < n && eq; ++j) eq = w[(p + j) % L] == u[j];
      if (eq) r.violation_residues.push_back(p % k);
    }
  }
  return r;
}

inline bool is_nested_symbols(std::span<const Symbol> w, std::size_t b, std::size_t n,
                              std::size_t k) {
  if (!is_perfect_symbols(w, b, n, k)) return false;
  if (n == 1) return true;
  std::size_t part = w.size() / b;
  for (std::size_t i = 0; i < b; ++i)
    if (!is_nested_symbols(w.subspan(i * part, part), b, n - 1, k)) return false;
  return true;
}

inline bool is_nested(const Word& w, std::size_t n, std::size_t k) {
  const std::size_t b = w.alphabet().size();
  if (n < 1 || k < 1) throw Error("n and k must be at least 1");
  if (w.size() != ipow(b, n) * k)
    throw Error("length " + std::to_string(w.size()) + " does not match k*b^n = " +
                std::to_string(ipow(b, n) * k));
  return is_nested_symbols(w.symbols(), b, n, k);
}

// aligned occurrence counts of every l-word, indexed by code
inline std::vector<std::uint64_t> aligned_counts(std::span<const Symbol> v, std::size_t b,
                                                 std::size_t l) {
  std::vector<std::uint64_t> c(ipow(b, l), 0);
  for (std::size_t i = 0; i + l <= v.size(); i += l) ++c[encode(v.subspan(i, l), b)];
  return c;
}

// all-position occurrence counts of every l-word
inline std::vector<std::uint64_t> occurrence_counts(std::span<const Symbol> v, std::size_t b,
                                                    std::size_t l) {
  std::vector<std::uint64_t> c(ipow(b, l), 0);
  if (v.size() < l) return c;
  const std::uint64_t top = c.size() / b;
  std::uint64_t code = encode(v.subspan(0, l), b);
  for (std::size_t i = 0;; ++i) {
    ++c[code];
    if (i + l >= v.size()) break;
    code = (code % top) * b + v[i + l];
  }
  return c;
}

struct DiscrepancyReport {
  std::size_t l = 0;
  Rational delta = 0;
  Word argmax;
  double value() const { return to_double(delta); }
};

inline constexpr std::uint64_t kDiscrepancyWordGuard = std::uint64_t{1} << 20;

// max over l-words u of | aligned(u) / floor(|v|/l) - b^-l |, exactly
inline DiscrepancyReport discrete_discrepancy(const Word& v, std::size_t l) {
  const std::size_t b = v.alphabet().size();
  if (l < 1 || v.size() < l) throw Error("discrete discrepancy needs 1 <= l <= |v|");
  if (ipow(b, l) > kDiscrepancyWordGuard)
    throw Error("discrete discrepancy guard exceeded: b^l > 2^20");
  auto c = aligned_counts(v.symbols(), b, l);
  auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  Rational denom = Rational(static_cast<long long>(v.size() / l));
  Rational expect = Rational(1, BigInt(ipow(b, l)));
  Rational dhi = abs(Rational(BigInt(*hi)) / denom - expect);
  Rational dlo = abs(Rational(BigInt(*lo)) / denom - expect);
  DiscrepancyReport r;
  r.l = l;
  auto pick = dhi >= dlo ? hi : lo;
  r.delta = dhi >= dlo ? dhi : dlo;
  r.argmax = Word(v.alphabet(), decode(static_cast<std::uint64_t>(pick - c.begin()), l, b));
  return r;
}

struct CrucialReport {
  bool point1 = true, point2 = true, point3 = true;
  bool point3_checked = false;
  // smallest distance to a bound seen per point (negative means violated)
  long long slack1 = LLONG_MAX, slack2 = LLONG_MAX, slack3 = LLONG_MAX;
  std::string witness;  // first violation, "point u i"
  std::vector<std::size_t> failing_lengths;  // |u| with a violation, any point
  bool ok() const { return point1 && point2 && point3; }
};

namespace detail {
// floor and ceil of (k/l) b^e for e >= 0, or of (k/l) / b^-e otherwise
inline std::pair<long long, long long> crucial_bounds(std::size_t k, std::size_t l,
                                                      std::size_t b, long long e) {
  BigInt num = k, den = l;
  if (e >= 0) num *= big_pow(BigInt(b), static_cast<unsigned long>(e));
  else den *= big_pow(BigInt(b), static_cast<unsigned long>(-e));
  BigInt fl = num / den;
  BigInt ce = (num + den - 1) / den;
  return {fl.convert_to<long long>(), ce.convert_to<long long>()};
}
}  // namespace detail

// The aligned-occurrence bounds for perfect necklaces; Point 3 runs when the
// b parts of a nested split are given (each consecutive pair s, t).
inline CrucialReport check_crucial(const Word& v, std::size_t n, std::size_t k,
                                   bool nested_split = false) {
  const std::size_t b = v.alphabet().size();
  auto s = v.symbols();
  CrucialReport r;
  auto record = [&](int point, long long lo, long long hi, long long cnt, std::size_t l,
                    std::uint64_t code, std::size_t i) {
    long long slack = std::min(cnt - lo, hi - cnt);
    bool& ok = point == 1 ? r.point1 : point == 2 ? r.point2 : r.point3;
    long long& sl = point == 1 ? r.slack1 : point == 2 ? r.slack2 : r.slack3;
    sl = std::min(sl, slack);
    if (slack < 0 && std::find(r.failing_lengths.begin(), r.failing_lengths.end(), l) == r.failing_lengths.end())
      r.failing_lengths.push_back(l);
    if (slack < 0 && ok) {
      ok = false;
      if (r.witness.empty())
        r.witness = "point " + std::to_string(point) + " u=" +
                    Word(v.alphabet(), decode(code, l, b)).str() + " i=" + std::to_string(i);
    }
  };
  for (std::size_t l = 1; l <= n; ++l) {
    if (ipow(b, l) > kDiscrepancyWordGuard) break;
    auto [fl, ce] = detail::crucial_bounds(k, l, b, static_cast<long long>(n) - l);
    for (std::size_t i = 0; i < l; ++i) {
      auto c = aligned_counts(s.subspan(i), b, l);
      for (std::uint64_t u = 0; u < c.size(); ++u) {
        if (i == 0) record(1, fl - 1, ce, static_cast<long long>(c[u]), l, u, i);
        record(2, fl - 2, ce, static_cast<long long>(c[u]), l, u, i);
      }
    }
  }
  if (nested_split && n >= 2) {
    r.point3_checked = true;
    const std::size_t part = s.size() / b;
    for (std::size_t j = 0; j + 1 < b; ++j) {
      auto S = s.subspan(j * part, part), T = s.subspan((j + 1) * part, part);
      for (std::size_t l = 1; l <= n; ++l) {
        if (ipow(b, l) > kDiscrepancyWordGuard) break;
        auto [fl, ce] = detail::crucial_bounds(k, l, b, static_cast<long long>(n) - 1 - l);
        for (std::size_t i = 0; i < l; ++i) {
          // s[|s|-i+1, |s|] t[1, |t|-i]  and  s[1+i, |s|] t[1, i]
          std::vector<Symbol> x(S.end() - i, S.end());
          x.insert(x.end(), T.begin(), T.end() - i);
          std::vector<Symbol> y(S.begin() + i, S.end());
          y.insert(y.end(), T.begin(), T.begin() + i);
          auto cx = aligned_counts(x, b, l), cy = aligned_counts(y, b, l);
          for (std::uint64_t u = 0; u < cx.size(); ++u) {
            record(3, fl - 2, ce + 1, static_cast<long long>(cx[u]), l, u, i);
            record(3, fl - 2, ce + 1, static_cast<long long>(cy[u]), l, u, i);
          }
        }
      }
    }
  }
  return r;
}

struct GapReport {
  std::vector<std::size_t> positions;  // 1-based
  bool insufficient = false;           // fewer than two sigmas
  std::size_t max_gap = 0;
  std::optional<double> bound;
  bool pass = true;
};

// Symbols strictly between consecutive sigmas; circular mode also counts
// the wrap from the last sigma to the first.
inline GapReport sigma_gaps(std::span<const Symbol> w, Symbol sigma, bool circular,
                            std::optional<double> bound = std::nullopt) {
  GapReport r;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == sigma) r.positions.push_back(i + 1);
  r.bound = bound;
  if (r.positions.size() < 2 && !(circular && r.positions.size() == 1)) {
    r.insufficient = true;
    r.pass = false;
    return r;
  }
  for (std::size_t i = 1; i < r.positions.size(); ++i)
    r.max_gap = std::max(r.max_gap, r.positions[i] - r.positions[i - 1] - 1);
  if (circular)
    r.max_gap = std::max(r.max_gap, w.size() - r.positions.back() + r.positions.front() - 1);
  if (bound) r.pass = static_cast<double>(r.max_gap) <= *bound;
  return r;
}

inline GapReport sigma_gaps(const Word& w, bool circular,
                            std::optional<double> bound = std::nullopt) {
  return sigma_gaps(w.symbols(), w.alphabet().sigma(), circular, bound);
}

// gap_around[N-1] for N from the first sigma to the last: the gap of the
// sigma-free run containing N, or the larger neighbouring run when N is a
// sigma. Positions outside [first, last] sigma are left at -1.
inline std::vector<long long> gap_function(std::span<const Symbol> w, Symbol sigma) {
  std::vector<long long> g(w.size(), -1);
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == sigma) pos.push_back(i);
  for (std::size_t j = 1; j < pos.size(); ++j) {
    long long gap = static_cast<long long>(pos[j] - pos[j - 1] - 1);
    for (std::size_t p = pos[j - 1]; p <= pos[j]; ++p) g[p] = std::max(g[p], gap);
  }
  return g;
}

// gap around N <= ceil(2b + log_{b+1} N) for every N >= from inside the
// sigma-covered part of the prefix
struct StreamGapReport {
  std::size_t checked = 0;
  bool pass = true;
  std::size_t first_violation = 0;  // 1-based N
  long long worst_margin = LLONG_MAX;
  std::size_t worst_at = 0;
};

inline StreamGapReport check_stream_gap_bound(std::span<const Symbol> w, Symbol sigma, std::size_t b,
                                              std::size_t from) {
  StreamGapReport r;
  auto g = gap_function(w, sigma);
  const double lb = std::log(static_cast<double>(b + 1));
  for (std::size_t N = std::max<std::size_t>(from, 1); N <= w.size(); ++N) {
    if (g[N - 1] < 0) continue;
    ++r.checked;
    auto bound = static_cast<long long>(
        std::ceil(2.0 * static_cast<double>(b) + std::log(static_cast<double>(N)) / lb - 1e-12));
    long long margin = bound - g[N - 1];
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_at = N;
    }
    if (margin < 0 && r.pass) {
      r.pass = false;
      r.first_violation = N;
    }
  }
  return r;
}

struct PsReport {
  double value = 0;
  std::vector<double> per_length;  // index l-1
  Word argmax;
};

// max over |u| <= max_len of occ(prefix,u) * b^|u| / |prefix|
inline PsReport ps_statistic(const Word& prefix, std::size_t max_len) {
  const std::size_t b = prefix.alphabet().size();
  if (max_len < 1) throw Error("max_len must be at least 1");
  if (prefix.size() < ipow(b, max_len) * 100)
    throw Error("prefix shorter than the sanity floor b^max_len * 100");
  PsReport r;
  for (std::size_t l = 1; l <= max_len; ++l) {
    auto c = occurrence_counts(prefix.symbols(), b, l);
    auto it = std::max_element(c.begin(), c.end());
    double v = static_cast<double>(*it) * static_cast<double>(ipow(b, l)) /
               static_cast<double>(prefix.size());
    r.per_length.push_back(v);
    if (v > r.value) {
      r.value = v;
      r.argmax = Word(prefix.alphabet(), decode(static_cast<std::uint64_t>(it - c.begin()), l, b));
    }
  }
  return r;
}

inline double star_discrepancy_points(std::vector<double> x) {
  if (x.empty()) throw Error("star discrepancy of an empty point set");
  std::sort(x.begin(), x.end());
  const double N = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / N - x[i]);
    d = std::max(d, x[i] - static_cast<double>(i) / N);
  }
  return d;
}

inline constexpr std::size_t kStarGuardDigits = 64;

// Points b^i x mod 1 for i = 0..N-1, each read from the following digits
// and truncated below 2^-53.
inline double star_discrepancy(std::span<const Symbol> digits, std::size_t b, std::size_t N) {
  if (N < 1) throw Error("N must be at least 1");
  if (digits.size() < N + kStarGuardDigits)
    throw Error("star discrepancy needs N + 64 digits");
  std::size_t T = 0;
  for (double p = 1; p * static_cast<double>(b) <= 9007199254740992.0; p *= static_cast<double>(b)) ++T;
  std::vector<double> x(N);
  for (std::size_t i = 0; i < N; ++i) {
    std::uint64_t v = 0;
    for (std::size_t t = 0; t < T; ++t) v = v * b + digits[i + t];
    x[i] = static_cast<double>(v) / std::pow(static_cast<double>(b), static_cast<double>(T));
  }
  return star_discrepancy_points(std::move(x));
}

struct SubsequenceReport {
  bool subsequence = false;
  bool skipped_all_sigma = false;
  std::size_t skipped = 0;
  std::size_t skipped_non_sigma = 0;
};

// Greedy left-to-right embedding of v into w. When w's alphabet has a sigma,
// also report whether every skipped symbol is sigma.
inline SubsequenceReport subsequence_report(std::span<const Symbol> v, std::span<const Symbol> w,
                                            std::optional<Symbol> sigma) {
  SubsequenceReport r;
  std::size_t j = 0;
  for (Symbol x : w) {
    if (j < v.size() && x == v[j]) {
      ++j;
    } else {
      ++r.skipped;
      if (!sigma || x != *sigma) ++r.skipped_non_sigma;
    }
  }
  r.subsequence = j == v.size();
  r.skipped_all_sigma = r.subsequence && r.skipped_non_sigma == 0;
  return r;
}

inline bool is_subsequence(const Word& v, const Word& w) {
  return subsequence_report(v.symbols(), w.symbols(), std::nullopt).subsequence;
}

struct ConversionReport {
  bool aligned_applicable = false;
  bool aligned_ok = true;
  Rational eps_long = 0, delta_short = 0, aligned_bound = 0;
  bool unaligned_applicable = false;
  bool unaligned_ok = true;
  Rational eps_n = 0;
  std::string witness;
  bool ok() const { return aligned_ok && unaligned_ok; }
};

// Measures the two discrepancy conversions: Delta_n <= |S|^((m-1)n) Delta_mn
// for v in (S^mn)*, and occ(v,x) <= |v|((l-1)/n + |S|^-l + |S|^n Delta_n) - (l-1)
// for every x of length l < n, v in (S^n)*. Comparisons are non-strict
// because the measured discrepancy plays the role of epsilon.
inline ConversionReport check_discrepancy_conversion(const Word& v, std::size_t m, std::size_t n) {
  const std::size_t b = v.alphabet().size();
  if (m < 1 || n < 1) throw Error("m and n must be at least 1");
  ConversionReport r;
  if (v.size() % (m * n) == 0 && v.size() >= m * n && ipow(b, m * n) <= kDiscrepancyWordGuard) {
    r.aligned_applicable = true;
    r.eps_long = discrete_discrepancy(v, m * n).delta;
    r.delta_short = discrete_discrepancy(v, n).delta;
    r.aligned_bound = r.eps_long * Rational(big_pow(BigInt(b), static_cast<unsigned long>((m - 1) * n)));
    r.aligned_ok = r.delta_short <= r.aligned_bound;
    if (!r.aligned_ok) r.witness = "aligned conversion fails for window " + std::to_string(n);
  }
  if (v.size() % n == 0 && v.size() >= n && n >= 2) {
    r.unaligned_applicable = true;
    r.eps_n = discrete_discrepancy(v, n).delta;
    const Rational len = Rational(static_cast<long long>(v.size()));
    const Rational bn = Rational(big_pow(BigInt(b), static_cast<unsigned long>(n)));
    for (std::size_t l = 1; l < n; ++l) {
      auto c = occurrence_counts(v.symbols(), b, l);
      Rational bound = len * (Rational(static_cast<long long>(l - 1), static_cast<long long>(n)) +
                              Rational(BigInt(1), big_pow(BigInt(b), static_cast<unsigned long>(l))) +
                              bn * r.eps_n) -
                       Rational(static_cast<long long>(l - 1));
      for (std::uint64_t u = 0; u < c.size(); ++u) {
        if (Rational(BigInt(c[u])) > bound) {
          r.unaligned_ok = false;
          if (r.witness.empty())
            r.witness = "occurrence bound fails for " + Word(v.alphabet(), decode(u, l, b)).str();
        }
      }
    }
  }
  return r;
}

}  // namespace normins
