#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "stream.hpp"
#include "word.hpp"

namespace normins {

// Wildcard words over {sigma, star}; true marks sigma.
using WildcardWord = std::vector<bool>;

inline WildcardWord wildcard(const Word& w) {
  const Symbol s = w.alphabet().sigma();
  WildcardWord out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] == s;
  return out;
}

inline std::string wildcard_string(const WildcardWord& w, char sigma = 's', char star = '*') {
  std::string s;
  for (bool x : w) s.push_back(x ? sigma : star);
  return s;
}

inline Word retract(const Word& w) {
  Word out(w.alphabet().base());
  const Symbol s = w.alphabet().sigma();
  for (Symbol x : w.symbols())
    if (x != s) out.push_back(x);
  return out;
}

// Walks phi(omega_n) cyclically without materialising omega_n: position i of
// omega_n is digit i mod n of the (i div n)-th n-word over the extended
// alphabet, and it is sigma iff that digit is the last symbol.
class OrderedPattern {
 public:
  OrderedPattern(std::size_t ahat, std::size_t n) : ahat_(ahat), n_(n), digits_(n, 0) {
    if (n < 1) throw Error("order must be at least 1");
  }
  bool next_is_sigma() {
    bool s = digits_[pos_] == ahat_ - 1;
    if (++pos_ == n_) {
      pos_ = 0;
      for (std::size_t j = n_; j-- > 0;) {
        if (++digits_[j] < ahat_) break;
        digits_[j] = 0;
      }
    }
    return s;
  }

 private:
  std::size_t ahat_, n_;
  std::vector<std::size_t> digits_;
  std::size_t pos_ = 0;
};

// hat-ell_n = n |A^|^n and ell_n = n |A| |A^|^(n-1)
inline BigInt ell_hat(std::size_t b, std::size_t n) { return BigInt(n) * big_pow(BigInt(b + 1), n); }
inline BigInt ell(std::size_t b, std::size_t n) {
  return BigInt(n) * BigInt(b) * big_pow(BigInt(b + 1), n - 1);
}

struct ExpansionOrder {
  std::size_t n = 0;
  WildcardWord pattern;  // phi(omega_n)
  std::size_t ell_hat = 0, ell = 0;
  std::vector<std::size_t> index_map;  // index_map[i-1] = m(n, i)
};

inline constexpr std::uint64_t kMaxMaterialisedPattern = std::uint64_t{1} << 26;

inline ExpansionOrder expansion_order(std::size_t b, std::size_t n) {
  BigInt lh = ell_hat(b, n);
  if (lh > kMaxMaterialisedPattern) throw Error("expansion order too large to materialise");
  ExpansionOrder e;
  e.n = n;
  e.ell_hat = lh.convert_to<std::size_t>();
  OrderedPattern p(b + 1, n);
  e.pattern.resize(e.ell_hat);
  e.index_map.resize(e.ell_hat);
  std::size_t stars = 0;
  for (std::size_t i = 0; i < e.ell_hat; ++i) {
    e.pattern[i] = p.next_is_sigma();
    if (!e.pattern[i]) ++stars;
    e.index_map[i] = stars;
  }
  e.ell = stars;
  return e;
}

// m(n, i): stars among the first i symbols of phi(omega_n), 1 <= i <= hat-ell_n
inline std::size_t wildcard_index(std::size_t b, std::size_t n, std::size_t i) {
  auto e = expansion_order(b, n);
  if (i < 1 || i > e.ell_hat) throw Error("wildcard index position out of range");
  return e.index_map[i - 1];
}

// e_n applied blockwise; sigma exactly where omega_n has sigma.
inline Word expand(std::size_t n, const Word& v, char sigma) {
  const Alphabet& a = v.alphabet();
  const std::size_t b = a.size();
  BigInt l = ell(b, n);
  if (l > kMaxMaterialisedPattern || v.size() % l.convert_to<std::size_t>() != 0)
    throw Error("expand: length must be a multiple of ell_" + std::to_string(n) + " = " + l.str());
  Alphabet ahat = a.with_sigma(sigma);
  const Symbol s = ahat.sigma();
  Word out(ahat);
  if (v.empty()) return out;
  auto e = expansion_order(b, n);
  std::size_t j = 0;
  while (j < v.size())
    for (bool is_sigma : e.pattern) out.push_back(is_sigma ? s : v[j++]);
  return out;
}

// Stages i = 1, 2, ... of order 2^i. Paper mode: t_i = |A|^ell_{2^(i+1)} |A^|^(2^(i+1)).
// Scaled mode: t_i from a list, the last value repeating.
class ExpansionSchedule {
 public:
  static ExpansionSchedule paper(std::size_t b) { return ExpansionSchedule(b, {}); }
  static ExpansionSchedule scaled(std::size_t b, std::vector<BigInt> t) {
    if (t.empty()) throw Error("scaled schedule needs at least one t_i");
    for (auto& x : t)
      if (x < 1) throw Error("scaled schedule needs t_i >= 1");
    return ExpansionSchedule(b, std::move(t));
  }

  bool is_paper() const { return t_.empty(); }
  std::size_t b() const { return b_; }
  static std::size_t order(std::size_t i) { return std::size_t{1} << i; }

  BigInt t(std::size_t i) const {
    if (i < 1) throw Error("stages start at 1");
    if (!is_paper()) return t_[std::min(i, t_.size()) - 1];
    std::size_t o = order(i + 1);
    BigInt e = ell(b_, o);
    if (e > 1'000'000) throw Error("paper schedule exponent too large to evaluate");
    return big_pow(BigInt(b_), e.convert_to<unsigned long>()) * big_pow(BigInt(b_ + 1), o);
  }
  // input symbols consumed by stage i, and output symbols emitted
  BigInt input_length(std::size_t i) const { return t(i) * ell(b_, order(i)); }
  BigInt output_length(std::size_t i) const { return t(i) * ell_hat(b_, order(i)); }
  // L_i, with L_0 = 0
  BigInt L(std::size_t i) const {
    BigInt s = 0;
    for (std::size_t j = 1; j <= i; ++j) s += input_length(j);
    return s;
  }
  BigInt output_offset(std::size_t i) const {  // output symbols before stage i
    BigInt s = 0;
    for (std::size_t j = 1; j < i; ++j) s += output_length(j);
    return s;
  }
  double epsilon(std::size_t i) const {  // 1/sqrt(t_i)
    BigInt x = t(i);
    return 1.0 / std::sqrt(x.convert_to<double>());
  }

 private:
  ExpansionSchedule(std::size_t b, std::vector<BigInt> t) : b_(b), t_(std::move(t)) {
    if (b < 2) throw Error("alphabet needs at least 2 symbols");
  }
  std::size_t b_;
  std::vector<BigInt> t_;
};

inline double log2_big(const BigInt& x) {
  if (x <= 0) throw Error("log of non-positive value");
  std::size_t msb = boost::multiprecision::msb(x);
  if (msb < 60) return std::log2(x.convert_to<double>());
  BigInt top = x >> (msb - 52);
  return static_cast<double>(msb - 52) + std::log2(top.convert_to<double>());
}

// ell_{2^(i+1)} <= log |v_i| with |v_i| = t_i ell_{2^i}, in base 2 and base |A^|
struct ScheduleLogCheck {
  std::size_t stage = 0;
  double lhs = 0, log2_len = 0, logb_len = 0;
  bool holds_base2 = false, holds_base_ahat = false;
};

inline ScheduleLogCheck check_schedule_log(const ExpansionSchedule& s, std::size_t i) {
  ScheduleLogCheck c;
  c.stage = i;
  c.lhs = ell(s.b(), ExpansionSchedule::order(i + 1)).convert_to<double>();
  c.log2_len = log2_big(s.input_length(i));
  c.logb_len = c.log2_len / std::log2(static_cast<double>(s.b() + 1));
  c.holds_base2 = c.lhs <= c.log2_len;
  c.holds_base_ahat = c.lhs <= c.logb_len;
  return c;
}

// Expands an A-stream stage by stage: sigma wherever the current
// phi(omega_{2^i}) pattern says so, otherwise the next input symbol.
class OneSymbolStream : public SymbolSource {
 public:
  OneSymbolStream(SymbolSource& input, ExpansionSchedule schedule, char sigma)
      : in_(input), sched_(std::move(schedule)), ahat_(input.alphabet().with_sigma(sigma)) {
    if (input.alphabet().size() != sched_.b())
      throw Error("schedule alphabet size does not match the input");
    enter_stage(1);
  }

  std::optional<Symbol> next() override {
    if (left_in_stage_ == 0 && !infinite_stage_) enter_stage(stage_ + 1);
    if (!infinite_stage_) --left_in_stage_;
    ++emitted_;
    if (pattern_->next_is_sigma()) return ahat_.sigma();
    auto x = in_.next();
    if (!x) throw Error("input underrun");
    ++consumed_;
    return *x;
  }
  const Alphabet& alphabet() const override { return ahat_; }
  std::size_t stage() const { return stage_; }
  std::uint64_t consumed() const { return consumed_; }
  std::uint64_t emitted() const { return emitted_; }

 private:
  void enter_stage(std::size_t i) {
    stage_ = i;
    pattern_.emplace(sched_.b() + 1, ExpansionSchedule::order(i));
    BigInt len = sched_.output_length(i);
    infinite_stage_ = len > BigInt(std::numeric_limits<std::uint64_t>::max() / 2);
    left_in_stage_ = infinite_stage_ ? 0 : len.convert_to<std::uint64_t>();
  }

  SymbolSource& in_;
  ExpansionSchedule sched_;
  Alphabet ahat_;
  std::optional<OrderedPattern> pattern_;
  std::size_t stage_ = 0;
  bool infinite_stage_ = false;
  std::uint64_t left_in_stage_ = 0, consumed_ = 0, emitted_ = 0;
};

// 1-based sigma positions <= N, from the schedule and patterns alone.
inline std::vector<std::uint64_t> sigma_positions(const ExpansionSchedule& s, std::uint64_t N) {
  std::vector<std::uint64_t> out;
  std::uint64_t pos = 0;
  for (std::size_t i = 1; pos < N; ++i) {
    BigInt len = s.output_length(i);
    std::uint64_t end = len > BigInt(N - pos) ? N : pos + len.convert_to<std::uint64_t>();
    OrderedPattern p(s.b() + 1, ExpansionSchedule::order(i));
    for (; pos < end; ++pos)
      if (p.next_is_sigma()) out.push_back(pos + 1);
  }
  return out;
}

}  // namespace normins
