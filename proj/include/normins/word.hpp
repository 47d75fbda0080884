#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphabet.hpp"

namespace normins {

// A finite word over an alphabet, stored as symbol indices. External
// positions are 1-based; operator[] is the raw 0-based view.
class Word {
 public:
  Word() = default;
  explicit Word(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  Word(Alphabet alphabet, std::vector<Symbol> data)
      : alphabet_(std::move(alphabet)), data_(std::move(data)) {
    for (Symbol s : data_)
      if (s >= alphabet_.size()) throw Error("symbol index exceeds alphabet size");
  }

  static Word parse(const Alphabet& alphabet, std::string_view text) {
    std::vector<Symbol> data;
    data.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      int s = alphabet.find(text[i]);
      if (s < 0)
        throw Error("bad symbol '" + std::string(1, text[i]) + "' at position " +
                    std::to_string(i + 1));
      data.push_back(static_cast<Symbol>(s));
    }
    Word w(alphabet);
    w.data_ = std::move(data);
    return w;
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Symbol operator[](std::size_t i) const { return data_[i]; }
  // 1-based access
  Symbol at(std::size_t pos) const {
    if (pos < 1 || pos > data_.size()) throw Error("position out of range");
    return data_[pos - 1];
  }
  // v[i, j], 1-based and inclusive
  Word slice(std::size_t i, std::size_t j) const {
    if (i < 1 || j > data_.size() || i > j + 1) throw Error("slice out of range");
    return Word(alphabet_, std::vector<Symbol>(data_.begin() + (i - 1), data_.begin() + j));
  }

  std::span<const Symbol> symbols() const { return data_; }
  std::vector<Symbol>& mutable_symbols() { return data_; }
  void push_back(Symbol s) { data_.push_back(s); }

  std::string str() const {
    std::string s;
    s.reserve(data_.size());
    for (Symbol x : data_) s.push_back(alphabet_.symbol(x));
    return s;
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.data_ == b.data_ && a.alphabet_.chars() == b.alphabet_.chars();
  }
  friend bool operator<(const Word& a, const Word& b) { return a.data_ < b.data_; }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> data_;
};

// theta^t(w): move the first t symbols to the back.
inline Word rotate(const Word& w, std::size_t t) {
  if (w.empty()) throw Error("empty word has no rotation");
  std::vector<Symbol> d(w.symbols().begin(), w.symbols().end());
  std::rotate(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(t % d.size()), d.end());
  return Word(w.alphabet(), std::move(d));
}

inline std::uint64_t occurrences(std::span<const Symbol> v, std::span<const Symbol> u) {
  if (u.empty()) throw Error("pattern must be non-empty");
  if (u.size() > v.size()) return 0;
  std::uint64_t c = 0;
  for (std::size_t i = 0; i + u.size() <= v.size(); ++i)
    if (std::equal(u.begin(), u.end(), v.begin() + i)) ++c;
  return c;
}
inline std::uint64_t occurrences(const Word& v, const Word& u) {
  return occurrences(v.symbols(), u.symbols());
}

// occurrences starting at 1-based positions congruent to 1 mod |u|
inline std::uint64_t aligned_occurrences(std::span<const Symbol> v, std::span<const Symbol> u) {
  if (u.empty()) throw Error("pattern must be non-empty");
  std::uint64_t c = 0;
  for (std::size_t i = 0; i + u.size() <= v.size(); i += u.size())
    if (std::equal(u.begin(), u.end(), v.begin() + i)) ++c;
  return c;
}
inline std::uint64_t aligned_occurrences(const Word& v, const Word& u) {
  return aligned_occurrences(v.symbols(), u.symbols());
}

// Index of the lexicographically least rotation (Booth).
inline std::size_t least_rotation(std::span<const Symbol> s) {
  std::size_t n = s.size();
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Symbol sj = s[j % n];
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && sj != s[(k + i + 1) % n]) {
      if (sj < s[(k + i + 1) % n]) k = j - i - 1;
      i = f[i];
    }
    if (sj != s[(k + i + 1) % n]) {  // i == -1
      if (sj < s[k % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

inline Word canonical_necklace(const Word& w) {
  if (w.empty()) throw Error("empty word has no canonical necklace");
  return rotate(w, least_rotation(w.symbols()));
}

inline std::vector<Symbol> canonical_symbols(std::span<const Symbol> s) {
  std::vector<Symbol> d(s.begin(), s.end());
  if (!d.empty())
    std::rotate(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(least_rotation(s)), d.end());
  return d;
}

// Integer code of a word, most significant symbol first.
inline std::uint64_t encode(std::span<const Symbol> w, std::size_t base) {
  std::uint64_t c = 0;
  for (Symbol s : w) c = c * base + s;
  return c;
}
inline std::vector<Symbol> decode(std::uint64_t code, std::size_t len, std::size_t base) {
  std::vector<Symbol> w(len);
  for (std::size_t i = len; i-- > 0;) {
    w[i] = static_cast<Symbol>(code % base);
    code /= base;
  }
  return w;
}

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > UINT64_MAX / b) throw Error("integer overflow in power");
    r *= b;
  }
  return r;
}

}  // namespace normins
