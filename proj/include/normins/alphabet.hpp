#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace normins {

using Symbol = std::uint8_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered set of printable symbols. When built by with_sigma() the extra
// symbol is always the last index.
class Alphabet {
 public:
  Alphabet() { index_.fill(-1); }

  explicit Alphabet(std::string_view symbols) : Alphabet(symbols, false) {}

  static Alphabet binary() { return Alphabet("01"); }
  static Alphabet digits(std::size_t b) {
    static constexpr std::string_view kDigits =
        "0123456789abcdefghijklmnopqrstuvwxyz";
    if (b < 2 || b > kDigits.size())
      throw Error("alphabet size must be in [2, 36]");
    return Alphabet(kDigits.substr(0, b));
  }

  Alphabet with_sigma(char sigma) const {
    if (has_sigma_) throw Error("alphabet already carries an extra symbol");
    if (contains(sigma))
      throw Error(std::string("sigma '") + sigma + "' already in alphabet");
    return Alphabet(symbols_ + sigma, true);
  }

  // The base alphabet of an extended one.
  Alphabet base() const {
    if (!has_sigma_) return *this;
    return Alphabet(std::string_view(symbols_).substr(0, symbols_.size() - 1));
  }

  std::size_t size() const { return symbols_.size(); }
  bool has_sigma() const { return has_sigma_; }
  Symbol sigma() const {
    if (!has_sigma_) throw Error("alphabet has no extra symbol");
    return static_cast<Symbol>(symbols_.size() - 1);
  }
  char sigma_char() const { return symbols_[sigma()]; }

  char symbol(std::size_t i) const {
    if (i >= symbols_.size()) throw Error("symbol index out of range");
    return symbols_[i];
  }
  bool contains(char c) const { return index_[static_cast<unsigned char>(c)] >= 0; }
  Symbol index(char c) const {
    int i = index_[static_cast<unsigned char>(c)];
    if (i < 0) throw Error(std::string("symbol '") + c + "' not in alphabet");
    return static_cast<Symbol>(i);
  }
  // -1 when absent, no throw; used on hot parsing paths
  int find(char c) const { return index_[static_cast<unsigned char>(c)]; }

  const std::string& chars() const { return symbols_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_ && a.has_sigma_ == b.has_sigma_;
  }

 private:
  Alphabet(std::string_view symbols, bool sigma) : symbols_(symbols), has_sigma_(sigma) {
    std::size_t lo = 2, hi = sigma ? 37 : 36;
    if (symbols_.size() < lo || symbols_.size() > hi)
      throw Error("alphabet size must be in [2, 36]");
    index_.fill(-1);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(symbols_[i]);
      if (!std::isprint(c) || std::isspace(c))
        throw Error("alphabet symbols must be printable, non-space characters");
      if (index_[c] >= 0)
        throw Error(std::string("duplicate symbol '") + symbols_[i] + "' in alphabet");
      index_[c] = static_cast<int>(i);
    }
  }

  std::string symbols_;
  bool has_sigma_ = false;
  std::array<int, 256> index_{};
};

}  // namespace normins
