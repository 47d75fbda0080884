#pragma once

#include <cctype>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "word.hpp"

namespace normins {

// Thrown on a character outside the alphabet. position counts symbols
// (whitespace skipped), 1-based.
class BadSymbol : public Error {
 public:
  BadSymbol(char c, std::size_t pos)
      : Error("bad symbol '" + std::string(1, c) + "' at position " + std::to_string(pos)),
        symbol(c), position(pos) {}
  char symbol;
  std::size_t position;
};

inline Word read_word(std::istream& in, const Alphabet& alphabet) {
  Word w(alphabet);
  auto& d = w.mutable_symbols();
  std::size_t pos = 0;
  char c;
  while (in.get(c)) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    ++pos;
    int s = alphabet.find(c);
    if (s < 0) throw BadSymbol(c, pos);
    d.push_back(static_cast<Symbol>(s));
  }
  return w;
}

inline Word parse_stream(std::string_view text, const Alphabet& alphabet) {
  Word w(alphabet);
  auto& d = w.mutable_symbols();
  std::size_t pos = 0;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    ++pos;
    int s = alphabet.find(c);
    if (s < 0) throw BadSymbol(c, pos);
    d.push_back(static_cast<Symbol>(s));
  }
  return w;
}

// Writes symbols, wrapping lines at `width` (0 disables wrapping). A final
// newline is always emitted.
class StreamWriter {
 public:
  StreamWriter(std::ostream& out, const Alphabet& alphabet, std::size_t width = 120)
      : out_(out), alphabet_(alphabet), width_(width) {}
  ~StreamWriter() { finish(); }

  void put(Symbol s) {
    out_.put(alphabet_.symbol(s));
    if (width_ && ++col_ == width_) {
      out_.put('\n');
      col_ = 0;
    }
    any_ = true;
  }
  void put(std::span<const Symbol> s) {
    for (Symbol x : s) put(x);
  }
  void finish() {
    if (done_) return;
    done_ = true;
    if (col_ != 0 || !any_) out_.put('\n');
    out_.flush();
  }

 private:
  std::ostream& out_;
  const Alphabet& alphabet_;
  std::size_t width_;
  std::size_t col_ = 0;
  bool any_ = false;
  bool done_ = false;
};

inline void write_word(std::ostream& out, const Word& w, std::size_t width = 120) {
  StreamWriter sw(out, w.alphabet(), width);
  sw.put(w.symbols());
}

}  // namespace normins
