#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "alphabet.hpp"

namespace normins {

// Anything that yields symbols one at a time.
class SymbolSource {
 public:
  virtual ~SymbolSource() = default;
  virtual std::optional<Symbol> next() = 0;
  virtual const Alphabet& alphabet() const = 0;

  // Up to n further symbols (fewer if the source ends).
  std::vector<Symbol> take(std::size_t n) {
    std::vector<Symbol> out;
    out.reserve(std::min<std::size_t>(n, std::size_t{1} << 20));
    while (out.size() < n) {
      auto s = next();
      if (!s) break;
      out.push_back(*s);
    }
    return out;
  }
};

// Pull-based symbol stream assembled from blocks. Subclasses fill block i;
// returning false ends the stream.
class BlockStream : public SymbolSource {
 public:
  std::optional<Symbol> next() override {
    while (pos_ >= block_.size()) {
      if (done_) return std::nullopt;
      block_.clear();
      pos_ = 0;
      if (!produce(index_, block_)) {
        done_ = true;
        return std::nullopt;
      }
      block_start_ += last_len_;
      last_len_ = block_.size();
      ++index_;
    }
    ++emitted_;
    return block_[pos_++];
  }

  void restart() {
    block_.clear();
    pos_ = index_ = emitted_ = block_start_ = last_len_ = 0;
    done_ = false;
    on_restart();
  }

  std::size_t emitted() const { return emitted_; }
  // number of blocks started so far
  std::size_t blocks() const { return index_; }
  // 0-based offset of the current block in the output
  std::size_t current_block_start() const { return block_start_; }

  // length of the most recently produced block
  std::size_t current_block_size() const { return block_.size(); }

 protected:
  virtual bool produce(std::size_t index, std::vector<Symbol>& out) = 0;
  virtual void on_restart() {}

 private:
  std::vector<Symbol> block_;
  std::size_t pos_ = 0, index_ = 0, emitted_ = 0, block_start_ = 0, last_len_ = 0;
  bool done_ = false;
};

// A finite word served as a stream.
class SpanSource : public SymbolSource {
 public:
  SpanSource(const Alphabet& a, std::span<const Symbol> s) : a_(a), s_(s) {}
  std::optional<Symbol> next() override {
    if (i_ >= s_.size()) return std::nullopt;
    return s_[i_++];
  }
  const Alphabet& alphabet() const override { return a_; }
  std::size_t consumed() const { return i_; }

 private:
  const Alphabet& a_;
  std::span<const Symbol> s_;
  std::size_t i_ = 0;
};

}  // namespace normins
