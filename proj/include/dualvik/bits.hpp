#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dualvik/errors.hpp"

namespace dualvik {

// Fixed-width dynamic bitset. Width is part of the value; binary operations
// require equal widths.
class Bits {
public:
  Bits() = default;
  explicit Bits(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static Bits ones(std::size_t size) {
    Bits b(size);
    for (auto& w : b.words_) w = ~std::uint64_t{0};
    b.trim();
    return b;
  }

  static Bits from_mask(std::size_t size, std::uint64_t mask) {
    Bits b(size);
    if (!b.words_.empty()) b.words_[0] = mask;
    b.trim();
    return b;
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

  void set(std::size_t i, bool value = true) {
    if (value)
      words_[i / 64] |= std::uint64_t{1} << (i % 64);
    else
      words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const { return !none(); }

  bool subset_of(const Bits& other) const {
    check_width(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  bool intersects(const Bits& other) const {
    check_width(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  Bits operator&(const Bits& other) const {
    check_width(other);
    Bits out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      out.words_[i] = words_[i] & other.words_[i];
    return out;
  }

  Bits operator|(const Bits& other) const {
    check_width(other);
    Bits out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      out.words_[i] = words_[i] | other.words_[i];
    return out;
  }

  Bits& operator|=(const Bits& other) {
    check_width(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  Bits& operator&=(const Bits& other) {
    check_width(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }

  // Complement within the fixed width.
  Bits operator~() const {
    Bits out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.trim();
    return out;
  }

  bool operator==(const Bits& other) const {
    return size_ == other.size_ && words_ == other.words_;
  }
  bool operator!=(const Bits& other) const { return !(*this == other); }

  // Deterministic total order (width, then little-endian words); used only
  // for canonical sorting.
  bool operator<(const Bits& other) const {
    if (size_ != other.size_) return size_ < other.size_;
    for (std::size_t i = words_.size(); i-- > 0;)
      if (words_[i] != other.words_[i]) return words_[i] < other.words_[i];
    return false;
  }

  std::uint64_t low64() const { return words_.empty() ? 0 : words_[0]; }

  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    std::size_t nibbles = (size_ + 3) / 4;
    for (std::size_t i = nibbles; i-- > 0;) {
      std::uint64_t w = words_[i / 16];
      out.push_back(digits[(w >> (4 * (i % 16))) & 0xf]);
    }
    return out.empty() ? "0" : out;
  }

private:
  void check_width(const Bits& other) const {
    if (size_ != other.size_)
      throw ValidationError("bitset width mismatch: " + std::to_string(size_) +
                            " vs " + std::to_string(other.size_));
  }

  void trim() {
    if (size_ % 64 != 0 && !words_.empty())
      words_.back() &= (~std::uint64_t{0}) >> (64 - size_ % 64);
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Boolean matrix with bit-packed rows.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_words_((cols + 63) / 64),
        words_(rows * row_words_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (words_[r * row_words_ + c / 64] >> (c % 64)) & 1;
  }

  void set(std::size_t r, std::size_t c, bool value = true) {
    std::uint64_t& w = words_[r * row_words_ + c / 64];
    if (value)
      w |= std::uint64_t{1} << (c % 64);
    else
      w &= ~(std::uint64_t{1} << (c % 64));
  }

  Bits row(std::size_t r) const {
    Bits out(cols_);
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(c);
    return out;
  }

  void or_row_into(std::size_t r, Bits& acc) const {
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) acc.set(c);
  }

  BitMatrix transpose() const {
    BitMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (get(r, c)) out.set(c, r);
    return out;
  }

  bool operator==(const BitMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && words_ == other.words_;
  }
  bool operator!=(const BitMatrix& other) const { return !(*this == other); }

  // Row-major hex dump, rows separated by '.', for compact reports.
  std::string to_hex() const {
    std::string out;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r) out.push_back('.');
      out += row(r).to_hex();
    }
    return out;
  }

private:
  std::size_t rows_ = 0, cols_ = 0, row_words_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace dualvik
