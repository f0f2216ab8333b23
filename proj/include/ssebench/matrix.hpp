#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ssebench {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const noexcept {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Row-major bit matrix; each row is packed into 64-bit words. Bits past
/// cols() in the last word are always zero.
class BitMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_per_row_(word_count(cols)), words_(rows * words_per_row_, 0) {}

  static constexpr std::size_t word_count(std::size_t bits) noexcept { return (bits + kWordBits - 1) / kWordBits; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return words_per_row_; }

  bool get(std::size_t r, std::size_t c) const noexcept {
    assert(r < rows_ && c < cols_);
    return (words_[r * words_per_row_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value = true) noexcept {
    assert(r < rows_ && c < cols_);
    Word& w = words_[r * words_per_row_ + c / kWordBits];
    const Word mask = Word{1} << (c % kWordBits);
    w = value ? (w | mask) : (w & ~mask);
  }

  std::span<const Word> row(std::size_t r) const noexcept {
    return {words_.data() + r * words_per_row_, words_per_row_};
  }
  std::span<Word> row(std::size_t r) noexcept { return {words_.data() + r * words_per_row_, words_per_row_}; }

  std::size_t row_count(std::size_t r) const noexcept {
    std::size_t n = 0;
    for (Word w : row(r)) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  /// Grows (or shrinks) the column count; new columns are zero.
  void resize_cols(std::size_t cols) {
    BitMatrix out(rows_, cols);
    const std::size_t keep = std::min(words_per_row_, out.words_per_row_);
    for (std::size_t r = 0; r < rows_; ++r) {
      auto src = row(r);
      auto dst = out.row(r);
      for (std::size_t w = 0; w < keep; ++w) dst[w] = src[w];
      out.clear_tail(r);
    }
    *this = std::move(out);
  }

  bool operator==(const BitMatrix&) const = default;

 private:
  void clear_tail(std::size_t r) noexcept {
    const std::size_t rem = cols_ % kWordBits;
    if (rem != 0 && words_per_row_ > 0) row(r)[words_per_row_ - 1] &= (Word{1} << rem) - 1;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<Word> words_;
};

}  // namespace ssebench
