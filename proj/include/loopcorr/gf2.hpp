#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace loopcorr {

/// Packed bit vector over GF(2).
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool v) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  BitVector& operator^=(const BitVector& other) noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }
  bool any() const noexcept;
  std::size_t count() const noexcept;
  /// Indices of set bits, ascending.
  std::vector<int> support() const;
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense matrix over GF(2), rows packed.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  bool get(std::size_t r, std::size_t c) const noexcept { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v) noexcept { rows_[r].set(c, v); }
  const BitVector& row(std::size_t r) const noexcept { return rows_[r]; }
  BitVector multiply(const BitVector& x) const;

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

std::size_t gf2_rank(const BinaryMatrix& m);

/// Basis of {x : M x = 0}, of size cols - rank.
std::vector<BitVector> gf2_nullspace(const BinaryMatrix& m);

}  // namespace loopcorr
