#include "deltachain/bit_matrix.hpp"

#include <bit>

namespace deltachain {

BitMatrix::BitMatrix(std::size_t n) : n_(n), stride_((n + 63) / 64), words_(n * stride_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

std::size_t BitMatrix::count() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t BitMatrix::row_count(std::size_t r) const noexcept {
  std::size_t total = 0;
  for (std::size_t k = 0; k < stride_; ++k) {
    total += static_cast<std::size_t>(std::popcount(words_[r * stride_ + k]));
  }
  return total;
}

BitMatrix BitMatrix::multiply(const BitMatrix& rhs) const {
  BitMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::uint64_t* dst = &out.words_[i * stride_];
    for (std::size_t j = 0; j < n_; ++j) {
      if (!get(i, j)) continue;
      const std::uint64_t* src = &rhs.words_[j * stride_];
      for (std::size_t k = 0; k < stride_; ++k) dst[k] |= src[k];
    }
  }
  return out;
}

bool BitMatrix::subset_of(const BitMatrix& other) const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if ((words_[k] & ~other.words_[k]) != 0) return false;
  }
  return true;
}

}  // namespace deltachain
