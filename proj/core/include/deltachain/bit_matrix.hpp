#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace deltachain {

/// Square boolean matrix with bit-packed rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n);

  static BitMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  bool get(std::size_t r, std::size_t c) const noexcept {
    return (words_[r * stride_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool value = true) noexcept {
    auto& w = words_[r * stride_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = value ? (w | bit) : (w & ~bit);
  }

  std::size_t count() const noexcept;
  std::size_t row_count(std::size_t r) const noexcept;
  bool all() const noexcept { return count() == n_ * n_; }

  /// Boolean product (*this) * rhs.
  BitMatrix multiply(const BitMatrix& rhs) const;

  /// Every set bit of *this is also set in `other`.
  bool subset_of(const BitMatrix& other) const noexcept;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace deltachain
