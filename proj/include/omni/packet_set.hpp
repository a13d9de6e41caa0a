#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace omni {

/// Fixed-width bit set over packet indices 0..size-1. The width is chosen at
/// construction and never changes; all binary operations require equal widths.
class PacketSet {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  PacketSet() = default;
  explicit PacketSet(std::size_t size) : size_(size), words_((size + word_bits - 1) / word_bits, 0) {}

  static PacketSet full(std::size_t size) {
    PacketSet s(size);
    for (auto& w : s.words_) w = ~word_type{0};
    s.trim();
    return s;
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const {
    assert(i < size_);
    return (words_[i / word_bits] >> (i % word_bits)) & 1u;
  }
  void set(std::size_t i, bool value = true) {
    assert(i < size_);
    const word_type bit = word_type{1} << (i % word_bits);
    if (value)
      words_[i / word_bits] |= bit;
    else
      words_[i / word_bits] &= ~bit;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  PacketSet& operator&=(const PacketSet& o) {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  PacketSet& operator|=(const PacketSet& o) {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// Set difference: removes every element of `o`.
  PacketSet& operator-=(const PacketSet& o) {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend PacketSet operator&(PacketSet a, const PacketSet& b) { return a &= b; }
  friend PacketSet operator|(PacketSet a, const PacketSet& b) { return a |= b; }
  friend PacketSet operator-(PacketSet a, const PacketSet& b) { return a -= b; }
  friend bool operator==(const PacketSet&, const PacketSet&) = default;

  bool is_subset_of(const PacketSet& o) const {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  /// Elements in increasing order.
  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      word_type bits = words_[w];
      while (bits) {
        out.push_back(w * word_bits + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  /// |a & b| without materialising the intersection.
  friend std::size_t intersection_count(const PacketSet& a, const PacketSet& b) {
    assert(a.size_ == b.size_);
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
    return c;
  }

 private:
  void trim() {
    if (size_ % word_bits != 0 && !words_.empty())
      words_.back() &= (word_type{1} << (size_ % word_bits)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<word_type> words_;
};

/// Subset of users as a bit mask; bit i is user i (0-based).
using UserMask = std::uint32_t;

inline constexpr UserMask prefix_mask(int count) {
  return count >= 32 ? ~UserMask{0} : (UserMask{1} << count) - 1;
}

inline constexpr bool contains(UserMask set, int user) { return (set >> user) & 1u; }

inline constexpr bool is_subset(UserMask a, UserMask b) { return (a & ~b) == 0; }

inline int popcount(UserMask m) { return std::popcount(m); }

}  // namespace omni
