#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace omlkit {

// Runtime-sized bitset. Tail bits of the last word are kept zero, so
// word-wise comparison and popcount need no masking.
class DynBitset {
public:
  DynBitset() = default;
  explicit DynBitset(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  int size_bits() const { return nbits_; }

  bool test(int i) const {
    assert(i >= 0 && i < nbits_);
    return (w_[i >> 6] >> (i & 63)) & 1;
  }
  void set(int i) {
    assert(i >= 0 && i < nbits_);
    w_[i >> 6] |= std::uint64_t(1) << (i & 63);
  }
  void reset(int i) {
    assert(i >= 0 && i < nbits_);
    w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
  }
  void clear() {
    for (auto& w : w_) w = 0;
  }
  // clears bits 0..i inclusive
  void clear_through(int i) {
    if (i < 0) return;
    assert(i < nbits_);
    int wi = i >> 6;
    for (int k = 0; k < wi; ++k) w_[k] = 0;
    int r = (i & 63) + 1;
    if (r < 64) w_[wi] &= ~std::uint64_t(0) << r;
    else w_[wi] = 0;
  }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }
  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  DynBitset& operator&=(const DynBitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  DynBitset& operator|=(const DynBitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  // removes o's bits from this
  DynBitset& andnot(const DynBitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend DynBitset operator&(DynBitset a, const DynBitset& b) { return a &= b; }
  friend DynBitset operator|(DynBitset a, const DynBitset& b) { return a |= b; }

  bool operator==(const DynBitset& o) const = default;

  bool is_subset_of(const DynBitset& o) const {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const DynBitset& o) const {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  int first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return int(i * 64) + std::countr_zero(w_[i]);
    return -1;
  }

  template <typename F>
  void for_each(F f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t m = w_[i];
      while (m) {
        f(int(i * 64) + std::countr_zero(m));
        m &= m - 1;
      }
    }
  }

private:
  int nbits_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace omlkit
