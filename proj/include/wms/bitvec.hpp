#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wms/base.hpp"

namespace wms {

// Fixed-length bit vector over 64-bit words, LSB-first within a word.
// Unused tail bits of the last word are kept zero; every mutator restores
// that invariant so word-level comparison and popcount stay exact.
class bitvec {
public:
  static constexpr u64 npos = ~u64{0};

  bitvec() = default;
  explicit bitvec(u64 nbits, bool value = false);

  u64 size() const noexcept { return nbits_; }
  bool empty() const noexcept { return nbits_ == 0; }

  bool test(u64 i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(u64 i) { w_[i >> 6] |= u64{1} << (i & 63); }
  void reset(u64 i) { w_[i >> 6] &= ~(u64{1} << (i & 63)); }
  void assign(u64 i, bool v) { v ? set(i) : reset(i); }

  void clear_all();
  void set_all();

  bitvec& operator&=(const bitvec& o);
  bitvec& operator|=(const bitvec& o);
  bitvec& operator^=(const bitvec& o);
  bitvec& andnot(const bitvec& o);  // this &= ~o
  void flip();

  bool any() const;
  bool none() const { return !any(); }
  u64 count() const;
  u64 count_range(u64 lo, u64 hi) const;  // popcount of [lo, hi)

  bool subset_of(const bitvec& o) const;
  bool intersects(const bitvec& o) const;

  u64 find_first() const;
  u64 find_next(u64 prev) const;  // first set bit > prev, or npos

  // Copies the bit range [lo, lo+len) into a fresh vector.
  bitvec extract(u64 lo, u64 len) const;

  bool operator==(const bitvec& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }

  // Re-establishes the zero-tail invariant after raw word writes.
  void renormalize() { mask_tail(); }

  std::span<u64> words() { return w_; }
  std::span<const u64> words() const { return w_; }

private:
  u64 nbits_ = 0;
  std::vector<u64> w_;
  void mask_tail();
};

struct bitvec_hash {
  std::size_t operator()(const bitvec& b) const noexcept;
};

}  // namespace wms
