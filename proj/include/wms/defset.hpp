#pragma once

#include <span>
#include <vector>

#include "wms/base.hpp"
#include "wms/bitvec.hpp"

namespace wms {

// Exact extension of a formula over M^k for a universe M = {0..m-1}.
// Bit index is the lexicographic rank of the tuple with the FIRST context
// variable most significant: index(t) = sum_i t[i] * m^(k-1-i).
struct definable_set {
  u32 m = 0;
  u32 arity = 0;
  bitvec bits;

  definable_set() = default;
  definable_set(u32 m_, u32 arity_, bool value = false)
      : m(m_), arity(arity_), bits(space_size(m_, arity_), value) {}

  // m^k, rejected once it would exceed the 2^extension_bits cap.
  static u64 space_size(u32 m, u32 arity);

  static definable_set empty_set(u32 m, u32 arity) { return definable_set(m, arity, false); }
  static definable_set full_set(u32 m, u32 arity) { return definable_set(m, arity, true); }

  u64 size() const { return bits.size(); }
  u64 count() const { return bits.count(); }

  u64 index_of(std::span<const u32> t) const;
  std::vector<u32> tuple_at(u64 idx) const;

  bool test_tuple(std::span<const u32> t) const { return bits.test(index_of(t)); }

  bool same_shape(const definable_set& o) const { return m == o.m && arity == o.arity; }
};

void require_same_shape(const definable_set& a, const definable_set& b, const char* where);

definable_set ds_and(const definable_set& a, const definable_set& b);
definable_set ds_or(const definable_set& a, const definable_set& b);
definable_set ds_diff(const definable_set& a, const definable_set& b);
definable_set ds_not(const definable_set& a);

}  // namespace wms
