#include "wms/bitvec.hpp"

#include <bit>

namespace wms {

bitvec::bitvec(u64 nbits, bool value) : nbits_(nbits), w_((nbits + 63) / 64, value ? ~u64{0} : 0) {
  mask_tail();
}

void bitvec::mask_tail() {
  if (nbits_ & 63) w_.back() &= (u64{1} << (nbits_ & 63)) - 1;
}

void bitvec::clear_all() {
  for (auto& w : w_) w = 0;
}

void bitvec::set_all() {
  for (auto& w : w_) w = ~u64{0};
  mask_tail();
}

bitvec& bitvec::operator&=(const bitvec& o) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  return *this;
}

bitvec& bitvec::operator|=(const bitvec& o) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  return *this;
}

bitvec& bitvec::operator^=(const bitvec& o) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  return *this;
}

bitvec& bitvec::andnot(const bitvec& o) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
  return *this;
}

void bitvec::flip() {
  for (auto& w : w_) w = ~w;
  mask_tail();
}

bool bitvec::any() const {
  for (auto w : w_)
    if (w) return true;
  return false;
}

u64 bitvec::count() const {
  u64 n = 0;
  for (auto w : w_) n += static_cast<u64>(std::popcount(w));
  return n;
}

u64 bitvec::count_range(u64 lo, u64 hi) const {
  if (lo >= hi) return 0;
  u64 wl = lo >> 6, wh = (hi - 1) >> 6;
  u64 lo_mask = ~u64{0} << (lo & 63);
  u64 hi_mask = (hi & 63) ? ((u64{1} << (hi & 63)) - 1) : ~u64{0};
  if (wl == wh) return std::popcount(w_[wl] & lo_mask & hi_mask);
  u64 n = std::popcount(w_[wl] & lo_mask);
  for (u64 w = wl + 1; w < wh; ++w) n += std::popcount(w_[w]);
  n += std::popcount(w_[wh] & hi_mask);
  return n;
}

bool bitvec::subset_of(const bitvec& o) const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i] & ~o.w_[i]) return false;
  return true;
}

bool bitvec::intersects(const bitvec& o) const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i] & o.w_[i]) return true;
  return false;
}

u64 bitvec::find_first() const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i]) return (static_cast<u64>(i) << 6) + std::countr_zero(w_[i]);
  return npos;
}

u64 bitvec::find_next(u64 prev) const {
  u64 i = prev + 1;
  if (i >= nbits_) return npos;
  u64 wi = i >> 6;
  u64 w = w_[wi] & (~u64{0} << (i & 63));
  while (true) {
    if (w) return (wi << 6) + std::countr_zero(w);
    if (++wi == w_.size()) return npos;
    w = w_[wi];
  }
}

bitvec bitvec::extract(u64 lo, u64 len) const {
  bitvec out(len);
  u64 shift = lo & 63;
  u64 base = lo >> 6;
  for (std::size_t i = 0; i < out.w_.size(); ++i) {
    u64 w = w_[base + i] >> shift;
    if (shift && base + i + 1 < w_.size()) w |= w_[base + i + 1] << (64 - shift);
    out.w_[i] = w;
  }
  out.mask_tail();
  return out;
}

}  // namespace wms

#include "wms/defset.hpp"

namespace wms {

u64 definable_set::space_size(u32 m, u32 arity) {
  if (m == 0) fail(errc::invalid_argument, "universe must be nonempty");
  if (arity == 0) fail(errc::invalid_argument, "context must be nonempty");
  const u64 cap = u64{1} << default_budget().extension_bits;
  u64 n = 1;
  for (u32 i = 0; i < arity; ++i) {
    if (n > cap / m)
      fail(errc::cap_exceeded, "extension space " + std::to_string(m) + "^" +
                                   std::to_string(arity) + " exceeds 2^" +
                                   std::to_string(default_budget().extension_bits) + " bits");
    n *= m;
  }
  return n;
}

u64 definable_set::index_of(std::span<const u32> t) const {
  if (t.size() != arity) fail(errc::arity_mismatch, "tuple arity != set arity");
  u64 idx = 0;
  for (u32 v : t) {
    if (v >= m) fail(errc::invalid_argument, "tuple entry out of universe");
    idx = idx * m + v;
  }
  return idx;
}

std::vector<u32> definable_set::tuple_at(u64 idx) const {
  std::vector<u32> t(arity);
  for (u32 i = arity; i-- > 0;) {
    t[i] = static_cast<u32>(idx % m);
    idx /= m;
  }
  return t;
}

void require_same_shape(const definable_set& a, const definable_set& b, const char* where) {
  if (!a.same_shape(b))
    fail(errc::shape_mismatch, std::string(where) + ": operands have different (m, arity)");
}

definable_set ds_and(const definable_set& a, const definable_set& b) {
  require_same_shape(a, b, "ds_and");
  definable_set r = a;
  r.bits &= b.bits;
  return r;
}

definable_set ds_or(const definable_set& a, const definable_set& b) {
  require_same_shape(a, b, "ds_or");
  definable_set r = a;
  r.bits |= b.bits;
  return r;
}

definable_set ds_diff(const definable_set& a, const definable_set& b) {
  require_same_shape(a, b, "ds_diff");
  definable_set r = a;
  r.bits.andnot(b.bits);
  return r;
}

definable_set ds_not(const definable_set& a) {
  definable_set r = a;
  r.bits.flip();
  return r;
}

std::size_t bitvec_hash::operator()(const bitvec& b) const noexcept {
  // FNV-1a over words plus the length; collisions only cost memo time.
  u64 h = 1469598103934665603ull ^ b.size();
  for (u64 w : b.words()) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace wms
