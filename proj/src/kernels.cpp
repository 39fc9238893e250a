#include "wms/kernels.hpp"

#include <atomic>
#include <bit>

namespace wms::kernels {

namespace {
std::atomic<int> g_threads{0};

inline u64 apply_op(u64 a, u64 b, bin_op op) {
  switch (op) {
    case bin_op::and_: return a & b;
    case bin_op::or_: return a | b;
    case bin_op::xor_: return a ^ b;
    case bin_op::andnot: return a & ~b;
    case bin_op::imp: return ~a | b;
    case bin_op::eqv: return ~(a ^ b);
  }
  return 0;
}

// Digits of index i, most significant first; used to resume odometer walks
// at arbitrary offsets.
inline void digits_at(u64 i, u32 m, u32 k, u32* d) {
  for (u32 c = k; c-- > 0;) {
    d[c] = static_cast<u32>(i % m);
    i /= m;
  }
}

inline void digits_step(u32 m, u32 k, u32* d) {
  for (u32 c = k; c-- > 0;) {
    if (++d[c] < m) return;
    d[c] = 0;
  }
}

constexpr u32 kMaxArity = 32;

template <class PerIndex>
void grid_walk_range(u32 m, u32 k, u64 lo, u64 hi, PerIndex&& f) {
  u32 d[kMaxArity];
  digits_at(lo, m, k, d);
  for (u64 i = lo; i < hi; ++i) {
    f(i, d);
    digits_step(m, k, d);
  }
}

// Fills whole output words so parallel callers never share a word.
template <class BitOf>
void grid_fill_words(bitvec& out, u32 m, u32 k, u64 n, u64 word_lo, u64 word_hi, BitOf&& bit_of) {
  auto words = out.words();
  for (u64 w = word_lo; w < word_hi; ++w) {
    u64 acc = 0;
    u64 base = w << 6;
    u64 hi = base + 64 < n ? base + 64 : n;
    grid_walk_range(m, k, base, hi,
                    [&](u64 i, const u32* d) { acc |= u64{bit_of(d)} << (i - base); });
    words[w] = acc;
  }
}

template <class BitOf>
void grid_fill_serial(bitvec& out, u32 m, u32 k, BitOf&& bit_of) {
  grid_fill_words(out, m, k, out.size(), 0, (out.size() + 63) / 64, bit_of);
}

template <class BitOf>
void grid_fill_omp(bitvec& out, u32 m, u32 k, BitOf&& bit_of) {
#if WMS_HAVE_OPENMP
  const i64 nwords = static_cast<i64>((out.size() + 63) / 64);
  const u64 n = out.size();
  const int tc = thread_count();
#pragma omp parallel for schedule(static) num_threads(tc)
  for (i64 w = 0; w < nwords; ++w)
    grid_fill_words(out, m, k, n, static_cast<u64>(w), static_cast<u64>(w) + 1, bit_of);
#else
  grid_fill_serial(out, m, k, bit_of);
#endif
}
}  // namespace

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0); }

int thread_count() {
  int n = g_threads.load();
  if (n > 0) return n;
#if WMS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void combine_serial(std::span<u64> dst, std::span<const u64> a, std::span<const u64> b,
                    bin_op op) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = apply_op(a[i], b[i], op);
}

void combine_omp(std::span<u64> dst, std::span<const u64> a, std::span<const u64> b, bin_op op) {
#if WMS_HAVE_OPENMP
  const i64 n = static_cast<i64>(dst.size());
  const int tc = thread_count();
#pragma omp parallel for schedule(static) num_threads(tc)
  for (i64 i = 0; i < n; ++i) dst[i] = apply_op(a[i], b[i], op);
#else
  combine_serial(dst, a, b, op);
#endif
}

void combine(std::span<u64> dst, std::span<const u64> a, std::span<const u64> b, bin_op op) {
  if (thread_count() > 1 && dst.size() >= 1024)
    combine_omp(dst, a, b, op);
  else
    combine_serial(dst, a, b, op);
}

u64 count_serial(std::span<const u64> words) {
  u64 n = 0;
  for (u64 w : words) n += static_cast<u64>(std::popcount(w));
  return n;
}

u64 count_omp(std::span<const u64> words) {
#if WMS_HAVE_OPENMP
  const i64 sz = static_cast<i64>(words.size());
  const int tc = thread_count();
  u64 n = 0;
#pragma omp parallel for schedule(static) reduction(+ : n) num_threads(tc)
  for (i64 i = 0; i < sz; ++i) n += static_cast<u64>(std::popcount(words[i]));
  return n;
#else
  return count_serial(words);
#endif
}

u64 count(std::span<const u64> words) {
  if (thread_count() > 1 && words.size() >= 4096) return count_omp(words);
  return count_serial(words);
}

void gather_serial(bitvec& out, const bitvec& table, u32 m, u32 k, u64 lit_base,
                   std::span<const u64> weights) {
  grid_fill_serial(out, m, k, [&](const u32* d) {
    u64 idx = lit_base;
    for (u32 c = 0; c < k; ++c) idx += weights[c] * d[c];
    return table.test(idx);
  });
}

void gather_omp(bitvec& out, const bitvec& table, u32 m, u32 k, u64 lit_base,
                std::span<const u64> weights) {
  grid_fill_omp(out, m, k, [&](const u32* d) {
    u64 idx = lit_base;
    for (u32 c = 0; c < k; ++c) idx += weights[c] * d[c];
    return table.test(idx);
  });
}

void gather(bitvec& out, const bitvec& table, u32 m, u32 k, u64 lit_base,
            std::span<const u64> weights) {
  if (thread_count() > 1 && out.size() >= 1 << 16)
    gather_omp(out, table, m, k, lit_base, weights);
  else
    gather_serial(out, table, m, k, lit_base, weights);
}

void digit_eq_serial(bitvec& out, u32 m, u32 k, u32 c1, u32 c2) {
  grid_fill_serial(out, m, k, [&](const u32* d) { return d[c1] == d[c2]; });
}

void digit_eq_omp(bitvec& out, u32 m, u32 k, u32 c1, u32 c2) {
  grid_fill_omp(out, m, k, [&](const u32* d) { return d[c1] == d[c2]; });
}

void digit_eq(bitvec& out, u32 m, u32 k, u32 c1, u32 c2) {
  if (thread_count() > 1 && out.size() >= 1 << 16)
    digit_eq_omp(out, m, k, c1, c2);
  else
    digit_eq_serial(out, m, k, c1, c2);
}

void digit_lit_serial(bitvec& out, u32 m, u32 k, u32 c, u32 lit) {
  grid_fill_serial(out, m, k, [&](const u32* d) { return d[c] == lit; });
}

void digit_lit_omp(bitvec& out, u32 m, u32 k, u32 c, u32 lit) {
  grid_fill_omp(out, m, k, [&](const u32* d) { return d[c] == lit; });
}

void digit_lit(bitvec& out, u32 m, u32 k, u32 c, u32 lit) {
  if (thread_count() > 1 && out.size() >= 1 << 16)
    digit_lit_omp(out, m, k, c, lit);
  else
    digit_lit_serial(out, m, k, c, lit);
}

namespace {
void project_words(bitvec& out, const bitvec& src, u32 m, bool universal, u64 word_lo,
                   u64 word_hi) {
  auto words = out.words();
  const u64 n = out.size();
  for (u64 w = word_lo; w < word_hi; ++w) {
    u64 acc = 0;
    u64 base = w << 6;
    u64 hi = base + 64 < n ? base + 64 : n;
    for (u64 j = base; j < hi; ++j) {
      u64 lo_bit = j * m;
      bool v = universal ? src.count_range(lo_bit, lo_bit + m) == m
                         : src.count_range(lo_bit, lo_bit + m) != 0;
      acc |= u64{v} << (j - base);
    }
    words[w] = acc;
  }
}
}  // namespace

void project_serial(bitvec& out, const bitvec& src, u32 m, bool universal) {
  project_words(out, src, m, universal, 0, (out.size() + 63) / 64);
}

void project_omp(bitvec& out, const bitvec& src, u32 m, bool universal) {
#if WMS_HAVE_OPENMP
  const i64 nwords = static_cast<i64>((out.size() + 63) / 64);
  const int tc = thread_count();
#pragma omp parallel for schedule(static) num_threads(tc)
  for (i64 w = 0; w < nwords; ++w)
    project_words(out, src, m, universal, static_cast<u64>(w), static_cast<u64>(w) + 1);
#else
  project_serial(out, src, m, universal);
#endif
}

void project(bitvec& out, const bitvec& src, u32 m, bool universal) {
  if (thread_count() > 1 && src.size() >= 1 << 16)
    project_omp(out, src, m, universal);
  else
    project_serial(out, src, m, universal);
}

}  // namespace wms::kernels
