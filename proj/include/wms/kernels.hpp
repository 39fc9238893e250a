#pragma once

#include <span>

#include "wms/bitvec.hpp"

#if WMS_HAVE_OPENMP
#include <omp.h>
#endif

namespace wms::kernels {

// Worker count used by the *_omp variants and the dispatchers. 0 resets to
// the OpenMP runtime default (OMP_NUM_THREADS / max threads); without OpenMP
// the count is pinned to 1.
void set_thread_count(int n);
int thread_count();

enum class bin_op : u8 { and_, or_, xor_, andnot, imp, eqv };  // imp: ~a|b, eqv: ~(a^b)

// dst = a OP b over raw words. All three spans must have equal length.
void combine_serial(std::span<u64> dst, std::span<const u64> a, std::span<const u64> b, bin_op op);
void combine_omp(std::span<u64> dst, std::span<const u64> a, std::span<const u64> b, bin_op op);
void combine(std::span<u64> dst, std::span<const u64> a, std::span<const u64> b, bin_op op);

u64 count_serial(std::span<const u64> words);
u64 count_omp(std::span<const u64> words);
u64 count(std::span<const u64> words);

// Atom fill over a rank-k digit grid with radix m:
//   out bit i = table.test(lit_base + sum_c weight[c] * digit_c(i))
// where digit_c(i) is the c-th base-m digit of i, most significant first.
// out must be sized m^k. Writes are word-disjoint across threads.
void gather_serial(bitvec& out, const bitvec& table, u32 m, u32 k, u64 lit_base,
                   std::span<const u64> weights);
void gather_omp(bitvec& out, const bitvec& table, u32 m, u32 k, u64 lit_base,
                std::span<const u64> weights);
void gather(bitvec& out, const bitvec& table, u32 m, u32 k, u64 lit_base,
            std::span<const u64> weights);

// out bit i = (digit_c1(i) == digit_c2(i));  out sized m^k
void digit_eq_serial(bitvec& out, u32 m, u32 k, u32 c1, u32 c2);
void digit_eq_omp(bitvec& out, u32 m, u32 k, u32 c1, u32 c2);
void digit_eq(bitvec& out, u32 m, u32 k, u32 c1, u32 c2);

// out bit i = (digit_c(i) == lit)
void digit_lit_serial(bitvec& out, u32 m, u32 k, u32 c, u32 lit);
void digit_lit_omp(bitvec& out, u32 m, u32 k, u32 c, u32 lit);
void digit_lit(bitvec& out, u32 m, u32 k, u32 c, u32 lit);

// Quantifier projection of the last coordinate:
//   out bit j = OR (existential) / AND (universal) of src bits [j*m, (j+1)*m).
// out sized src.size()/m.
void project_serial(bitvec& out, const bitvec& src, u32 m, bool universal);
void project_omp(bitvec& out, const bitvec& src, u32 m, bool universal);
void project(bitvec& out, const bitvec& src, u32 m, bool universal);

namespace detail {
template <class F>
void flag_fill_words(bitvec& out, u64 n, F&& pred, u64 word_lo, u64 word_hi) {
  auto words = out.words();
  for (u64 w = word_lo; w < word_hi; ++w) {
    u64 acc = 0;
    u64 base = w << 6;
    u64 hi = base + 64 < n ? base + 64 : n;
    for (u64 i = base; i < hi; ++i)
      if (pred(i)) acc |= u64{1} << (i - base);
    words[w] = acc;
  }
}
}  // namespace detail

// out bit f = pred(f) for f in [0, n). pred must be pure; threads own
// disjoint word ranges, so results are schedule-independent.
template <class F>
void flag_fill_serial(bitvec& out, u64 n, F&& pred) {
  detail::flag_fill_words(out, n, pred, 0, (n + 63) / 64);
}

template <class F>
void flag_fill_omp(bitvec& out, u64 n, F&& pred) {
#if WMS_HAVE_OPENMP
  const i64 nwords = static_cast<i64>((n + 63) / 64);
  const int tc = thread_count();
#pragma omp parallel for schedule(static) num_threads(tc)
  for (i64 w = 0; w < nwords; ++w)
    detail::flag_fill_words(out, n, pred, static_cast<u64>(w), static_cast<u64>(w) + 1);
#else
  flag_fill_serial(out, n, pred);
#endif
}

template <class F>
void flag_fill(bitvec& out, u64 n, F&& pred) {
  if (thread_count() > 1)
    flag_fill_omp(out, n, pred);
  else
    flag_fill_serial(out, n, pred);
}

}  // namespace wms::kernels
