#include "wms/families.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "wms/kernels.hpp"

namespace wms::families {

namespace {

constexpr u64 kMaxUniverse = 1'000'000;
constexpr u64 kMaxMaterialize = 10'000;
constexpr u32 kMaxExplicitLadder = 6;
constexpr u32 kMaxImplicitLadder = 62;

void check_universe(u64 m) {
  if (m > kMaxUniverse)
    fail(errc::cap_exceeded, "family universe " + std::to_string(m) + " exceeds cap " +
                                 std::to_string(kMaxUniverse));
  if (m > kMaxMaterialize)
    fail(errc::cap_exceeded, "explicit storage for " + std::to_string(m) +
                                 " vertices exceeds cap " + std::to_string(kMaxMaterialize));
}

definable_set blank_binary(u32 m) { return definable_set(m, 2); }

void set_sym(definable_set& t, u32 m, u32 a, u32 b) {
  t.bits.set(u64{a} * m + b);
  t.bits.set(u64{b} * m + a);
}

logic::finite_structure wrap_graph(std::string name, u32 m, definable_set table) {
  logic::finite_structure s;
  s.name = std::move(name);
  s.m = m;
  s.sig.rels = {{"E", 2, true}};
  s.tables = {std::move(table)};
  return s;
}

u64 clique_size(u32 n) { return u64{1} << n; }

double ladder_universe(u32 n) { return std::ldexp(1.0, static_cast<int>(n)) + 2.0 * n; }

// bound < 1/2  iff  n^{2(N-1)} < (2^n + 2n)^{N-2}, compared exactly
bool bound_below_half(u32 n, u32 big_n) {
  mpz_t lhs, rhs;
  mpz_init(lhs);
  mpz_init(rhs);
  mpz_ui_pow_ui(lhs, n, 2 * (big_n - 1));
  mpz_ui_pow_ui(rhs, clique_size(n) + 2 * n, big_n - 2);
  bool below = mpz_cmp(lhs, rhs) < 0;
  mpz_clear(lhs);
  mpz_clear(rhs);
  return below;
}

}  // namespace

family_instance ladder_clique(u32 n) {
  if (n == 0) fail(errc::invalid_argument, "ladder_clique requires n >= 1");
  if (n > 13) fail(errc::cap_exceeded, "ladder_clique materialization capped at n <= 13");
  const u64 c = clique_size(n);
  const u64 m64 = c + 2 * n;
  check_universe(m64);
  const u32 m = static_cast<u32>(m64);

  definable_set e = blank_binary(m);
  for (u32 a = 0; a < c; ++a)
    for (u32 b = a + 1; b < c; ++b) set_sym(e, m, a, b);
  const u32 u0 = static_cast<u32>(c), w0 = static_cast<u32>(c) + n;
  for (u32 i = 0; i < n; ++i)
    for (u32 j = i; j < n; ++j) set_sym(e, m, u0 + i, w0 + j);

  family_instance inst{wrap_graph("ladder_clique(" + std::to_string(n) + ")", m, std::move(e)),
                       {},
                       {},
                       {},
                       {}};
  for (u32 v = 0; v < c; ++v) inst.clique_part.push_back(v);
  for (u32 i = 0; i < n; ++i) inst.u_part.push_back(u0 + i);
  for (u32 j = 0; j < n; ++j) inst.w_part.push_back(w0 + j);
  return inst;
}

family_instance half_graph(u32 h) {
  if (h == 0) fail(errc::invalid_argument, "half_graph requires height >= 1");
  const u64 m64 = 2 * u64{h};
  check_universe(m64);
  const u32 m = static_cast<u32>(m64);
  definable_set e = blank_binary(m);
  for (u32 i = 0; i < h; ++i)
    for (u32 j = i; j < h; ++j) set_sym(e, m, i, h + j);
  family_instance inst{wrap_graph("half_graph(" + std::to_string(h) + ")", m, std::move(e)),
                       {},
                       {},
                       {},
                       {}};
  for (u32 i = 0; i < h; ++i) inst.u_part.push_back(i);
  for (u32 j = 0; j < h; ++j) inst.w_part.push_back(h + j);
  return inst;
}

family_instance matching(u32 pairs) {
  if (pairs == 0) fail(errc::invalid_argument, "matching requires at least one pair");
  const u64 m64 = 2 * u64{pairs};
  check_universe(m64);
  const u32 m = static_cast<u32>(m64);
  definable_set e = blank_binary(m);
  for (u32 p = 0; p < pairs; ++p) set_sym(e, m, 2 * p, 2 * p + 1);
  return {wrap_graph("matching(" + std::to_string(pairs) + ")", m, std::move(e)), {}, {}, {}, {}};
}

family_instance random_graph(u32 m, const rat& p, u64 seed) {
  if (m == 0) fail(errc::invalid_argument, "random_graph requires m >= 1");
  check_universe(m);
  if (p < rat(0) || p > rat(1))
    fail(errc::invalid_argument, "edge probability must lie in [0,1]");
  definable_set e = blank_binary(m);
  std::mt19937_64 rng(seed);
  const u64 num = static_cast<u64>(p.numerator());
  const u64 den = static_cast<u64>(p.denominator());
  for (u32 a = 0; a < m; ++a)
    for (u32 b = a + 1; b < m; ++b)
      if (rng() % den < num) set_sym(e, m, a, b);
  return {wrap_graph("random_graph(" + std::to_string(m) + ")", m, std::move(e)), {}, {}, {}, {}};
}

family_instance chain_union(u32 n) {
  if (n == 0) fail(errc::invalid_argument, "chain_union requires n >= 1");
  const u64 m64 = u64{n} * (n + 1) / 2;
  check_universe(m64);
  const u32 m = static_cast<u32>(m64);

  definable_set leq(m, 2);
  family_instance inst;
  u32 v = 0;
  for (u32 len = 1; len <= n; ++len) {
    std::vector<u32> block;
    for (u32 a = 0; a < len; ++a) block.push_back(v + a);
    for (u32 a = 0; a < len; ++a)
      for (u32 b = a; b < len; ++b) leq.bits.set(u64{v + a} * m + (v + b));
    inst.blocks.push_back(std::move(block));
    v += len;
  }
  inst.s.name = "chain_union(" + std::to_string(n) + ")";
  inst.s.m = m;
  inst.s.sig.rels = {{"LEQ", 2, false}};
  inst.s.tables = {std::move(leq)};
  return inst;
}

family_instance generate(const family_spec& spec) {
  switch (spec.id) {
    case family_id::ladder_clique:
      return ladder_clique(spec.n);
    case family_id::half_graph:
      return half_graph(spec.n);
    case family_id::matching:
      return matching(spec.n);
    case family_id::random_graph:
      return random_graph(spec.m, spec.p, spec.seed);
    case family_id::chain_union:
      return chain_union(spec.n);
  }
  fail(errc::invalid_argument, "unknown family");
}

ratio_record coarse_ratio(const logic::finite_structure& s, const definable_set& d) {
  if (s.m <= 1) fail(errc::degenerate_universe, "coarse ratio needs a universe of size >= 2");
  if (d.m != s.m) fail(errc::shape_mismatch, "set universe does not match the structure");
  ratio_record r;
  r.count = d.bits.count();
  r.space = definable_set::space_size(d.m, d.arity);
  if (r.count == 0) {
    r.neg_inf = true;
    r.ratio = -std::numeric_limits<double>::infinity();
    return r;
  }
  r.ratio = std::log(static_cast<double>(r.count)) / std::log(static_cast<double>(r.space));
  return r;
}

int ratio_cmp(const ratio_record& r, const rat& alpha) {
  if (alpha < rat(0)) fail(errc::invalid_argument, "ratio threshold must be nonnegative");
  if (r.neg_inf) return -1;
  mpz_t lhs, rhs;
  mpz_init(lhs);
  mpz_init(rhs);
  mpz_ui_pow_ui(lhs, r.count, static_cast<unsigned long>(alpha.denominator()));
  mpz_ui_pow_ui(rhs, r.space, static_cast<unsigned long>(alpha.numerator()));
  int c = mpz_cmp(lhs, rhs);
  mpz_clear(lhs);
  mpz_clear(rhs);
  return c < 0 ? -1 : c > 0 ? 1 : 0;
}

namespace {

struct ladder_explicit_data {
  bool witness = false;
  std::vector<u64> row_sizes;
  bool chi_ok = false;
  bool b_scan_ok = false;
};

// Canonical rows by direct bitset enumeration over the materialized graph.
ladder_explicit_data ladder_enumerate(u32 n, u32 big_n) {
  auto inst = ladder_clique(n);
  const u32 m = inst.s.m;
  const auto& table = inst.s.tables[0];

  std::vector<bitvec> nbhd;
  nbhd.reserve(m);
  for (u32 v = 0; v < m; ++v) nbhd.push_back(table.bits.extract(u64{v} * m, m));

  ladder_explicit_data out;
  if (n >= big_n) {
    out.witness = true;
    for (u32 i = 0; i < big_n && out.witness; ++i) {
      bitvec row(m);
      row.set_all();
      for (u32 j = 0; j < big_n; ++j) {
        const u32 bj = inst.w_part[j];
        if (i <= j)
          row &= nbhd[bj];
        else
          row.andnot(nbhd[bj]);
      }
      u64 sz = row.count();
      if (sz == 0) out.witness = false;
      out.row_sizes.push_back(sz);
    }
    if (!out.witness) out.row_sizes.clear();
  }

  // chi(x) holds exactly on the clique part for n >= 2
  auto chi = logic::parse_formula(
      "forall y . (E(x,y) -> forall z . ((!(z = x) & E(y,z)) -> E(x,z)))", inst.s.sig);
  definable_set chi_ext = logic::evaluate(inst.s, *chi, {"x"});
  bitvec clique_mask(m);
  for (u32 v : inst.clique_part) clique_mask.set(v);
  out.chi_ok = chi_ext.bits == clique_mask;

  // every b-tuple whose rows are all nonempty stays inside the ladder part;
  // prefixes with an empty partial row cannot recover, so prune on them
  bitvec ladder_mask(m);
  for (u32 v : inst.u_part) ladder_mask.set(v);
  for (u32 v : inst.w_part) ladder_mask.set(v);

  out.b_scan_ok = true;
  std::vector<u32> b(big_n, 0);
  std::vector<std::vector<bitvec>> stack(big_n + 1, std::vector<bitvec>(big_n));
  for (u32 i = 0; i < big_n; ++i) {
    stack[0][i] = bitvec(m);
    stack[0][i].set_all();
  }
  // iterative DFS over b_0..b_{N-1}
  u32 depth = 0;
  std::vector<u32> cand(big_n, 0);
  while (out.b_scan_ok) {
    if (depth == big_n) {
      bool in_ladder = true;
      for (u32 j = 0; j < big_n; ++j) in_ladder = in_ladder && ladder_mask.test(b[j]);
      if (!in_ladder) out.b_scan_ok = false;
      --depth;
      ++cand[depth];
      continue;
    }
    if (cand[depth] >= m) {
      if (depth == 0) break;
      --depth;
      ++cand[depth];
      continue;
    }
    const u32 v = cand[depth];
    bool alive = true;
    for (u32 i = 0; i < big_n; ++i) {
      stack[depth + 1][i] = stack[depth][i];
      if (i <= depth)
        stack[depth + 1][i] &= nbhd[v];
      else
        stack[depth + 1][i].andnot(nbhd[v]);
      if (stack[depth + 1][i].none()) alive = false;
    }
    if (!alive) {
      ++cand[depth];
      continue;
    }
    b[depth] = v;
    ++depth;
    if (depth < big_n) cand[depth] = 0;
  }
  return out;
}

ladder_row_report ladder_row(u32 n, u32 big_n, ladder_mode mode) {
  ladder_row_report r;
  r.n = n;

  // closed form: each canonical row is the singleton {u_i} when n >= N
  bool witness = n >= big_n;
  std::vector<u64> rows;
  if (witness) rows.assign(big_n, 1);

  if (mode != ladder_mode::implicit_counts) {
    auto ex = ladder_enumerate(n, big_n);
    r.chi_ok = ex.chi_ok;
    r.b_scan_ok = ex.b_scan_ok;
    if (mode == ladder_mode::cross_check)
      r.cross_ok = ex.witness == witness && ex.row_sizes == rows;
    else {
      witness = ex.witness;
      rows = ex.row_sizes;
    }
  }

  r.witness = witness;
  r.row_sizes = std::move(rows);
  r.prod = 1;
  for (u64 sz : r.row_sizes) r.prod *= sz;
  if (!r.witness) r.prod = 0;

  const double logg = std::log(ladder_universe(n));
  r.ratio = r.prod == 0 ? -std::numeric_limits<double>::infinity()
                        : std::log(static_cast<double>(r.prod)) /
                              (static_cast<double>(big_n) * logg);
  r.bound = (static_cast<double>(big_n - 1) * std::log(static_cast<double>(n)) / logg + 1.0) /
            static_cast<double>(big_n);
  r.pass = r.witness && bound_below_half(n, big_n);
  return r;
}

}  // namespace

ratio_report ladder_experiment(u32 n_lo, u32 n_hi, u32 big_n, ladder_mode mode) {
  if (n_lo == 0 || n_hi < n_lo) fail(errc::invalid_argument, "bad ladder range");
  if (big_n < 4) fail(errc::invalid_argument, "the bound branch requires N >= 4");
  const u32 cap = mode == ladder_mode::implicit_counts ? kMaxImplicitLadder : kMaxExplicitLadder;
  if (n_hi > cap)
    fail(errc::cap_exceeded, "ladder mode caps n at " + std::to_string(cap));

  ratio_report rep;
  rep.big_n = big_n;
  rep.mode = mode;
  rep.rows.resize(n_hi - n_lo + 1);

  const i64 span = static_cast<i64>(n_hi) - n_lo + 1;
#if WMS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_count())
#endif
  for (i64 off = 0; off < span; ++off)
    rep.rows[static_cast<std::size_t>(off)] =
        ladder_row(n_lo + static_cast<u32>(off), big_n, mode);
  return rep;
}

std::string report_csv(const ratio_report& r) {
  std::string csv = "n,row_sizes,prod,ratio,bound,pass\n";
  char buf[64];
  for (const auto& row : r.rows) {
    csv += std::to_string(row.n) + ",";
    for (std::size_t i = 0; i < row.row_sizes.size(); ++i) {
      if (i) csv += "|";
      csv += std::to_string(row.row_sizes[i]);
    }
    csv += "," + std::to_string(row.prod) + ",";
    if (std::isinf(row.ratio))
      csv += "-inf";
    else {
      std::snprintf(buf, sizeof buf, "%.6f", row.ratio);
      csv += buf;
    }
    std::snprintf(buf, sizeof buf, "%.6f", row.bound);
    csv += std::string(",") + buf + "," + (row.pass ? "true" : "false") + "\n";
  }
  return csv;
}

}  // namespace wms::families
