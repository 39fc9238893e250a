#include "wms/dividing.hpp"

#include <algorithm>

namespace wms::dividing {

namespace {

void check_shapes(const logic::finite_structure& s, const ideals::ideal& i,
                  const logic::partitioned_formula& psi) {
  if (i.arity != psi.x.size())
    fail(errc::shape_mismatch, "ideal arity " + std::to_string(i.arity) +
                                   " does not match object context size " +
                                   std::to_string(psi.x.size()));
  if (s.m == 0) fail(errc::invalid_argument, "empty universe");
}

void check_tuple_arity(const logic::partitioned_formula& psi, std::span<const u32> t) {
  if (t.size() != psi.y.size())
    fail(errc::arity_mismatch, "parameter tuple arity " + std::to_string(t.size()) +
                                   " does not match |y| = " + std::to_string(psi.y.size()));
}

// Thinness of the conjunction of the instances selected by idx.
bool subset_thin(const ideals::ideal& i, const std::vector<definable_set>& inst,
                 std::span<const u32> idx) {
  definable_set cur = inst[idx[0]];
  for (std::size_t p = 1; p < idx.size(); ++p) cur.bits &= inst[idx[p]].bits;
  return ideals::is_thin(i, cur);
}

// All k-index subsets of [0, n) thin. Subsets containing position `pinned`
// only, when pinned >= 0 (used incrementally by the search).
bool k_subsets_thin(const ideals::ideal& i, const std::vector<definable_set>& inst, u32 k,
                    int pinned) {
  const u32 n = static_cast<u32>(inst.size());
  std::vector<u32> idx(k);
  // odometer over ascending index vectors
  for (u32 p = 0; p < k; ++p) idx[p] = p;
  if (k > n) return true;
  while (true) {
    bool covers_pin = pinned < 0;
    if (!covers_pin)
      covers_pin = std::find(idx.begin(), idx.end(), static_cast<u32>(pinned)) != idx.end();
    if (covers_pin && !subset_thin(i, inst, idx)) return false;
    u32 p = k;
    while (p-- > 0) {
      if (idx[p] + (k - p) <= n - 1 + 0u) {
        ++idx[p];
        for (u32 q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
        break;
      }
      if (p == 0) return true;
    }
  }
}

std::vector<u32> grow_base(const logic::finite_structure& s, std::vector<u32> base,
                           const std::vector<std::vector<u32>>& tuples, std::size_t upto) {
  for (std::size_t i = 0; i < upto; ++i)
    base.insert(base.end(), tuples[i].begin(), tuples[i].end());
  return logic::normalize_base(s, std::move(base));
}

}  // namespace

bool check_dividing_witness(const logic::finite_structure& s, const ideals::ideal& i,
                            const logic::partitioned_formula& psi, std::span<const u32> c,
                            const std::vector<u32>& base,
                            const std::vector<std::vector<u32>>& seq, u32 k) {
  check_shapes(s, i, psi);
  check_tuple_arity(psi, c);
  if (k == 0) fail(errc::invalid_argument, "k must be positive");
  if (seq.size() < k)
    fail(errc::invalid_argument, "witness sequence shorter than k = " + std::to_string(k));
  for (const auto& t : seq) check_tuple_arity(psi, t);

  auto nbase = logic::normalize_base(s, base);
  auto auts = logic::automorphisms(s, nbase);
  for (const auto& t : seq) {
    bool conjugate = false;
    for (const auto& sigma : auts) {
      bool match = true;
      for (std::size_t p = 0; p < c.size() && match; ++p) match = sigma[c[p]] == t[p];
      if (match) {
        conjugate = true;
        break;
      }
    }
    if (!conjugate) return false;
  }

  std::vector<definable_set> inst;
  inst.reserve(seq.size());
  for (const auto& t : seq) inst.push_back(logic::instance_at(s, psi, t));
  return k_subsets_thin(i, inst, k, -1);
}

std::optional<dividing_witness> search_k_dividing(const logic::finite_structure& s,
                                                  const ideals::ideal& i,
                                                  const logic::partitioned_formula& psi,
                                                  std::span<const u32> c,
                                                  const std::vector<u32>& base, u32 k,
                                                  u32 max_len, bool distinct) {
  check_shapes(s, i, psi);
  check_tuple_arity(psi, c);
  if (k == 0) fail(errc::invalid_argument, "k must be positive");
  if (max_len < k)
    fail(errc::invalid_argument, "max_len must be at least k = " + std::to_string(k));

  auto nbase = logic::normalize_base(s, base);
  std::vector<u32> cv(c.begin(), c.end());

  if (k == 1 && ideals::is_thin(i, logic::instance_at(s, psi, c)))
    return dividing_witness{k, {cv}, nbase, psi.text};

  auto orbit = logic::orbit_of(s, c, nbase);
  std::vector<definable_set> oinst;
  oinst.reserve(orbit.size());
  for (const auto& t : orbit) oinst.push_back(logic::instance_at(s, psi, t));

  // DFS over non-decreasing (strictly ascending when distinct) orbit
  // positions; only subsets touching the newest element need rechecking.
  std::vector<u32> pick;
  std::vector<definable_set> chosen;
  pick.reserve(max_len);
  u32 next = 0;
  while (true) {
    if (pick.size() == max_len) {
      dividing_witness w{k, {}, nbase, psi.text};
      for (u32 p : pick) w.sequence.push_back(orbit[p]);
      return w;
    }
    bool advanced = false;
    for (u32 cand = next; cand < orbit.size(); ++cand) {
      chosen.push_back(oinst[cand]);
      bool ok = chosen.size() < k ||
                k_subsets_thin(i, chosen, k, static_cast<int>(chosen.size()) - 1);
      if (ok && (!distinct || max_len - pick.size() <= orbit.size() - cand)) {
        pick.push_back(cand);
        next = distinct ? cand + 1 : cand;
        advanced = true;
        break;
      }
      chosen.pop_back();
    }
    if (advanced) continue;
    if (pick.empty()) return std::nullopt;
    next = pick.back() + 1;
    pick.pop_back();
    chosen.pop_back();
  }
}

namespace {

struct uniform_searcher {
  const logic::finite_structure& s;
  const ideals::ideal& i;
  const std::vector<logic::partitioned_formula>& delta;
  u32 k;
  u32 len;
  u64 budget;
  u64 nodes = 0;

  std::vector<uniform_entry> entries;
  std::vector<std::vector<u32>> tuples;

  bool extend(const std::vector<u32>& base0, const definable_set& joint) {
    if (entries.size() == len) return true;
    auto grown = grow_base(s, base0, tuples, tuples.size());
    for (u32 l = 0; l < delta.size(); ++l) {
      const auto& psi = delta[l];
      const u32 ky = static_cast<u32>(psi.y.size());
      u64 space = 1;
      for (u32 cdx = 0; cdx < ky; ++cdx) space *= s.m;
      std::vector<u32> a(ky, 0);
      for (u64 r = 0; r < space; ++r) {
        if (++nodes > budget)
          fail(errc::search_budget_exceeded,
               "uniform sequence search exceeded " + std::to_string(budget) + " nodes");
        u64 rest = r;
        for (u32 cdx = ky; cdx-- > 0;) {
          a[cdx] = static_cast<u32>(rest % s.m);
          rest /= s.m;
        }
        definable_set inst = logic::instance_at(s, psi, a);
        definable_set next = joint;
        next.bits &= inst.bits;
        if (!ideals::is_wide(i, next)) continue;
        if (!search_k_dividing(s, i, psi, a, grown, k, k).has_value()) continue;
        entries.push_back({l, a});
        tuples.push_back(a);
        if (extend(base0, next)) return true;
        entries.pop_back();
        tuples.pop_back();
      }
    }
    return false;
  }
};

}  // namespace

std::optional<uniform_sequence> search_uniform_sequence(
    const logic::finite_structure& s, const ideals::ideal& i,
    const std::vector<logic::partitioned_formula>& delta, const std::vector<u32>& base, u32 k,
    u32 len, u64 node_budget) {
  if (delta.empty()) fail(errc::invalid_argument, "delta must be nonempty");
  if (len == 0) fail(errc::invalid_argument, "sequence length must be positive");
  for (const auto& psi : delta) check_shapes(s, i, psi);
  for (const auto& psi : delta)
    if (psi.x.size() != delta.front().x.size())
      fail(errc::shape_mismatch, "delta formulas must share the object context");

  auto nbase = logic::normalize_base(s, base);
  uniform_searcher sr{s, i, delta, k, len, node_budget, 0, {}, {}};
  definable_set full = definable_set::full_set(s.m, static_cast<u32>(delta.front().x.size()));
  if (sr.extend(nbase, full)) return uniform_sequence{k, std::move(sr.entries), nbase};
  return std::nullopt;
}

u32 max_uniform_length(const logic::finite_structure& s, const ideals::ideal& i,
                       const std::vector<logic::partitioned_formula>& delta,
                       const std::vector<u32>& base, u32 k, u32 cap, u64 node_budget) {
  u32 best = 0;
  for (u32 len = 1; len <= cap; ++len) {
    if (!search_uniform_sequence(s, i, delta, base, k, len, node_budget).has_value()) break;
    best = len;
  }
  return best;
}

bool check_fork_cover(const logic::finite_structure& s, const ideals::ideal& i,
                      const std::vector<signed_instance>& pi, const std::vector<u32>& base,
                      const std::vector<std::pair<logic::partitioned_formula, std::vector<u32>>>&
                          cover,
                      u32 k) {
  if (cover.empty()) fail(errc::invalid_argument, "cover must be nonempty");
  if (k == 0) fail(errc::invalid_argument, "k must be positive");
  for (const auto& [phi, t] : cover) {
    check_shapes(s, i, phi);
    check_tuple_arity(phi, t);
  }

  const u32 kx = static_cast<u32>(cover.front().first.x.size());
  definable_set ext = definable_set::full_set(s.m, kx);
  for (const auto& si : pi) {
    check_tuple_arity(si.phi, si.tuple);
    if (si.phi.x.size() != kx)
      fail(errc::shape_mismatch, "signed instances must share the cover object context");
    definable_set inst = logic::instance_at(s, si.phi, si.tuple);
    if (si.positive)
      ext.bits &= inst.bits;
    else
      ext.bits.andnot(inst.bits);
  }

  definable_set uni = definable_set::empty_set(s.m, kx);
  for (const auto& [phi, t] : cover) uni.bits |= logic::instance_at(s, phi, t).bits;
  if (!ext.bits.subset_of(uni.bits)) return false;

  for (const auto& [phi, t] : cover)
    if (!search_k_dividing(s, i, phi, t, base, k, k).has_value()) return false;
  return true;
}

}  // namespace wms::dividing
