#include "wms/stability.hpp"

#include <algorithm>
#include <unordered_map>

namespace wms::stability {

using ideals::ideal;
using ideals::is_thin;
using ideals::is_wide;

namespace {

u64 pow_u64(u64 b, u32 e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

void check_psi_shape(const finite_structure& s, const definable_set& psi,
                     const partitioned_formula& phi) {
  if (psi.m != s.m || psi.arity != phi.x.size())
    fail(errc::shape_mismatch, "psi must live over the object context of phi");
}

void check_ideal_arity(const ideal& i, const partitioned_formula& phi) {
  if (i.arity != phi.x.size())
    fail(errc::arity_mismatch, "ideal arity must equal the object context arity");
}

// All parameter instances of phi, indexed by the lex rank of the parameter
// tuple over the full universe.
std::vector<definable_set> all_instances(const finite_structure& s,
                                         const partitioned_formula& phi) {
  std::vector<u32> everyone(s.m);
  for (u32 v = 0; v < s.m; ++v) everyone[v] = v;
  return logic::instances_over(s, phi, everyone);
}

// Shared memoized rank evaluator with values cut at cap+1.
struct rank_engine {
  const ideal& idl;
  const std::vector<definable_set>& inst;
  u32 cap;
  std::unordered_map<bitvec, int, bitvec_hash> memo;
  u64 budget = default_budget().search_nodes;

  int val(const definable_set& d) {
    if (auto it = memo.find(d.bits); it != memo.end()) return it->second;
    if (budget-- == 0) fail(errc::search_budget_exceeded, "rank search budget exhausted");
    int best = -1;
    if (is_wide(idl, d)) {
      best = 0;
      for (const auto& f : inst) {
        definable_set pos = ds_and(d, f);
        definable_set neg = ds_diff(d, f);
        // A thin side kills the candidate; both sides wide means both are
        // strictly smaller than d, so the recursion terminates.
        if (!is_wide(idl, pos) || !is_wide(idl, neg)) continue;
        int v = 1 + std::min(val(pos), val(neg));
        if (v > best) best = v;
        if (best >= static_cast<int>(cap) + 1) break;
      }
    }
    memo.emplace(d.bits, best);
    return best;
  }

  // Least splitting parameter proving rank >= depth at this node.
  void fill_tree(const definable_set& d, u32 depth, std::size_t slot,
                 std::vector<std::vector<u32>>& tree, u32 ky, u32 m) {
    if (depth == 0) return;
    for (u64 c = 0; c < inst.size(); ++c) {
      definable_set pos = ds_and(d, inst[c]);
      definable_set neg = ds_diff(d, inst[c]);
      if (!is_wide(idl, pos) || !is_wide(idl, neg)) continue;
      if (val(pos) < static_cast<int>(depth) - 1 || val(neg) < static_cast<int>(depth) - 1)
        continue;
      std::vector<u32> t(ky);
      u64 idx = c;
      for (u32 p = ky; p-- > 0;) {
        t[p] = static_cast<u32>(idx % m);
        idx /= m;
      }
      tree[slot] = std::move(t);
      fill_tree(pos, depth - 1, 2 * slot + 1, tree, ky, m);
      fill_tree(neg, depth - 1, 2 * slot + 2, tree, ky, m);
      return;
    }
    fail(errc::invalid_argument, "rank tree extraction lost a certified split");
  }
};

}  // namespace

rank_result rank(const finite_structure& s, const ideal& i, const definable_set& psi,
                 const partitioned_formula& phi, u32 n_max) {
  check_psi_shape(s, psi, phi);
  check_ideal_arity(i, phi);
  auto inst = all_instances(s, phi);
  rank_engine eng{i, inst, n_max, {}};
  int v = eng.val(psi);
  rank_result r;
  if (v < 0) return r;  // neg_infinity
  const u32 ky = static_cast<u32>(phi.y.size());
  if (v > static_cast<int>(n_max)) {
    r.k = rank_result::kind::exceeds_cap;
    r.cap = n_max;
    r.tree.assign(pow_u64(2, n_max + 1) - 1, {});
    eng.fill_tree(psi, n_max + 1, 0, r.tree, ky, s.m);
    return r;
  }
  r.k = rank_result::kind::finite;
  r.value = static_cast<u32>(v);
  r.tree.assign(pow_u64(2, r.value) - 1, {});
  eng.fill_tree(psi, r.value, 0, r.tree, ky, s.m);
  return r;
}

bool tree_check(const finite_structure& s, const ideal& i, const definable_set& psi,
                const partitioned_formula& phi, const std::vector<std::vector<u32>>& tree) {
  check_psi_shape(s, psi, phi);
  check_ideal_arity(i, phi);
  if (tree.empty()) return is_wide(i, psi);
  // Walk the breadth-first tree depth-first, carrying path intersections.
  struct frame {
    std::size_t slot;
    definable_set set;
  };
  std::vector<frame> stack{{0, psi}};
  while (!stack.empty()) {
    frame f = std::move(stack.back());
    stack.pop_back();
    if (f.slot >= tree.size()) {  // leaf: the path conjunction must be wide
      if (!is_wide(i, f.set)) return false;
      continue;
    }
    definable_set inst = logic::instance_at(s, phi, tree[f.slot]);
    stack.push_back({2 * f.slot + 2, ds_diff(f.set, inst)});
    stack.push_back({2 * f.slot + 1, ds_and(f.set, inst)});
  }
  return true;
}

std::optional<std::vector<std::vector<u32>>> tree_witness(const finite_structure& s,
                                                          const ideal& i,
                                                          const definable_set& psi,
                                                          const partitioned_formula& phi,
                                                          u32 n) {
  check_psi_shape(s, psi, phi);
  check_ideal_arity(i, phi);
  if (n == 0) {
    if (is_wide(i, psi)) return std::vector<std::vector<u32>>{};
    return std::nullopt;
  }
  auto inst = all_instances(s, phi);
  const u32 ky = static_cast<u32>(phi.y.size());
  const std::size_t nodes = (std::size_t{1} << n) - 1;
  std::vector<u64> choice(nodes);
  std::vector<definable_set> node_set(nodes);  // path intersection at a node

  u64 budget = default_budget().search_nodes;
  // Assign nodes in breadth-first order; a choice is admissible when both
  // signed children of the node's path set stay wide (necessary at interior
  // nodes, exactly the path condition at the last level).
  std::size_t p = 0;
  node_set[0] = psi;
  while (true) {
    bool advanced = false;
    for (u64 c = choice[p]; c < inst.size(); ++c) {
      if (budget-- == 0) fail(errc::search_budget_exceeded, "tree search budget exhausted");
      definable_set pos = ds_and(node_set[p], inst[c]);
      definable_set neg = ds_diff(node_set[p], inst[c]);
      if (!is_wide(i, pos) || !is_wide(i, neg)) continue;
      choice[p] = c;
      if (2 * p + 1 < nodes) {
        node_set[2 * p + 1] = std::move(pos);
        node_set[2 * p + 2] = std::move(neg);
      }
      advanced = true;
      break;
    }
    if (advanced) {
      if (++p == nodes) {
        std::vector<std::vector<u32>> out(nodes);
        for (std::size_t q = 0; q < nodes; ++q) {
          std::vector<u32> t(ky);
          u64 idx = choice[q];
          for (u32 pos_i = ky; pos_i-- > 0;) {
            t[pos_i] = static_cast<u32>(idx % s.m);
            idx /= s.m;
          }
          out[q] = std::move(t);
        }
        return out;
      }
      choice[p] = 0;
      continue;
    }
    // backtrack
    if (p == 0) return std::nullopt;
    choice[p] = 0;
    --p;
    ++choice[p];
  }
}

namespace {

std::vector<u32> tuple_of(u64 idx, u32 m, u32 k) {
  std::vector<u32> t(k);
  for (u32 p = k; p-- > 0;) {
    t[p] = static_cast<u32>(idx % m);
    idx /= m;
  }
  return t;
}

// Wideness of rows under the all-of-M mode: the row must contain a wide
// atom of the full instance algebra, i.e. its type extends to a wide
// complete phi-type over the whole universe.
struct full_atom_table {
  std::vector<definable_set> wide_atoms;

  full_atom_table(const finite_structure& s, const ideal& i, const partitioned_formula& phi) {
    std::vector<u32> everyone(s.m);
    for (u32 v = 0; v < s.m; ++v) everyone[v] = v;
    for (auto& cell : logic::delta_atoms(s, {phi}, everyone))
      if (is_wide(i, cell)) wide_atoms.push_back(std::move(cell));
  }

  bool row_ok(const definable_set& row) const {
    for (const auto& a : wide_atoms)
      if (a.bits.subset_of(row.bits)) return true;
    return false;
  }
};

}  // namespace

std::optional<order_witness> wide_order_witness(const finite_structure& s, const ideal& i,
                                                const partitioned_formula& phi, u32 n,
                                                row_mode mode, bool distinct) {
  if (n == 0) fail(errc::invalid_argument, "order witness length must be positive");
  check_ideal_arity(i, phi);
  auto inst = all_instances(s, phi);
  std::optional<full_atom_table> atoms;
  if (mode == row_mode::all_of_m) atoms.emplace(s, i, phi);

  const u32 kx = static_cast<u32>(phi.x.size());
  const u32 ky = static_cast<u32>(phi.y.size());
  definable_set full = definable_set::full_set(s.m, kx);

  // rows[j] for chosen b_0..b_{t-1}; tail = all-negative intersection,
  // the common prefix of every row at index >= t.
  std::vector<u64> pick(n, 0);
  std::vector<std::vector<definable_set>> row_stack{{}};
  std::vector<definable_set> tail_stack{full};
  u64 budget = default_budget().search_nodes;
  u32 t = 0;
  while (true) {
    bool advanced = false;
    for (u64 c = pick[t]; c < inst.size(); ++c) {
      if (budget-- == 0) fail(errc::search_budget_exceeded, "order search budget exhausted");
      if (distinct) {
        bool dup = false;
        for (u32 j = 0; j < t; ++j) dup = dup || pick[j] == c;
        if (dup) continue;
      }
      const definable_set& f = inst[c];
      std::vector<definable_set> rows = row_stack[t];
      bool ok = true;
      for (auto& row : rows) {
        row.bits &= f.bits;  // j = t is above every existing row index
        ok = ok && is_wide(i, row);
        if (!ok) break;
      }
      definable_set tail = ds_diff(tail_stack[t], f);
      if (ok) {
        rows.push_back(tail);  // row t: still all-negative
        ok = is_wide(i, tail);
      }
      if (!ok) continue;
      pick[t] = c;
      row_stack.push_back(std::move(rows));
      tail_stack.push_back(std::move(tail));
      advanced = true;
      break;
    }
    if (advanced) {
      if (++t == n) {
        const auto& rows = row_stack[n];
        bool rows_ok = true;
        if (mode == row_mode::all_of_m)
          for (const auto& row : rows) rows_ok = rows_ok && atoms->row_ok(row);
        if (rows_ok) {
          order_witness w;
          for (u32 j = 0; j < n; ++j) w.b.push_back(tuple_of(pick[j], s.m, ky));
          for (const auto& row : rows)
            w.a.push_back(tuple_of(row.bits.find_first(), s.m, kx));
          return w;
        }
        // all-of-M rejection: treat as a failed leaf and keep searching
        row_stack.pop_back();
        tail_stack.pop_back();
        --t;
        ++pick[t];
        continue;
      }
      pick[t] = 0;
      continue;
    }
    if (t == 0) return std::nullopt;
    pick[t] = 0;
    row_stack.pop_back();
    tail_stack.pop_back();
    --t;
    ++pick[t];
  }
}

std::optional<std::vector<std::vector<u32>>> wide_independence_witness(
    const finite_structure& s, const ideal& i, const partitioned_formula& phi, u32 n,
    bool distinct) {
  if (n == 0) fail(errc::invalid_argument, "independence witness length must be positive");
  check_ideal_arity(i, phi);
  auto inst = all_instances(s, phi);
  const u32 kx = static_cast<u32>(phi.x.size());
  const u32 ky = static_cast<u32>(phi.y.size());

  std::vector<u64> pick(n, 0);
  std::vector<std::vector<definable_set>> cell_stack{{definable_set::full_set(s.m, kx)}};
  u64 budget = default_budget().search_nodes;
  u32 t = 0;
  while (true) {
    bool advanced = false;
    for (u64 c = pick[t]; c < inst.size(); ++c) {
      if (distinct) {
        bool dup = false;
        for (u32 j = 0; j < t; ++j) dup = dup || pick[j] == c;
        if (dup) continue;
      }
      const auto& cells = cell_stack[t];
      std::vector<definable_set> next;
      next.reserve(cells.size() * 2);
      bool ok = true;
      for (const auto& cell : cells) {
        if (budget-- == 0)
          fail(errc::search_budget_exceeded, "independence search budget exhausted");
        definable_set pos = ds_and(cell, inst[c]);
        definable_set neg = ds_diff(cell, inst[c]);
        if (!is_wide(i, pos) || !is_wide(i, neg)) {
          ok = false;
          break;
        }
        next.push_back(std::move(pos));
        next.push_back(std::move(neg));
      }
      if (!ok) continue;
      pick[t] = c;
      cell_stack.push_back(std::move(next));
      advanced = true;
      break;
    }
    if (advanced) {
      if (++t == n) {
        std::vector<std::vector<u32>> out;
        for (u32 j = 0; j < n; ++j) out.push_back(tuple_of(pick[j], s.m, ky));
        return out;
      }
      pick[t] = 0;
      continue;
    }
    if (t == 0) return std::nullopt;
    pick[t] = 0;
    cell_stack.pop_back();
    --t;
    ++pick[t];
  }
}

std::optional<std::vector<std::vector<u32>>> wide_strict_order_witness(
    const finite_structure& s, const ideal& i, const partitioned_formula& phi, u32 n,
    bool distinct) {
  if (n < 2) fail(errc::invalid_argument, "strict order witness length must be at least 2");
  check_ideal_arity(i, phi);
  auto inst = all_instances(s, phi);
  const u32 ky = static_cast<u32>(phi.y.size());

  std::vector<u64> pick(n, 0);
  u64 budget = default_budget().search_nodes;
  u32 t = 0;
  while (true) {
    bool advanced = false;
    for (u64 c = pick[t]; c < inst.size(); ++c) {
      if (budget-- == 0)
        fail(errc::search_budget_exceeded, "strict order search budget exhausted");
      if (distinct) {
        bool dup = false;
        for (u32 j = 0; j < t; ++j) dup = dup || pick[j] == c;
        if (dup) continue;
      }
      bool ok = true;
      for (u32 j = 0; j < t && ok; ++j) {
        const auto& lo = inst[pick[j]];
        const auto& hi = inst[c];
        ok = is_wide(i, ds_diff(hi, lo)) && is_thin(i, ds_diff(lo, hi));
      }
      if (!ok) continue;
      pick[t] = c;
      advanced = true;
      break;
    }
    if (advanced) {
      if (++t == n) {
        std::vector<std::vector<u32>> out;
        for (u32 j = 0; j < n; ++j) out.push_back(tuple_of(pick[j], s.m, ky));
        return out;
      }
      pick[t] = 0;
      continue;
    }
    if (t == 0) return std::nullopt;
    pick[t] = 0;
    --t;
    ++pick[t];
  }
}

type_count count_wide_types(const finite_structure& s, const ideal& i,
                            const std::vector<partitioned_formula>& delta,
                            const std::vector<u32>& base) {
  if (delta.empty()) fail(errc::invalid_argument, "delta must be nonempty");
  if (i.arity != delta[0].x.size())
    fail(errc::arity_mismatch, "ideal arity must equal the shared object context arity");
  auto atoms = logic::delta_atoms_ex(s, delta, base);
  type_count out;
  out.total = atoms.cells.size();
  for (auto& cell : atoms.cells) {
    type_record r;
    r.pattern.reserve(atoms.generators);
    for (u64 g = 0; g < atoms.generators; ++g) r.pattern.push_back(cell.pattern.test(g) ? '1' : '0');
    r.rep = cell.cell.tuple_at(cell.cell.bits.find_first());
    r.size = cell.cell.count();
    r.wide = is_wide(i, cell.cell);
    if (r.wide) ++out.wide;
    out.types.push_back(std::move(r));
  }
  return out;
}

type_count count_wide_types_full(const finite_structure& s, const ideal& i, u32 n,
                                 const std::vector<u32>& base) {
  if (n == 0) fail(errc::invalid_argument, "type arity must be positive");
  if (s.m > default_budget().orbit_universe)
    fail(errc::cap_exceeded, "full-language type counting is gated to universes of size <= " +
                                 std::to_string(default_budget().orbit_universe));
  if (i.arity != n) fail(errc::arity_mismatch, "ideal arity must equal the type arity");
  type_count out;
  for (const auto& orbit : logic::orbit_partition(s, n, base)) {
    definable_set cell(s.m, n);
    for (u64 idx : orbit) cell.bits.set(idx);
    type_record r;
    r.rep = cell.tuple_at(orbit.front());
    r.size = orbit.size();
    r.wide = is_wide(i, cell);
    if (r.wide) ++out.wide;
    out.types.push_back(std::move(r));
  }
  out.total = out.types.size();
  return out;
}

}  // namespace wms::stability
