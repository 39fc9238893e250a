#include "wms/logic.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "wms/kernels.hpp"

namespace wms::logic {

finite_structure make_structure(std::string name, u32 m, signature sig,
                                const std::vector<std::vector<std::vector<u32>>>& tuples) {
  if (m == 0) fail(errc::invalid_argument, "universe must be nonempty");
  if (tuples.size() != sig.rels.size())
    fail(errc::shape_mismatch, "one tuple list per declared relation required");
  finite_structure s;
  s.name = std::move(name);
  s.m = m;
  s.sig = std::move(sig);
  for (std::size_t r = 0; r < s.sig.rels.size(); ++r) {
    const auto& decl = s.sig.rels[r];
    if (decl.arity == 0) fail(errc::invalid_argument, "relation arity must be positive");
    definable_set table(m, decl.arity);
    for (const auto& t : tuples[r]) {
      if (t.size() != decl.arity)
        fail(errc::arity_mismatch, "tuple arity does not match relation '" + decl.name + "'");
      for (u32 v : t)
        if (v >= m) fail(errc::invalid_argument, "tuple entry outside the universe");
      if (decl.symmetric) {
        auto p = t;
        std::sort(p.begin(), p.end());
        do
          table.bits.set(table.index_of(p));
        while (std::next_permutation(p.begin(), p.end()));
      } else {
        table.bits.set(table.index_of(t));
      }
    }
    s.tables.push_back(std::move(table));
  }
  return s;
}

void check_context(const context& ctx) {
  if (ctx.empty()) fail(errc::invalid_argument, "context must be nonempty");
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (ctx[i].empty()) fail(errc::invalid_argument, "context variable must be named");
    for (std::size_t j = i + 1; j < ctx.size(); ++j)
      if (ctx[i] == ctx[j])
        fail(errc::invalid_argument, "duplicate context variable '" + ctx[i] + "'");
  }
}

bool extension_equal(const definable_set& a, const definable_set& b) {
  require_same_shape(a, b, "extension_equal");
  return a.bits == b.bits;
}

namespace {

u64 pow_u64(u64 b, u32 e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

struct evaluator {
  const finite_structure& s;
  std::vector<std::string> vars;  // coordinate names, first is most significant

  // Innermost binding wins, so lookup scans from the back.
  u32 coord_of(const std::string& v) const {
    for (std::size_t i = vars.size(); i-- > 0;)
      if (vars[i] == v) return static_cast<u32>(i);
    fail(errc::unbound_variable, "variable '" + v + "' is not in scope");
  }

  definable_set eval(const formula& f) {
    const u32 m = s.m;
    const u32 k = static_cast<u32>(vars.size());
    switch (f.kind) {
      case fkind::verum:
        return definable_set::full_set(m, k);
      case fkind::falsum:
        return definable_set::empty_set(m, k);
      case fkind::rel: {
        const auto& table = s.tables[f.rel];
        const u32 ra = s.sig.rels[f.rel].arity;
        std::vector<u64> weights(k, 0);
        u64 lit_base = 0;
        for (u32 p = 0; p < ra; ++p) {
          const term& t = f.args[p];
          u64 w = pow_u64(m, ra - 1 - p);
          if (t.is_literal) {
            if (t.value >= m)
              fail(errc::literal_out_of_range,
                   "#" + std::to_string(t.value) + " outside universe of size " +
                       std::to_string(m));
            lit_base += w * t.value;
          } else {
            weights[coord_of(t.var)] += w;
          }
        }
        definable_set out(m, k);
        kernels::gather(out.bits, table.bits, m, k, lit_base, weights);
        return out;
      }
      case fkind::eq: {
        const term&a = f.args[0], &b = f.args[1];
        auto lit_check = [&](const term& t) {
          if (t.value >= m)
            fail(errc::literal_out_of_range,
                 "#" + std::to_string(t.value) + " outside universe of size " + std::to_string(m));
        };
        if (a.is_literal && b.is_literal) {
          lit_check(a);
          lit_check(b);
          return a.value == b.value ? definable_set::full_set(m, k)
                                    : definable_set::empty_set(m, k);
        }
        definable_set out(m, k);
        if (!a.is_literal && !b.is_literal) {
          u32 c1 = coord_of(a.var), c2 = coord_of(b.var);
          if (c1 == c2) return definable_set::full_set(m, k);
          kernels::digit_eq(out.bits, m, k, c1, c2);
          return out;
        }
        const term& vt = a.is_literal ? b : a;
        const term& lt = a.is_literal ? a : b;
        lit_check(lt);
        kernels::digit_lit(out.bits, m, k, coord_of(vt.var), lt.value);
        return out;
      }
      case fkind::neg: {
        definable_set e = eval(*f.sub[0]);
        e.bits.flip();
        return e;
      }
      case fkind::conj:
      case fkind::disj:
      case fkind::impl:
      case fkind::iff: {
        definable_set a = eval(*f.sub[0]);
        definable_set b = eval(*f.sub[1]);
        kernels::bin_op op = f.kind == fkind::conj   ? kernels::bin_op::and_
                             : f.kind == fkind::disj ? kernels::bin_op::or_
                             : f.kind == fkind::impl ? kernels::bin_op::imp
                                                     : kernels::bin_op::eqv;
        kernels::combine(a.bits.words(), a.bits.words(), b.bits.words(), op);
        a.bits.renormalize();
        return a;
      }
      case fkind::exists:
      case fkind::forall: {
        const std::size_t mark = vars.size();
        for (const auto& v : f.bound) vars.push_back(v);
        definable_set body = eval(*f.sub[0]);
        vars.resize(mark);
        const bool universal = f.kind == fkind::forall;
        bitvec cur = std::move(body.bits);
        for (std::size_t i = 0; i < f.bound.size(); ++i) {
          bitvec next(cur.size() / m);
          kernels::project(next, cur, m, universal);
          cur = std::move(next);
        }
        definable_set out(m, k);
        out.bits = std::move(cur);
        return out;
      }
    }
    fail(errc::invalid_argument, "malformed formula node");
  }
};

}  // namespace

definable_set evaluate(const finite_structure& s, const formula& f, const context& ctx) {
  check_context(ctx);
  for (const auto& v : free_vars(f)) {
    bool found = false;
    for (const auto& c : ctx) found = found || c == v;
    if (!found) fail(errc::unbound_variable, "free variable '" + v + "' not in context");
  }
  evaluator ev{s, ctx};
  return ev.eval(f);
}

partitioned_formula partition(formula_ptr f, context obj, std::string text) {
  check_context(obj);
  partitioned_formula p;
  p.f = std::move(f);
  p.x = std::move(obj);
  p.text = std::move(text);
  for (const auto& v : free_vars(*p.f)) {
    bool in_x = false;
    for (const auto& c : p.x) in_x = in_x || c == v;
    if (!in_x) p.y.push_back(v);
  }
  return p;
}

std::vector<u32> normalize_base(const finite_structure& s, std::vector<u32> base) {
  for (u32 v : base)
    if (v >= s.m) fail(errc::invalid_argument, "base element outside the universe");
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  return base;
}

definable_set instance_at(const finite_structure& s, const partitioned_formula& phi,
                          std::span<const u32> a) {
  const u32 kx = static_cast<u32>(phi.x.size());
  const u32 ky = static_cast<u32>(phi.y.size());
  if (a.size() != ky) fail(errc::arity_mismatch, "parameter tuple arity != |y|");
  if (ky == 0) return evaluate(s, *phi.f, phi.x);
  context full = phi.x;
  full.insert(full.end(), phi.y.begin(), phi.y.end());
  definable_set big = evaluate(s, *phi.f, full);
  u64 lit_base = 0;
  for (u32 v : a) {
    if (v >= s.m) fail(errc::invalid_argument, "parameter outside the universe");
    lit_base = lit_base * s.m + v;
  }
  std::vector<u64> weights(kx);
  for (u32 c = 0; c < kx; ++c) weights[c] = pow_u64(s.m, kx + ky - 1 - c);
  definable_set out(s.m, kx);
  kernels::gather(out.bits, big.bits, s.m, kx, lit_base, weights);
  return out;
}

std::vector<definable_set> instances_over(const finite_structure& s,
                                          const partitioned_formula& phi,
                                          const std::vector<u32>& base) {
  const u32 kx = static_cast<u32>(phi.x.size());
  const u32 ky = static_cast<u32>(phi.y.size());
  if (ky == 0) return {evaluate(s, *phi.f, phi.x)};
  std::vector<u32> b = normalize_base(s, base);
  std::vector<definable_set> out;
  if (b.empty()) return out;

  context full = phi.x;
  full.insert(full.end(), phi.y.begin(), phi.y.end());
  definable_set big = evaluate(s, *phi.f, full);
  std::vector<u64> weights(kx);
  for (u32 c = 0; c < kx; ++c) weights[c] = pow_u64(s.m, kx + ky - 1 - c);

  std::vector<u32> pick(ky, 0);  // odometer over positions in b, lex order
  while (true) {
    u64 lit_base = 0;
    for (u32 p = 0; p < ky; ++p) lit_base = lit_base * s.m + b[pick[p]];
    definable_set inst(s.m, kx);
    kernels::gather(inst.bits, big.bits, s.m, kx, lit_base, weights);
    out.push_back(std::move(inst));
    u32 c = ky;
    while (c > 0 && ++pick[c - 1] == b.size()) pick[--c] = 0;
    if (c == 0) break;
  }
  return out;
}

std::vector<definable_set> delta_atoms(const finite_structure& s,
                                       const std::vector<partitioned_formula>& delta,
                                       const std::vector<u32>& base) {
  auto r = delta_atoms_ex(s, delta, base);
  std::vector<definable_set> out;
  out.reserve(r.cells.size());
  for (auto& c : r.cells) out.push_back(std::move(c.cell));
  return out;
}

delta_atoms_result delta_atoms_ex(const finite_structure& s,
                                  const std::vector<partitioned_formula>& delta,
                                  const std::vector<u32>& base) {
  if (delta.empty()) fail(errc::invalid_argument, "delta must be nonempty");
  for (const auto& p : delta)
    if (p.x != delta[0].x) fail(errc::shape_mismatch, "delta members must share one context");
  const u32 kx = static_cast<u32>(delta[0].x.size());

  // Deduplicated generator list, first occurrence order.
  std::vector<definable_set> gens;
  std::unordered_set<bitvec, bitvec_hash> seen;
  for (const auto& p : delta)
    for (auto& inst : instances_over(s, p, base))
      if (seen.insert(inst.bits).second) gens.push_back(std::move(inst));

  delta_atoms_result res;
  res.generators = gens.size();

  struct work {
    definable_set cell;
    bitvec pattern;
  };
  std::vector<work> cells;
  cells.push_back({definable_set::full_set(s.m, kx), bitvec(gens.size())});
  for (std::size_t g = 0; g < gens.size(); ++g) {
    std::vector<work> next;
    next.reserve(cells.size() * 2);
    for (auto& c : cells) {
      definable_set inside = ds_and(c.cell, gens[g]);
      definable_set outside = ds_diff(c.cell, gens[g]);
      if (outside.bits.any()) next.push_back({std::move(outside), c.pattern});
      if (inside.bits.any()) {
        bitvec p = c.pattern;
        p.set(g);
        next.push_back({std::move(inside), std::move(p)});
      }
    }
    cells = std::move(next);
  }
  // Lexicographic sign-pattern order: generator 0 decides first, positive
  // sign before negative.
  std::sort(cells.begin(), cells.end(), [&](const work& a, const work& b) {
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (a.pattern.test(g) != b.pattern.test(g)) return a.pattern.test(g);
    return false;
  });
  for (auto& c : cells) res.cells.push_back({std::move(c.cell), std::move(c.pattern)});
  return res;
}

namespace {

struct aut_search {
  const finite_structure& s;
  std::vector<std::vector<std::vector<u32>>> rel_tuples;  // per relation
  std::vector<std::vector<u64>> profile;                  // per vertex, (rel,pos) counts
  std::vector<int> sigma, inv;
  std::vector<u32> fixed;  // base, pointwise fixed
  std::vector<permutation> out;

  explicit aut_search(const finite_structure& s_) : s(s_) {
    rel_tuples.resize(s.tables.size());
    for (std::size_t r = 0; r < s.tables.size(); ++r) {
      const auto& t = s.tables[r];
      for (u64 i = t.bits.find_first(); i != bitvec::npos; i = t.bits.find_next(i))
        rel_tuples[r].push_back(t.tuple_at(i));
    }
    profile.assign(s.m, {});
    for (u32 v = 0; v < s.m; ++v) {
      for (std::size_t r = 0; r < rel_tuples.size(); ++r)
        for (u32 p = 0; p < s.sig.rels[r].arity; ++p) {
          u64 n = 0;
          for (const auto& t : rel_tuples[r]) n += t[p] == v;
          profile[v].push_back(n);
        }
    }
    sigma.assign(s.m, -1);
    inv.assign(s.m, -1);
  }

  bool is_fixed(u32 v) const {
    for (u32 f : fixed)
      if (f == v) return true;
    return false;
  }

  bool consistent(u32 v, u32 w) const {
    for (std::size_t r = 0; r < rel_tuples.size(); ++r) {
      for (const auto& t : rel_tuples[r]) {
        // forward: images of fully-mapped tuples through v must be tuples
        bool has_v = false, ready = true;
        for (u32 x : t) {
          has_v = has_v || x == v;
          ready = ready && (x == v || sigma[x] >= 0);
        }
        if (has_v && ready) {
          std::vector<u32> img(t.size());
          for (std::size_t p = 0; p < t.size(); ++p)
            img[p] = t[p] == v ? w : static_cast<u32>(sigma[t[p]]);
          if (!s.tables[r].test_tuple(img)) return false;
        }
        // backward: preimages through w must be tuples
        bool has_w = false;
        ready = true;
        for (u32 x : t) {
          has_w = has_w || x == w;
          ready = ready && (x == w || inv[x] >= 0);
        }
        if (has_w && ready) {
          std::vector<u32> pre(t.size());
          for (std::size_t p = 0; p < t.size(); ++p)
            pre[p] = t[p] == w ? v : static_cast<u32>(inv[t[p]]);
          if (!s.tables[r].test_tuple(pre)) return false;
        }
      }
    }
    return true;
  }

  void rec(u32 v) {
    if (v == s.m) {
      permutation p(s.m);
      for (u32 i = 0; i < s.m; ++i) p[i] = static_cast<u32>(sigma[i]);
      out.push_back(std::move(p));
      return;
    }
    for (u32 w = 0; w < s.m; ++w) {
      if (inv[w] >= 0) continue;
      if (is_fixed(v) && w != v) continue;
      if (!is_fixed(v) && is_fixed(w)) continue;
      if (profile[v] != profile[w]) continue;
      if (!consistent(v, w)) continue;
      sigma[v] = static_cast<int>(w);
      inv[w] = static_cast<int>(v);
      rec(v + 1);
      sigma[v] = -1;
      inv[w] = -1;
    }
  }
};

}  // namespace

std::vector<permutation> automorphisms(const finite_structure& s, const std::vector<u32>& base) {
  aut_search srch(s);
  srch.fixed = normalize_base(s, base);
  srch.rec(0);
  return srch.out;
}

bool same_type_over(const finite_structure& s, std::span<const u32> t1, std::span<const u32> t2,
                    const std::vector<u32>& base) {
  if (t1.size() != t2.size()) fail(errc::arity_mismatch, "tuples must have equal arity");
  for (u32 v : t1)
    if (v >= s.m) fail(errc::invalid_argument, "tuple entry outside the universe");
  for (u32 v : t2)
    if (v >= s.m) fail(errc::invalid_argument, "tuple entry outside the universe");
  auto auts = automorphisms(s, base);
  for (const auto& p : auts) {
    bool ok = true;
    for (std::size_t i = 0; i < t1.size(); ++i) ok = ok && p[t1[i]] == t2[i];
    if (ok) return true;
  }
  return false;
}

std::vector<std::vector<u32>> orbit_of(const finite_structure& s, std::span<const u32> t,
                                       const std::vector<u32>& base,
                                       const std::vector<permutation>* auts) {
  for (u32 v : t)
    if (v >= s.m) fail(errc::invalid_argument, "tuple entry outside the universe");
  std::vector<permutation> local;
  if (!auts) {
    local = automorphisms(s, base);
    auts = &local;
  }
  std::vector<std::vector<u32>> orb;
  std::unordered_set<u64> seen;
  for (const auto& p : *auts) {
    std::vector<u32> img(t.size());
    u64 idx = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      img[i] = p[t[i]];
      idx = idx * s.m + img[i];
    }
    if (seen.insert(idx).second) {
      if (seen.size() > default_budget().orbit_tuples)
        fail(errc::orbit_too_large, "orbit exceeds " +
                                        std::to_string(default_budget().orbit_tuples) +
                                        " tuples");
      orb.push_back(std::move(img));
    }
  }
  std::sort(orb.begin(), orb.end());
  return orb;
}

std::vector<std::vector<u64>> orbit_partition(const finite_structure& s, u32 n,
                                              const std::vector<u32>& base) {
  const u64 space = definable_set::space_size(s.m, n);
  if (space > default_budget().orbit_tuples)
    fail(errc::orbit_too_large,
         "orbit partition over " + std::to_string(space) + " tuples exceeds the gate");
  auto auts = automorphisms(s, base);
  definable_set shape(s.m, n);
  std::vector<std::vector<u64>> orbits;
  std::vector<bool> seen(space, false);
  for (u64 i = 0; i < space; ++i) {
    if (seen[i]) continue;
    auto t = shape.tuple_at(i);
    std::vector<u64> orb;
    for (const auto& p : auts) {
      u64 idx = 0;
      for (std::size_t c = 0; c < t.size(); ++c) idx = idx * s.m + p[t[c]];
      if (!seen[idx]) {
        seen[idx] = true;
        orb.push_back(idx);
      }
    }
    std::sort(orb.begin(), orb.end());
    orbits.push_back(std::move(orb));
  }
  return orbits;
}

}  // namespace wms::logic
