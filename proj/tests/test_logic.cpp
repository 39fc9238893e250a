#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "wms/logic.hpp"

using namespace wms;
using namespace wms::logic;

namespace {

signature graph_sig() { return signature{{{"E", 2, true}}}; }

finite_structure path3() { return make_structure("P3", 3, graph_sig(), {{{0, 1}, {1, 2}}}); }

finite_structure k3() {
  return make_structure("K3", 3, graph_sig(), {{{0, 1}, {0, 2}, {1, 2}}});
}

// Tree-walking truth oracle, independent of the bit-parallel evaluator.
bool truth(const finite_structure& s, const formula& f,
           std::vector<std::pair<std::string, u32>>& env) {
  auto value = [&](const term& t) -> u32 {
    if (t.is_literal) return t.value;
    for (std::size_t i = env.size(); i-- > 0;)
      if (env[i].first == t.var) return env[i].second;
    FAIL("oracle: unbound variable");
    return 0;
  };
  switch (f.kind) {
    case fkind::verum: return true;
    case fkind::falsum: return false;
    case fkind::rel: {
      std::vector<u32> t;
      for (const auto& a : f.args) t.push_back(value(a));
      return s.holds(static_cast<u32>(f.rel), t);
    }
    case fkind::eq: return value(f.args[0]) == value(f.args[1]);
    case fkind::neg: return !truth(s, *f.sub[0], env);
    case fkind::conj: return truth(s, *f.sub[0], env) && truth(s, *f.sub[1], env);
    case fkind::disj: return truth(s, *f.sub[0], env) || truth(s, *f.sub[1], env);
    case fkind::impl: return !truth(s, *f.sub[0], env) || truth(s, *f.sub[1], env);
    case fkind::iff: return truth(s, *f.sub[0], env) == truth(s, *f.sub[1], env);
    case fkind::exists:
    case fkind::forall: {
      const bool ex = f.kind == fkind::exists;
      // assign bound variables one by one
      std::vector<u32> pick(f.bound.size(), 0);
      while (true) {
        std::size_t mark = env.size();
        for (std::size_t i = 0; i < f.bound.size(); ++i) env.push_back({f.bound[i], pick[i]});
        bool v = truth(s, *f.sub[0], env);
        env.resize(mark);
        if (v == ex) return ex;
        std::size_t c = pick.size();
        while (c > 0 && ++pick[c - 1] == s.m) pick[--c] = 0;
        if (c == 0) return !ex;
      }
    }
  }
  return false;
}

void check_against_oracle(const finite_structure& s, const std::string& text,
                          const context& ctx) {
  CAPTURE(text);
  auto f = parse_formula(text, s.sig);
  auto ext = evaluate(s, *f, ctx);
  for (u64 i = 0; i < ext.size(); ++i) {
    auto t = ext.tuple_at(i);
    std::vector<std::pair<std::string, u32>> env;
    for (std::size_t c = 0; c < ctx.size(); ++c) env.push_back({ctx[c], t[c]});
    CHECK(ext.bits.test(i) == truth(s, *f, env));
  }
}

definable_set named_set(const finite_structure& s, std::initializer_list<u32> elems) {
  definable_set d(s.m, 1);
  for (u32 e : elems) d.bits.set(e);
  return d;
}

}  // namespace

TEST_CASE("symmetric relations are closed under argument swap") {
  auto s = path3();
  CHECK(s.tables[0].count() == 4);  // (0,1),(1,0),(1,2),(2,1)
  CHECK(s.holds(0, std::vector<u32>{1, 0}));
  CHECK(!s.holds(0, std::vector<u32>{0, 2}));
}

TEST_CASE("parser rejects malformed input with positions") {
  auto sig = graph_sig();
  CHECK_THROWS_WITH_AS(parse_formula("E(x", sig), doctest::Contains("position"), error);
  CHECK_THROWS_AS(parse_formula("", sig), error);
  CHECK_THROWS_AS(parse_formula("E(x,y) &", sig), error);
  CHECK_THROWS_AS(parse_formula("E(x,y) E(y,x)", sig), error);
  CHECK_THROWS_AS(parse_formula("exists . E(x,y)", sig), error);
  try {
    parse_formula("R(x,y)", sig);
    FAIL("expected unknown relation");
  } catch (const error& e) {
    CHECK(e.code() == errc::unknown_relation);
  }
  try {
    parse_formula("E(x)", sig);
    FAIL("expected arity mismatch");
  } catch (const error& e) {
    CHECK(e.code() == errc::arity_mismatch);
  }
}

TEST_CASE("arrows are right-associative and != desugars") {
  auto s = k3();
  // a -> b -> c  ==  a -> (b -> c): with a=c=false, b arbitrary this is true.
  auto f1 = parse_formula("false -> E(x,y) -> false", s.sig);
  auto ext1 = evaluate(s, *f1, {"x", "y"});
  CHECK(ext1.count() == ext1.size());
  auto f2 = parse_formula("x != y", s.sig);
  auto f3 = parse_formula("!(x = y)", s.sig);
  CHECK(extension_equal(evaluate(s, *f2, {"x", "y"}), evaluate(s, *f3, {"x", "y"})));
  // & binds tighter than |
  auto f4 = parse_formula("E(x,y) | E(x,y) & false", s.sig);
  CHECK(extension_equal(evaluate(s, *f4, {"x", "y"}),
                        evaluate(s, *parse_formula("E(x,y)", s.sig), {"x", "y"})));
}

TEST_CASE("frozen evaluation examples") {
  auto s = path3();
  auto adj = evaluate(s, *parse_formula("E(x,y)", s.sig), {"x", "y"});
  CHECK(adj.count() == 4);
  auto dom = evaluate(s, *parse_formula("exists y. E(x,y)", s.sig), {"x"});
  CHECK(dom.count() == 3);  // every vertex of a path has a neighbour
}

TEST_CASE("evaluator agrees with the truth-table oracle") {
  for (const auto& s : {path3(), k3()}) {
    check_against_oracle(s, "E(x,y)", {"x", "y"});
    check_against_oracle(s, "E(x,y) & E(y,z) -> E(x,z)", {"x", "y", "z"});
    check_against_oracle(s, "exists y. E(x,y)", {"x"});
    check_against_oracle(s, "forall y. (E(x,y) -> exists z. (E(y,z) & z != x))", {"x"});
    check_against_oracle(s, "x = y <-> !(x != y)", {"x", "y"});
    check_against_oracle(s, "E(x,#1) | x = #0", {"x"});
    check_against_oracle(s, "exists y,z. (E(x,y) & E(y,z) & y != z)", {"x"});
    check_against_oracle(s, "forall x. exists y. E(x,y)", {"x"});
    check_against_oracle(s, "(true & E(x,y)) <-> (E(x,y) | false)", {"x", "y"});
    check_against_oracle(s, "exists x. (E(x,y) & forall y. (E(x,y) -> E(y,x)))", {"y"});
    check_against_oracle(s, "#0 = #0 & #1 != #2", {"x"});
  }
  // non-symmetric ternary relation exercises literal offsets in the gather
  signature tsig{{{"R", 3, false}}};
  auto t = make_structure("T", 2, tsig, {{{0, 1, 0}, {1, 1, 1}}});
  check_against_oracle(t, "R(x,y,x)", {"x", "y"});
  check_against_oracle(t, "exists z. R(x,z,y)", {"x", "y"});
  check_against_oracle(t, "R(#0,x,y)", {"x", "y"});
  check_against_oracle(t, "forall z. (R(x,z,y) -> R(x,y,x))", {"x", "y"});
}

TEST_CASE("evaluation errors") {
  auto s = path3();
  auto f = parse_formula("E(x,y)", s.sig);
  CHECK_THROWS_AS(evaluate(s, *f, {"x"}), error);          // unbound y
  CHECK_THROWS_AS(evaluate(s, *f, {}), error);             // empty context
  CHECK_THROWS_AS(evaluate(s, *f, {"x", "x"}), error);     // duplicate context
  try {
    evaluate(s, *parse_formula("x = #5", s.sig), {"x"});
    FAIL("expected literal range error");
  } catch (const error& e) {
    CHECK(e.code() == errc::literal_out_of_range);
  }
}

TEST_CASE("extension_equal checks shape") {
  auto s = path3();
  auto a = evaluate(s, *parse_formula("E(x,y)", s.sig), {"x", "y"});
  auto b = evaluate(s, *parse_formula("exists y. E(x,y)", s.sig), {"x"});
  CHECK_THROWS_AS(extension_equal(a, b), error);
}

TEST_CASE("frozen delta atom examples") {
  auto s = path3();
  auto phi = partition(parse_formula("E(x,y)", s.sig), {"x"});

  SUBCASE("adjacency over all parameters") {
    auto atoms = delta_atoms(s, {phi}, {0, 1, 2});
    REQUIRE(atoms.size() == 2);
    CHECK(extension_equal(atoms[0], named_set(s, {1})));
    CHECK(extension_equal(atoms[1], named_set(s, {0, 2})));
  }
  SUBCASE("equality yields singletons") {
    auto eq = partition(parse_formula("x = y", s.sig), {"x"});
    auto atoms = delta_atoms(s, {eq}, {0, 1, 2});
    REQUIRE(atoms.size() == 3);
    for (u32 v = 0; v < 3; ++v) CHECK(extension_equal(atoms[v], named_set(s, {v})));
  }
  SUBCASE("empty parameter set gives the single full atom") {
    auto atoms = delta_atoms(s, {phi}, {});
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].count() == 3);
  }
}

TEST_CASE("delta atoms partition the space") {
  auto s = k3();
  auto phi = partition(parse_formula("E(x,y) & E(y,z)", s.sig), {"x", "y"});
  CHECK(phi.y == context{"z"});
  auto atoms = delta_atoms(s, {phi}, {0, 2});
  definable_set seen(s.m, 2);
  u64 total = 0;
  for (const auto& a : atoms) {
    CHECK(a.bits.any());
    CHECK(!a.bits.intersects(seen.bits));
    seen.bits |= a.bits;
    total += a.count();
  }
  CHECK(total == 9);
}

TEST_CASE("instances match instance_at") {
  auto s = path3();
  auto phi = partition(parse_formula("E(x,y)", s.sig), {"x"});
  auto insts = instances_over(s, phi, {0, 2});
  REQUIRE(insts.size() == 2);
  CHECK(extension_equal(insts[0], instance_at(s, phi, std::vector<u32>{0})));
  CHECK(extension_equal(insts[1], instance_at(s, phi, std::vector<u32>{2})));
  CHECK(extension_equal(insts[0], named_set(s, {1})));
}

TEST_CASE("automorphism groups of small graphs") {
  auto p = path3();
  auto ap = automorphisms(p, {});
  REQUIRE(ap.size() == 2);
  CHECK(ap[0] == permutation{0, 1, 2});  // identity first
  CHECK(ap[1] == permutation{2, 1, 0});

  auto k = k3();
  CHECK(automorphisms(k, {}).size() == 6);
  auto fixed = automorphisms(k, {0, 1, 2});
  REQUIRE(fixed.size() == 1);
  CHECK(fixed[0] == permutation{0, 1, 2});
  CHECK(automorphisms(k, {0}).size() == 2);
}

TEST_CASE("same type over the empty base") {
  auto p = path3();
  CHECK(same_type_over(p, std::vector<u32>{0}, std::vector<u32>{2}, {}));
  CHECK(!same_type_over(p, std::vector<u32>{0}, std::vector<u32>{1}, {}));
  CHECK(same_type_over(p, std::vector<u32>{0, 1}, std::vector<u32>{2, 1}, {}));
  CHECK_THROWS_AS(same_type_over(p, std::vector<u32>{0}, std::vector<u32>{0, 1}, {}), error);
}

TEST_CASE("orbits are sorted and ordered by least member") {
  auto p = path3();
  auto orb = orbit_of(p, std::vector<u32>{0}, {});
  REQUIRE(orb.size() == 2);
  CHECK(orb[0] == std::vector<u32>{0});
  CHECK(orb[1] == std::vector<u32>{2});

  auto parts = orbit_partition(p, 1, {});
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == std::vector<u64>{0, 2});
  CHECK(parts[1] == std::vector<u64>{1});

  // fixing the base splits the orbit
  auto parts_fixed = orbit_partition(p, 1, {0});
  CHECK(parts_fixed.size() == 3);
}
