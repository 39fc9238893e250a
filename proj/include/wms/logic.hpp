#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wms/bitvec.hpp"
#include "wms/defset.hpp"

namespace wms::logic {

struct relation_decl {
  std::string name;
  u32 arity = 0;
  bool symmetric = false;
};

struct signature {
  std::vector<relation_decl> rels;
  int find(std::string_view name) const;
};

// Finite relational structure; relation tables are stored as exact
// extensions so evaluation is pure bit manipulation.
struct finite_structure {
  std::string name;
  u32 m = 0;
  signature sig;
  std::vector<definable_set> tables;

  bool holds(u32 r, std::span<const u32> t) const { return tables[r].test_tuple(t); }
};

// Validates arities and entries; closes symmetric relations under all
// coordinate permutations.
finite_structure make_structure(std::string name, u32 m, signature sig,
                                const std::vector<std::vector<std::vector<u32>>>& tuples);

enum class fkind : u8 { verum, falsum, rel, eq, neg, conj, disj, impl, iff, exists, forall };

struct term {
  bool is_literal = false;
  u32 value = 0;     // literal payload
  std::string var;   // variable name otherwise
};

struct formula;
using formula_ptr = std::shared_ptr<const formula>;

struct formula {
  fkind kind = fkind::verum;
  int rel = -1;                     // signature index when kind == rel
  std::string rel_name;
  std::vector<term> args;           // rel / eq
  std::vector<std::string> bound;   // exists / forall
  std::vector<formula_ptr> sub;
};

// Concrete grammar (lowest to highest precedence): <-> , -> , | , & , !.
// Both arrows are right-associative. "t != u" abbreviates "!(t = u)".
// Quantifiers: ("exists"|"forall") v1,..,vk "." <unary>. Literals "#3".
// Relation names and arities are resolved against sig at parse time.
formula_ptr parse_formula(const std::string& text, const signature& sig);

// Free variables in first-appearance order.
std::vector<std::string> free_vars(const formula& f);

using context = std::vector<std::string>;

// Context invariant: nonempty, no duplicates.
void check_context(const context& ctx);

// Extension of f over ctx-tuples. Free variables must be contained in ctx;
// literals must lie inside the universe.
definable_set evaluate(const finite_structure& s, const formula& f, const context& ctx);

bool extension_equal(const definable_set& a, const definable_set& b);

// phi(x; y): object variables x, parameter variables y.
struct partitioned_formula {
  formula_ptr f;
  context x, y;
  std::string text;  // original source, echoed in reports
};

// y defaults to the free variables outside obj, in first-appearance order.
partitioned_formula partition(formula_ptr f, context obj, std::string text = {});

// Parameter instances phi(x; a) for a ranging over base^{|y|} in lex order
// (base ascending). Used by delta atoms, stability and dividing searches.
std::vector<definable_set> instances_over(const finite_structure& s,
                                          const partitioned_formula& phi,
                                          const std::vector<u32>& base);

// One instance phi(x; a) for an explicit parameter tuple.
definable_set instance_at(const finite_structure& s, const partitioned_formula& phi,
                          std::span<const u32> a);

struct atom_cell {
  definable_set cell;
  bitvec pattern;  // sign over the deduplicated generator list, bit g = generator g
};

struct delta_atoms_result {
  std::vector<atom_cell> cells;  // pattern-lex order: generator 0 first, positive before negative
  u64 generators = 0;
};

// Atoms of the finite subalgebra generated by all instances of delta over
// parameters from base. All members of delta must share the same object
// context. Empty cells are dropped; with no instances the single full cell
// is returned.
delta_atoms_result delta_atoms_ex(const finite_structure& s,
                                  const std::vector<partitioned_formula>& delta,
                                  const std::vector<u32>& base);

std::vector<definable_set> delta_atoms(const finite_structure& s,
                                       const std::vector<partitioned_formula>& delta,
                                       const std::vector<u32>& base);

using permutation = std::vector<u32>;

// Aut(S/base): automorphisms fixing base pointwise, in lexicographic order
// (the identity is always first).
std::vector<permutation> automorphisms(const finite_structure& s, const std::vector<u32>& base);

bool same_type_over(const finite_structure& s, std::span<const u32> t1, std::span<const u32> t2,
                    const std::vector<u32>& base);

// Orbit of t under Aut(S/base), ascending by tuple index; raises
// orbit-too-large past the budget gate.
std::vector<std::vector<u32>> orbit_of(const finite_structure& s, std::span<const u32> t,
                                       const std::vector<u32>& base,
                                       const std::vector<permutation>* auts = nullptr);

// Orbits of all n-tuples, each orbit ascending, orbits ordered by least
// member. This is the complete-type partition over base in the full language.
std::vector<std::vector<u64>> orbit_partition(const finite_structure& s, u32 n,
                                              const std::vector<u32>& base);

// Base sets are ascending, duplicate-free vertex lists inside the universe.
std::vector<u32> normalize_base(const finite_structure& s, std::vector<u32> base);

}  // namespace wms::logic
