#pragma once

#include <optional>
#include <vector>

#include "wms/ideals.hpp"
#include "wms/logic.hpp"

namespace wms::stability {

using logic::finite_structure;
using logic::partitioned_formula;

struct rank_result {
  enum class kind : u8 { neg_infinity, finite, exceeds_cap } k = kind::neg_infinity;
  u32 value = 0;  // meaningful for finite
  u32 cap = 0;    // n_max echo for exceeds_cap
  // Splitting parameters in breadth-first order (2^d - 1 nodes for depth d,
  // children of slot p at 2p+1 / 2p+2 = positive / negative branch). Depth
  // is value when finite, cap+1 for exceeds_cap (a certificate that the
  // rank exceeds the cap).
  std::vector<std::vector<u32>> tree;

  bool is_finite() const { return k == kind::finite; }
};

// Local wide rank of psi with respect to phi-splits, capped at n_max.
// Deterministic: candidate parameters are scanned in lex order and the tree
// records the least successful splitter at every node.
rank_result rank(const finite_structure& s, const ideals::ideal& i, const definable_set& psi,
                 const partitioned_formula& phi, u32 n_max);

// Direct search for a depth-n splitting tree (every signed root-to-leaf path
// intersected with psi is wide). Independent of rank(); used as its oracle.
// n = 0 returns an empty tree iff psi is wide.
std::optional<std::vector<std::vector<u32>>> tree_witness(const finite_structure& s,
                                                          const ideals::ideal& i,
                                                          const definable_set& psi,
                                                          const partitioned_formula& phi, u32 n);

// Validates a proposed breadth-first splitting tree.
bool tree_check(const finite_structure& s, const ideals::ideal& i, const definable_set& psi,
                const partitioned_formula& phi, const std::vector<std::vector<u32>>& tree);

enum class row_mode : u8 {
  listed,    // row types range over the N listed parameters only
  all_of_m,  // rows must extend to a wide complete phi-type over all of M
};

struct order_witness {
  std::vector<std::vector<u32>> a;  // object tuples, phi(a_i, b_j) iff i < j
  std::vector<std::vector<u32>> b;  // parameter tuples
};

// Half-graph pattern of length N with every row I-wide; rows are pruned
// during the backtracking search, so the first (lex-least) witness returned
// is schedule-independent.
std::optional<order_witness> wide_order_witness(const finite_structure& s,
                                                const ideals::ideal& i,
                                                const partitioned_formula& phi, u32 n,
                                                row_mode mode = row_mode::listed,
                                                bool distinct = false);

// All 2^N signed intersections wide.
std::optional<std::vector<std::vector<u32>>> wide_independence_witness(
    const finite_structure& s, const ideals::ideal& i, const partitioned_formula& phi, u32 n,
    bool distinct = false);

// For all i < j: ¬phi(x,b_i) ∧ phi(x,b_j) wide and phi(x,b_i) ∧ ¬phi(x,b_j)
// thin. Requires N >= 2.
std::optional<std::vector<std::vector<u32>>> wide_strict_order_witness(
    const finite_structure& s, const ideals::ideal& i, const partitioned_formula& phi, u32 n,
    bool distinct = false);

struct type_record {
  std::string pattern;          // signs over the generator list; empty for orbit types
  std::vector<u32> rep;         // lexicographically least realizing tuple
  u64 size = 0;
  bool wide = false;
};

struct type_count {
  u64 total = 0;
  u64 wide = 0;
  std::vector<type_record> types;
};

// Realized complete Delta-types over base = atoms of the instance algebra.
type_count count_wide_types(const finite_structure& s, const ideals::ideal& i,
                            const std::vector<partitioned_formula>& delta,
                            const std::vector<u32>& base);

// Full-language complete types = Aut(S/base)-orbits of n-tuples; gated to
// universes of size <= 8.
type_count count_wide_types_full(const finite_structure& s, const ideals::ideal& i, u32 n,
                                 const std::vector<u32>& base);

}  // namespace wms::stability
