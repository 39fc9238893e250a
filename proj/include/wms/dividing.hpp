#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wms/ideals.hpp"
#include "wms/logic.hpp"

namespace wms::dividing {

// Certificate that psi(x,c) k-divides over base: a sequence of parameter
// tuples, all in the same Aut(S/base)-orbit as c, whose psi-instances have
// thin conjunction on every k-element index subset.
struct dividing_witness {
  u32 k = 0;
  std::vector<std::vector<u32>> sequence;
  std::vector<u32> base;
  std::string psi;
};

struct uniform_entry {
  u32 formula = 0;  // index into the delta list
  std::vector<u32> tuple;
};

// Sequence of instances psi_{l(i)}(x,a_i) whose joint conjunction is wide
// while each entry k-divides over base plus all earlier parameter vertices.
struct uniform_sequence {
  u32 k = 0;
  std::vector<uniform_entry> entries;
  std::vector<u32> base;
};

struct signed_instance {
  logic::partitioned_formula phi;
  std::vector<u32> tuple;
  bool positive = true;
};

// True iff every member of seq lies in the Aut(S/base)-orbit of c and every
// k-element index subset of seq has a thin instance conjunction. Requires
// |seq| >= k and tuples of arity |y|.
bool check_dividing_witness(const logic::finite_structure& s, const ideals::ideal& i,
                            const logic::partitioned_formula& psi, std::span<const u32> c,
                            const std::vector<u32>& base,
                            const std::vector<std::vector<u32>>& seq, u32 k);

// Lex-least non-decreasing sequence of length max_len inside the orbit of c
// passing check_dividing_witness, if any; with distinct set the entries are
// pairwise different (strictly ascending). For k = 1 a thin psi(x,c)
// short-circuits to the length-1 witness (c).
std::optional<dividing_witness> search_k_dividing(const logic::finite_structure& s,
                                                  const ideals::ideal& i,
                                                  const logic::partitioned_formula& psi,
                                                  std::span<const u32> c,
                                                  const std::vector<u32>& base, u32 k,
                                                  u32 max_len, bool distinct = false);

// First (formula-major, then parameter-lex) sequence of length len whose
// entries stay jointly wide and each k-divide over the grown base; dividing
// is certified by a minimal search_k_dividing run of length max(k, 1).
std::optional<uniform_sequence> search_uniform_sequence(
    const logic::finite_structure& s, const ideals::ideal& i,
    const std::vector<logic::partitioned_formula>& delta, const std::vector<u32>& base, u32 k,
    u32 len, u64 node_budget = default_budget().search_nodes);

// Largest L <= cap admitting a uniform sequence; 0 when none exists. Valid
// sequences are closed under prefixes, so the maximum is well-defined.
u32 max_uniform_length(const logic::finite_structure& s, const ideals::ideal& i,
                       const std::vector<logic::partitioned_formula>& delta,
                       const std::vector<u32>& base, u32 k, u32 cap,
                       u64 node_budget = default_budget().search_nodes);

// Validates a proposed forking certificate: the conjunction of the signed
// instances pi must imply the disjunction of the cover instances, and every
// cover instance must admit a k-dividing witness over base.
bool check_fork_cover(const logic::finite_structure& s, const ideals::ideal& i,
                      const std::vector<signed_instance>& pi, const std::vector<u32>& base,
                      const std::vector<std::pair<logic::partitioned_formula, std::vector<u32>>>&
                          cover,
                      u32 k);

}  // namespace wms::dividing
