#pragma once

#include <span>
#include <vector>

#include "wms/base.hpp"

namespace wms::algebra {

// Finite Boolean algebra presented by its atoms: elements are subsets of
// {0..n_atoms-1} packed into a u64 mask, so n_atoms <= 62.
struct boolean_algebra {
  u32 n_atoms = 0;
  u64 top() const { return (u64{1} << n_atoms) - 1; }
  bool valid(u64 x) const { return (x & ~top()) == 0; }
};

boolean_algebra powerset_algebra(u32 n_atoms);

// Principal ideal {x : x <= gen}. Every ideal of a finite Boolean algebra is
// principal, so this is the general case.
struct principal_ideal {
  u64 gen = 0;
};

principal_ideal make_ideal(const boolean_algebra& b, u64 gen);
bool in_ideal(const boolean_algebra& b, const principal_ideal& i, u64 x);
bool is_proper(const boolean_algebra& b, const principal_ideal& i);

// B/I with the canonical surjection. Quotient atoms are the B-atoms not
// below gen, renumbered in ascending order.
struct quotient_result {
  boolean_algebra q;
  std::vector<u32> kept_atoms;        // q-atom index -> B-atom index
  u64 project(u64 x) const;           // B -> B/I
  u64 embed(u64 y) const;             // section B/I -> B (gen-atoms set to 0)
};

quotient_result quotient(const boolean_algebra& b, const principal_ideal& i);

// Wide ultrafilters (U with U ∩ I = ∅) of a finite algebra are exactly the
// principal ultrafilters at atoms outside gen; returned as ascending atom
// indices. Requires a proper ideal.
std::vector<u32> wide_ultrafilters(const boolean_algebra& b, const principal_ideal& i);

// All ultrafilters of B, as ascending atom indices.
std::vector<u32> ultrafilters(const boolean_algebra& b);

// X has the I-finite-meet-property iff every finite meet of members is
// outside I; in a finite algebra this reduces to the single total meet.
bool is_i_fmp(const boolean_algebra& b, const principal_ideal& i, std::span<const u64> xs);

// {b : exists x in X with (x Δ b) <= gen}, ascending mask order.
std::vector<u64> saturate(const boolean_algebra& b, const principal_ideal& i,
                          std::span<const u64> xs);

// Constructive witness for the wide Boolean prime ideal theorem: the lowest
// atom below meet(X) ∧ ¬gen, i.e. the least wide ultrafilter containing X.
u32 extend_to_wide_ultrafilter(const boolean_algebra& b, const principal_ideal& i,
                               std::span<const u64> xs);

}  // namespace wms::algebra
