#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wms/logic.hpp"
#include "wms/rational.hpp"

namespace wms::families {

enum class family_id : u8 { ladder_clique, half_graph, matching, random_graph, chain_union };

struct family_spec {
  family_id id = family_id::matching;
  u32 n = 1;     // ladder n / half-graph height / matching pairs / chain count
  u32 m = 0;     // random_graph universe size
  rat p;         // random_graph edge probability
  u64 seed = 0;  // random_graph seed
};

// Generated structure plus part labels. Vertex numbering is deterministic:
// ladder_clique lays out the clique block first, then the u side, then the
// w side, with E(u_i, w_j) iff i <= j; chain_union concatenates blocks of
// sizes 1..n with LEQ reflexive inside each block.
struct family_instance {
  logic::finite_structure s;
  std::vector<u32> clique_part, u_part, w_part;
  std::vector<std::vector<u32>> blocks;
};

family_instance generate(const family_spec& spec);

family_instance ladder_clique(u32 n);
family_instance half_graph(u32 h);
family_instance matching(u32 pairs);
family_instance random_graph(u32 m, const rat& p, u64 seed);
family_instance chain_union(u32 n);

// Exact size data behind the coarse-dimension ratio log|D| / log(m^k).
struct ratio_record {
  u64 count = 0;
  u64 space = 0;
  double ratio = 0.0;
  bool neg_inf = false;  // empty set sentinel
};

ratio_record coarse_ratio(const logic::finite_structure& s, const definable_set& d);

// Sign of ratio - alpha decided by the integer comparison |D|^q vs space^p;
// the empty-set sentinel compares below every nonnegative alpha.
int ratio_cmp(const ratio_record& r, const rat& alpha);

enum class ladder_mode : u8 { implicit_counts, explicit_enum, cross_check };

// One experiment row. The canonical witness is b_j = w_j (the lowest w
// levels); rows are E_i(G,b) = {x : E(x,b_j) iff i <= j}, whose product
// counts H_N since the rows live on disjoint coordinates of G^N.
struct ladder_row_report {
  u32 n = 0;
  bool witness = false;          // all canonical rows nonempty (needs n >= N)
  std::vector<u64> row_sizes;
  u64 prod = 0;                  // |H_N|
  double ratio = 0.0;            // log prod / log |G|^N, -inf sentinel when 0
  double bound = 0.0;            // (N-1)/N * log n / log|G| + 1/N
  bool pass = false;             // witness and bound < 1/2, checked exactly
  bool chi_ok = true;            // explicit modes: chi cuts out the clique
  bool b_scan_ok = true;         // explicit modes: nonempty rows force b in ladder
  bool cross_ok = true;          // cross_check mode: implicit == explicit
};

struct ratio_report {
  u32 big_n = 0;
  ladder_mode mode = ladder_mode::implicit_counts;
  std::vector<ladder_row_report> rows;
};

// Experiment over n in [n_lo, n_hi]; N >= 4. Explicit enumeration is capped
// at n <= 6; implicit counting works for n <= 62.
ratio_report ladder_experiment(u32 n_lo, u32 n_hi, u32 big_n, ladder_mode mode);

// CSV with header n,row_sizes,prod,ratio,bound,pass; row_sizes joined by '|'.
std::string report_csv(const ratio_report& r);

}  // namespace wms::families
