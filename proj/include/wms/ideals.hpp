#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wms/defset.hpp"
#include "wms/rational.hpp"

namespace wms::ideals {

enum class ideal_kind : u8 { trivial, threshold, fraction, coarse, cover, explicit_sets, product };

class ideal;
using ideal_ptr = std::shared_ptr<const ideal>;

// Negligibility schema on definable sets of a fixed context arity.
// Immutable; wideness queries are pure.
class ideal {
public:
  ideal_kind kind = ideal_kind::trivial;
  u32 arity = 1;
  u64 t = 0;                          // threshold bound
  rat param;                          // fraction epsilon / coarse alpha
  std::vector<definable_set> family;  // cover members / explicit thin generators
  ideal_ptr left, right;              // product factors

  std::string label() const;
};

ideal_ptr trivial_ideal(u32 arity = 1);
ideal_ptr threshold_ideal(u64 t, u32 arity = 1);
// wide iff |D| >= eps * m^k; requires 0 < eps < 1.
ideal_ptr fraction_ideal(const rat& eps, u32 arity = 1);
// wide iff D nonempty and |D|^q >= (m^k)^p for alpha = p/q in (0,1].
ideal_ptr coarse_ideal(const rat& alpha, u32 arity = 1);
// thin iff D is contained in the union of the family (all members one shape).
ideal_ptr cover_ideal(std::vector<definable_set> family);
// thin iff D is below some single listed set (downward closure of the list).
ideal_ptr explicit_ideal(std::vector<definable_set> thin_sets);
ideal_ptr product_ideal(ideal_ptr left, ideal_ptr right);
// Left-nested product of an arity-1 ideal; power(i,1) = i, n = 0 rejected.
ideal_ptr power_ideal(ideal_ptr base, u32 n);

bool is_wide(const ideal& i, const definable_set& d);
inline bool is_thin(const ideal& i, const definable_set& d) { return !is_wide(i, d); }

// Wideness of the intersection of signed instances. The universe size must
// be passed explicitly so the empty conjunction denotes the full set.
bool is_wide_type(const ideal& i, u32 m,
                  const std::vector<std::pair<definable_set, bool>>& signed_instances);

}  // namespace wms::ideals
