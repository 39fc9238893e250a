#include "wms/ideals.hpp"

#include <gmpxx.h>

#include "wms/kernels.hpp"

namespace wms::ideals {

namespace {
ideal_ptr make(ideal i) { return std::make_shared<ideal>(std::move(i)); }

u64 pow_u64(u64 b, u32 e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}
}  // namespace

std::string ideal::label() const {
  switch (kind) {
    case ideal_kind::trivial: return "trivial";
    case ideal_kind::threshold: return "threshold(" + std::to_string(t) + ")";
    case ideal_kind::fraction: return "fraction(" + rat_str(param) + ")";
    case ideal_kind::coarse: return "coarse(" + rat_str(param) + ")";
    case ideal_kind::cover: return "cover[" + std::to_string(family.size()) + "]";
    case ideal_kind::explicit_sets: return "explicit[" + std::to_string(family.size()) + "]";
    case ideal_kind::product: return "product(" + left->label() + "," + right->label() + ")";
  }
  return "?";
}

ideal_ptr trivial_ideal(u32 arity) {
  if (arity == 0) fail(errc::invalid_argument, "ideal arity must be positive");
  ideal i;
  i.kind = ideal_kind::trivial;
  i.arity = arity;
  return make(std::move(i));
}

ideal_ptr threshold_ideal(u64 t, u32 arity) {
  if (arity == 0) fail(errc::invalid_argument, "ideal arity must be positive");
  ideal i;
  i.kind = ideal_kind::threshold;
  i.arity = arity;
  i.t = t;
  return make(std::move(i));
}

ideal_ptr fraction_ideal(const rat& eps, u32 arity) {
  if (arity == 0) fail(errc::invalid_argument, "ideal arity must be positive");
  if (eps <= rat(0) || eps >= rat(1))
    fail(errc::invalid_argument, "fraction parameter must lie in (0,1)");
  ideal i;
  i.kind = ideal_kind::fraction;
  i.arity = arity;
  i.param = eps;
  return make(std::move(i));
}

ideal_ptr coarse_ideal(const rat& alpha, u32 arity) {
  if (arity == 0) fail(errc::invalid_argument, "ideal arity must be positive");
  if (alpha <= rat(0) || alpha > rat(1))
    fail(errc::invalid_argument, "coarse parameter must lie in (0,1]");
  ideal i;
  i.kind = ideal_kind::coarse;
  i.arity = arity;
  i.param = alpha;
  return make(std::move(i));
}

ideal_ptr cover_ideal(std::vector<definable_set> family) {
  if (family.empty()) fail(errc::invalid_argument, "cover family must be nonempty");
  for (const auto& f : family) require_same_shape(f, family[0], "cover_ideal");
  ideal i;
  i.kind = ideal_kind::cover;
  i.arity = family[0].arity;
  i.family = std::move(family);
  return make(std::move(i));
}

ideal_ptr explicit_ideal(std::vector<definable_set> thin_sets) {
  if (thin_sets.empty()) fail(errc::invalid_argument, "explicit family must be nonempty");
  for (const auto& f : thin_sets) require_same_shape(f, thin_sets[0], "explicit_ideal");
  ideal i;
  i.kind = ideal_kind::explicit_sets;
  i.arity = thin_sets[0].arity;
  i.family = std::move(thin_sets);
  return make(std::move(i));
}

ideal_ptr product_ideal(ideal_ptr left, ideal_ptr right) {
  if (!left || !right) fail(errc::invalid_argument, "product needs two factors");
  ideal i;
  i.kind = ideal_kind::product;
  i.arity = left->arity + right->arity;
  i.left = std::move(left);
  i.right = std::move(right);
  return make(std::move(i));
}

ideal_ptr power_ideal(ideal_ptr base, u32 n) {
  if (n == 0) fail(errc::invalid_argument, "power exponent must be positive");
  if (!base || base->arity != 1) fail(errc::invalid_argument, "power base must have arity 1");
  ideal_ptr acc = base;
  for (u32 i = 1; i < n; ++i) acc = product_ideal(acc, base);
  return acc;
}

bool is_wide(const ideal& i, const definable_set& d) {
  if (d.arity != i.arity)
    fail(errc::arity_mismatch,
         "ideal " + i.label() + " has arity " + std::to_string(i.arity) + ", set has " +
             std::to_string(d.arity));
  switch (i.kind) {
    case ideal_kind::trivial:
      return d.bits.any();
    case ideal_kind::threshold:
      return d.count() > i.t;
    case ideal_kind::fraction: {
      // |D| >= eps * m^k as exact integer comparison |D|*q >= p*m^k.
      using u128 = unsigned __int128;
      u128 lhs = static_cast<u128>(d.count()) * static_cast<u128>(i.param.denominator());
      u128 rhs = static_cast<u128>(i.param.numerator()) * static_cast<u128>(d.size());
      return lhs >= rhs;
    }
    case ideal_kind::coarse: {
      if (d.m == 1) fail(errc::degenerate_universe, "coarse ideal needs a universe of size >= 2");
      u64 n = d.count();
      if (n == 0) return false;
      // log|D| >= alpha * log(m^k) with alpha = p/q <=> |D|^q >= (m^k)^p.
      mpz_class lhs, rhs;
      mpz_ui_pow_ui(lhs.get_mpz_t(), n, static_cast<unsigned long>(i.param.denominator()));
      mpz_ui_pow_ui(rhs.get_mpz_t(), d.size(), static_cast<unsigned long>(i.param.numerator()));
      return lhs >= rhs;
    }
    case ideal_kind::cover: {
      require_same_shape(d, i.family[0], "cover wideness");
      bitvec rest = d.bits;
      for (const auto& f : i.family) rest.andnot(f.bits);
      return rest.any();
    }
    case ideal_kind::explicit_sets: {
      require_same_shape(d, i.family[0], "explicit wideness");
      for (const auto& f : i.family)
        if (d.bits.subset_of(f.bits)) return false;
      return true;
    }
    case ideal_kind::product: {
      const u64 block = pow_u64(d.m, i.right->arity);
      const u64 fibers = d.size() / block;
      definable_set wide_fibers(d.m, i.left->arity);
      kernels::flag_fill(wide_fibers.bits, fibers, [&](u64 f) {
        definable_set fiber(d.m, i.right->arity);
        fiber.bits = d.bits.extract(f * block, block);
        return is_wide(*i.right, fiber);
      });
      return is_wide(*i.left, wide_fibers);
    }
  }
  fail(errc::invalid_argument, "malformed ideal");
}

bool is_wide_type(const ideal& i, u32 m,
                  const std::vector<std::pair<definable_set, bool>>& signed_instances) {
  definable_set acc = definable_set::full_set(m, i.arity);
  for (const auto& [inst, sign] : signed_instances) {
    require_same_shape(acc, inst, "is_wide_type");
    if (sign)
      acc.bits &= inst.bits;
    else
      acc.bits.andnot(inst.bits);
  }
  return is_wide(i, acc);
}

}  // namespace wms::ideals
