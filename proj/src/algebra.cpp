#include "wms/algebra.hpp"

#include <algorithm>
#include <bit>

namespace wms::algebra {

namespace {
void check_element(const boolean_algebra& b, u64 x, const char* what) {
  if (!b.valid(x))
    fail(errc::invalid_argument, std::string(what) + " is not an element of the algebra");
}

u64 meet_all(const boolean_algebra& b, std::span<const u64> xs) {
  u64 m = b.top();
  for (u64 x : xs) {
    check_element(b, x, "member");
    m &= x;
  }
  return m;
}
}  // namespace

boolean_algebra powerset_algebra(u32 n_atoms) {
  if (n_atoms == 0) fail(errc::invalid_argument, "powerset algebra needs at least one atom");
  if (n_atoms > default_budget().algebra_atoms)
    fail(errc::cap_exceeded, "algebra capped at " +
                                 std::to_string(default_budget().algebra_atoms) + " atoms");
  return boolean_algebra{n_atoms};
}

principal_ideal make_ideal(const boolean_algebra& b, u64 gen) {
  check_element(b, gen, "generator");
  return principal_ideal{gen};
}

bool in_ideal(const boolean_algebra& b, const principal_ideal& i, u64 x) {
  check_element(b, x, "element");
  return (x & ~i.gen) == 0;
}

bool is_proper(const boolean_algebra& b, const principal_ideal& i) { return i.gen != b.top(); }

u64 quotient_result::project(u64 x) const {
  u64 y = 0;
  for (u32 a = 0; a < kept_atoms.size(); ++a)
    if (x >> kept_atoms[a] & 1) y |= u64{1} << a;
  return y;
}

u64 quotient_result::embed(u64 y) const {
  u64 x = 0;
  for (u32 a = 0; a < kept_atoms.size(); ++a)
    if (y >> a & 1) x |= u64{1} << kept_atoms[a];
  return x;
}

quotient_result quotient(const boolean_algebra& b, const principal_ideal& i) {
  check_element(b, i.gen, "generator");
  quotient_result r;
  for (u32 a = 0; a < b.n_atoms; ++a)
    if (!(i.gen >> a & 1)) r.kept_atoms.push_back(a);
  // A quotient by the improper ideal would be degenerate (no atoms); callers
  // that need properness check it themselves, but 0 atoms is never a valid
  // algebra here.
  if (r.kept_atoms.empty())
    fail(errc::improper_ideal, "quotient by the improper ideal is degenerate");
  r.q = boolean_algebra{static_cast<u32>(r.kept_atoms.size())};
  return r;
}

std::vector<u32> wide_ultrafilters(const boolean_algebra& b, const principal_ideal& i) {
  if (!is_proper(b, i)) fail(errc::improper_ideal, "wide ultrafilters need a proper ideal");
  std::vector<u32> out;
  for (u32 a = 0; a < b.n_atoms; ++a)
    if (!(i.gen >> a & 1)) out.push_back(a);
  return out;
}

std::vector<u32> ultrafilters(const boolean_algebra& b) {
  std::vector<u32> out(b.n_atoms);
  for (u32 a = 0; a < b.n_atoms; ++a) out[a] = a;
  return out;
}

bool is_i_fmp(const boolean_algebra& b, const principal_ideal& i, std::span<const u64> xs) {
  if (xs.empty()) fail(errc::invalid_argument, "FMP test needs a nonempty family");
  return !in_ideal(b, i, meet_all(b, xs));
}

std::vector<u64> saturate(const boolean_algebra& b, const principal_ideal& i,
                          std::span<const u64> xs) {
  for (u64 x : xs) check_element(b, x, "member");
  std::vector<u64> out;
  // Enumerate candidates as x ^ d over subsets d of gen; distinct by
  // construction per x, deduped across members.
  for (u64 x : xs) {
    u64 d = 0;
    while (true) {
      out.push_back(x ^ d);
      if (d == i.gen) break;
      d = (d - i.gen) & i.gen;  // next subset of gen
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

u32 extend_to_wide_ultrafilter(const boolean_algebra& b, const principal_ideal& i,
                               std::span<const u64> xs) {
  if (xs.empty()) fail(errc::invalid_argument, "extension needs a nonempty family");
  u64 room = meet_all(b, xs) & ~i.gen;
  if (room == 0)
    fail(errc::no_wide_extension, "family has no finite-meet-property modulo the ideal");
  return static_cast<u32>(std::countr_zero(room));
}

}  // namespace wms::algebra
