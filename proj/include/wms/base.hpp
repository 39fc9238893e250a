#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wms {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

enum class errc {
  invalid_argument,
  improper_ideal,
  no_wide_extension,
  syntax_error,
  unknown_relation,
  arity_mismatch,
  unbound_variable,
  literal_out_of_range,
  shape_mismatch,
  degenerate_universe,
  orbit_too_large,
  search_budget_exceeded,
  cap_exceeded,
};

const char* errc_name(errc c);

// Every module failure funnels through this type. The CLI maps the three
// budget-class codes to exit 4 and everything else to exit 3.
class error : public std::runtime_error {
public:
  error(errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  errc code() const noexcept { return code_; }
  bool is_budget() const noexcept {
    return code_ == errc::orbit_too_large || code_ == errc::search_budget_exceeded ||
           code_ == errc::cap_exceeded;
  }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& what) { throw error(c, what); }

// Hard resource gates. Breaching one raises; nothing is silently truncated.
struct budget {
  u64 orbit_tuples = 10'000;       // max orbit size enumerated per tuple
  u64 search_nodes = 10'000'000;   // max backtracking nodes per witness search
  u32 extension_bits = 34;         // materialized extensions capped at 2^34 bits
  u32 algebra_atoms = 62;          // finite Boolean algebras capped at 2^62 elements
  u32 orbit_universe = 8;          // full-language type counting capped at m <= 8
};

inline const budget& default_budget() {
  static const budget b{};
  return b;
}

}  // namespace wms
