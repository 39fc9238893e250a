#include "wms/base.hpp"

#include <cctype>
#include <cstdlib>

#include "wms/rational.hpp"

namespace wms {

const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::improper_ideal: return "improper-ideal";
    case errc::no_wide_extension: return "no-wide-extension";
    case errc::syntax_error: return "syntax-error";
    case errc::unknown_relation: return "unknown-relation";
    case errc::arity_mismatch: return "arity-mismatch";
    case errc::unbound_variable: return "unbound-variable";
    case errc::literal_out_of_range: return "literal-out-of-range";
    case errc::shape_mismatch: return "shape-mismatch";
    case errc::degenerate_universe: return "degenerate-universe";
    case errc::orbit_too_large: return "orbit-too-large";
    case errc::search_budget_exceeded: return "search-budget-exceeded";
    case errc::cap_exceeded: return "cap-exceeded";
  }
  return "unknown";
}

rat parse_rat(const std::string& text) {
  if (text.empty()) fail(errc::invalid_argument, "empty rational");
  std::size_t pos = 0;
  auto read_int = [&](const char* what) -> i64 {
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    std::size_t digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0 || digits > 18)
      fail(errc::invalid_argument, std::string("bad rational ") + what + " in '" + text + "'");
    return std::strtoll(text.substr(start, pos - start).c_str(), nullptr, 10);
  };
  i64 num = read_int("numerator");
  i64 den = 1;
  if (pos < text.size()) {
    if (text[pos] != '/') fail(errc::invalid_argument, "bad rational '" + text + "'");
    ++pos;
    den = read_int("denominator");
    if (pos != text.size()) fail(errc::invalid_argument, "bad rational '" + text + "'");
  }
  if (den == 0) fail(errc::invalid_argument, "zero denominator in '" + text + "'");
  return rat(num, den);
}

std::string rat_str(const rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace wms
