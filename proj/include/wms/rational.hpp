#pragma once

#include <boost/rational.hpp>
#include <string>

#include "wms/base.hpp"

namespace wms {

using rat = boost::rational<i64>;

// Accepts "p", "p/q", optional sign, whitespace-free. q > 0 after normalization.
rat parse_rat(const std::string& text);

std::string rat_str(const rat& r);

}  // namespace wms
