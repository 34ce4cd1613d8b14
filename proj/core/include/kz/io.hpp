#pragma once

#include <ostream>
#include <string>

#include <kz/types.hpp>

namespace kz {

// 17 significant digits: enough to round-trip any double, so repeated runs
// with the same seed produce byte-identical CSV bodies.
std::string format_double(double x);
std::string format_complex(Complex z);  // "re+imj" / "re-imj"

}  // namespace kz
