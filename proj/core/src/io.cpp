#include <kz/io.hpp>

#include <cmath>
#include <cstdio>

namespace kz {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  std::string s = format_double(z.real());
  s += (z.imag() < 0.0 || (z.imag() == 0.0 && std::signbit(z.imag()))) ? "-" : "+";
  s += format_double(std::abs(z.imag()));
  s += "j";
  return s;
}

}  // namespace kz
