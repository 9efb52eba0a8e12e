#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <string>
#include <system_error>
#include <vector>

namespace holomap::detail {

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// `re`, or `re+imi` / `re-imi` when the imaginary part is nonzero.
inline std::string format_complex(std::complex<double> z) {
  std::string out = format_double(z.real());
  if (z.imag() != 0.0) {
    out += z.imag() < 0 ? "-" : "+";
    out += format_double(std::abs(z.imag()));
    out += "i";
  }
  return out;
}

template <class T, class F>
std::string format_list(const std::vector<T>& xs, F&& fmt) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt(xs[i]);
  }
  return out + "]";
}

}  // namespace holomap::detail
