#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace uhardy {

inline constexpr const char* version_string = "0.1.0";

using cplx = std::complex<double>;

// Exact integer/rational carriers. Factorial ratios at the documented capacity
// limits (arguments up to ~120) overflow any fixed-width type; conversion to
// double happens only at consumption sites.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A request exceeded a documented hard capacity bound. Distinct from
// std::invalid_argument (malformed input) and std::domain_error (outside the
// mathematical domain) so the CLI can map error classes to exit codes.
struct capacity_error : std::length_error {
  using std::length_error::length_error;
};

inline BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  BigInt r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact: r is C(n-k+i, i) after each step
  }
  return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

}  // namespace uhardy
