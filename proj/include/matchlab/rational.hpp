#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace matchlab {

using BigInt = boost::multiprecision::cpp_int;

// All probabilities and derived quantities in the core are exact rationals.
// Dominance classification needs exact equal-vs-strict decisions, so no
// floating point anywhere on the allocation path.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// "3/4" for proper fractions, "2" when the denominator is 1. Lossless:
// rational_from_string(rational_to_string(r)) == r.
std::string rational_to_string(const Rational& r);

// Accepts "num", "num/den", and plain decimal/scientific literals
// ("0.005", "1e-4"), all parsed exactly.
Rational rational_from_string(const std::string& s);

}  // namespace matchlab
