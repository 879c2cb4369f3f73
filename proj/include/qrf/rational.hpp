#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qrf {

// Exact arbitrary-precision rational scalar. All phase-space algebra in
// qrf::canon is carried out over this type; doubles appear only at the
// boundary to the numeric backends.
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q", a plain integer, or a decimal literal ("0.25" -> 1/4).
// Throws std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Canonical "p/q" rendering (always includes the denominator, e.g. "0/1").
std::string to_fraction_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace qrf
