#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace xinflate {

// Exact arithmetic for ordinal values; interval endpoints and the
// v + k*delta grid must compare bit-exactly.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "-12", "6.6", "0.125", "1e-3" or "3/7". Throws ValidationError.
Rational parse_rational(std::string_view text);

/// Shortest exact decimal when the denominator divides a power of ten,
/// "p/q" otherwise.
std::string format_rational(const Rational& r);

Integer floor_int(const Rational& r);
Integer ceil_int(const Rational& r);
inline Rational floor_rat(const Rational& r) { return Rational(floor_int(r)); }
inline Rational ceil_rat(const Rational& r) { return Rational(ceil_int(r)); }
bool is_integral(const Rational& r);

double to_double(const Rational& r);

} // namespace xinflate
