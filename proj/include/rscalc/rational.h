#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rscalc {

/// Arbitrary-precision rational; GMP keeps it canonical (reduced, positive
/// denominator).
using Rational = mpq_class;

/// Accepts "p", "p/q", and decimal forms such as "-0.125" or "2.5e-3".
/// Decimal strings are converted exactly. Throws ParseError.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string format_rational(const Rational& q);

/// Best continued-fraction approximation with |result - value| <= tol.
Rational rationalize(double value, double tol);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace rscalc
