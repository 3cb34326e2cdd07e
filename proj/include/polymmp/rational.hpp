#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

namespace polymmp {

// Exact rational scalar. GMP-backed, always kept in canonical form
// (reduced, positive denominator) by going through the helpers below
// at every construction from raw parts or text.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

/// Builds num/den in canonical form. Throws InvariantError on den == 0.
Rat rat_from_parts(const Int& num, const Int& den);

/// Parses "p", "-p" or "p/q" (optional sign on either part).
Rat parse_rat(const std::string& text);

/// Renders as "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& value);

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

}  // namespace polymmp
