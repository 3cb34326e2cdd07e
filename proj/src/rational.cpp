#include "polymmp/rational.hpp"

#include "polymmp/errors.hpp"

namespace polymmp {

Rat rat_from_parts(const Int& num, const Int& den) {
  if (den == 0) throw InvariantError("rational with zero denominator");
  // The gmp backend does not canonicalize two-part construction and
  // mishandles negative denominators, so divide two canonical values.
  Rat r(num);
  r /= Rat(den);
  return r;
}

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw InvariantError("empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    const Int num(text.substr(0, slash));
    const Int den(text.substr(slash + 1));
    return rat_from_parts(num, den);
  } catch (const std::runtime_error&) {
    throw InvariantError("bad rational literal: \"" + text + "\"");
  }
}

std::string rat_to_string(const Rat& value) {
  const Int den = rat_den(value);
  if (den == 1) return rat_num(value).str();
  return rat_num(value).str() + "/" + den.str();
}

}  // namespace polymmp
