#pragma once

// Shared fixtures for the test binaries: the worked row systems used across
// the suites plus a seeded random-family generator for property tests.

#include <cstdlib>
#include <optional>
#include <random>

#include "polymmp/errors.hpp"
#include "polymmp/family.hpp"

namespace polymmp::testing {

inline Rat Q(const char* s) { return parse_rat(s); }

inline std::uint64_t property_seed() {
  if (const char* env = std::getenv("POLYMMP_SEED")) return std::strtoull(env, nullptr, 10);
  return 20240405u;
}

// Capped pyramid over the 3-torus; all right-hand sides drift at unit speed.
inline ParametricFamily pyramid_family(std::initializer_list<int> a) {
  RatMat A{{Rat(0), Rat(0), Rat(1)},  {Rat(-1), Rat(-1), Rat(-2)}, {Rat(2), Rat(0), Rat(-1)},
           {Rat(-2), Rat(0), Rat(-1)}, {Rat(0), Rat(2), Rat(-1)},  {Rat(0), Rat(-2), Rat(-1)}};
  RatVec B;
  for (int v : a) B.push_back(Rat(-v));
  RatVec C(6, Rat(1));
  return ParametricFamily(A, B, C);
}

// Pseudo-moment family of the colored-triangle example: three divisor rows
// followed by the two color rows (exempt).
inline ParametricFamily triangle_family() {
  RatMat A{{Rat(0), Rat(-1)}, {Rat(1), Rat(0)}, {Rat(-1), Rat(1)}, {Rat(1), Rat(0)},
           {Rat(0), Rat(1)}};
  RatVec B = {Rat(-3), Rat(0), Rat(-1), Rat(-1), Rat(-1)};
  RatVec C = {Rat(1), Rat(1), Rat(1), Rat(2), Rat(2)};
  return ParametricFamily(A, B, C, {3, 4});
}

// Rank-one family of the diagonal horospherical space with divisor
// coefficients (1, 2) and both color rows at weight 2.
inline ParametricFamily segment_family() {
  RatMat A{{Rat(1)}, {Rat(-1)}, {Rat(1)}, {Rat(1)}};
  RatVec B = {Rat(-1), Rat(-2), Rat(-2), Rat(-2)};
  RatVec C = {Rat(1), Rat(1), Rat(2), Rat(2)};
  return ParametricFamily(A, B, C, {2, 3});
}

// Random bounded families for the property suites: n <= 3, at most 8 rows,
// integer data in [-5, 5].
struct RandomFamilies {
  std::mt19937_64 rng;
  std::uniform_int_distribution<int> entry{-5, 5};

  explicit RandomFamilies(std::uint64_t seed) : rng(seed) {}

  // Any bounded family (possibly empty at every parameter).
  std::optional<ParametricFamily> any() {
    const std::size_t n = 1 + rng() % 3;
    const std::size_t m = n + 1 + rng() % (8 - n);
    RatMat A(m, n);
    RatVec B(m), C(m);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) A.at(r, c) = entry(rng);
      B[r] = entry(rng);
      C[r] = entry(rng);
    }
    try {
      return ParametricFamily(A, B, C);
    } catch (const InvariantError&) {
      return std::nullopt;
    }
  }

  // A family whose sweep can start at 0: interior point at 0 and every facet
  // present, with strictly positive drift so the sweep terminates.
  std::optional<ParametricFamily> sweepable() {
    const std::size_t n = 1 + rng() % 3;
    const std::size_t m = n + 1 + rng() % (7 - n);
    RatMat A(m, n);
    RatVec B(m), C(m);
    RatVec x0(n);
    for (auto& v : x0) v = entry(rng);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) A.at(r, c) = entry(rng);
      B[r] = dot(A.row(r), x0) - Rat(1 + static_cast<int>(rng() % 3));
      C[r] = Rat(1 + static_cast<int>(rng() % 3));
    }
    try {
      ParametricFamily family(A, B, C);
      if (!family.omega_max().contains(Rat(0))) return std::nullopt;
      // Classes must start cleanly at 0 (0 itself may coincidentally be a
      // class boundary, in which case the sample is unusable for sweeps).
      const auto span = class_decomposition(family, Rat(0));
      if (span.classes.front().interval.is_point()) return std::nullopt;
      return family;
    } catch (const InvariantError&) {
      return std::nullopt;
    }
  }
};

}  // namespace polymmp::testing
