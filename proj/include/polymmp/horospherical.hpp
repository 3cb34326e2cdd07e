#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polymmp/family.hpp"
#include "polymmp/root_system.hpp"

namespace polymmp {

/** Strictly convex cone in N with a color subset; canonical form keeps the
 *  primitive extreme rays sorted. */
struct ColoredCone {
  std::vector<IntVec> generators;
  std::vector<std::size_t> colors;  // free simple roots

  bool operator==(const ColoredCone&) const = default;
  bool operator<(const ColoredCone& other) const;
};

struct ColoredFan {
  std::vector<ColoredCone> maximal_cones;  // canonical order

  bool operator==(const ColoredFan&) const = default;
};

/// True iff `point` lies in the cone spanned by `generators`.
bool cone_contains(const std::vector<IntVec>& generators, const RatVec& point);

/// Canonical form: primitive extreme rays, sorted; colors sorted.
ColoredCone canonical_cone(std::vector<IntVec> generators, std::vector<std::size_t> colors);

/** B-stable divisor: one coefficient per G-stable ray and one per color. */
struct BDivisor {
  RatVec g_stable;
  std::map<std::size_t, Rat> colors;

  bool operator==(const BDivisor&) const = default;
};

/** Moment data of a polarized embedding: the pseudo-moment polytope (rows:
 *  G-stable rays then color coroots) plus the translation v0 into the
 *  dominant chamber. The moment polytope is v0 + Q-tilde. */
struct MomentPair {
  HPolyhedron q_tilde;
  RatVec v0;             // weight coordinates
  std::size_t ray_rows;  // number of leading G-stable rows
};

/// Weight coordinates of the moment-polytope point over an intrinsic point.
RatVec weight_point(const HoroSpace& space, const MomentPair& pair, const RatVec& u);

/// Pairing <., alpha^vee> minimized over the moment polytope is 0.
std::vector<std::size_t> touched_walls(const HoroSpace& space, const MomentPair& pair);
/// Walls containing the whole moment polytope.
std::vector<std::size_t> contained_walls(const HoroSpace& space, const MomentPair& pair);

MomentPair moment_polytopes(const HoroSpace& space, const std::vector<IntVec>& rays,
                            const BDivisor& divisor);

struct ValidityReport {
  bool valid = false;
  std::vector<std::string> reasons;  // empty when valid
};

/// Full dimension, contained in no wall, inside the dominant chamber.
ValidityReport gh_valid(const HoroSpace& space, const MomentPair& pair);

ColoredFan fan_from_polytope(const HoroSpace& space, const MomentPair& pair);

/// Reads the divisor back; inverse of moment_polytopes by construction.
BDivisor divisor_from_polytopes(const HoroSpace& space, const MomentPair& pair);

/// Type equality over the shared row system plus equal touched-wall sets.
bool gh_equivalent(const HoroSpace& space, const MomentPair& a, const MomentPair& b);

/** Face map of a facet of the source pseudo-moment polytope: the target
 *  face supported by the translated half-space, recorded by the indices of
 *  the target vertices on it (empty = the whole target polytope). */
struct FaceImage {
  std::size_t facet_row;
  std::vector<std::size_t> target_vertices;
  bool whole_target = false;
};

struct MorphismCheck {
  bool exists = false;
  std::string reason;
  std::vector<FaceImage> face_map;
};

/** Existence of the dominant equivariant morphism from the source embedding
 *  to the target. `inclusion` expresses the target lattice basis in source
 *  intrinsic coordinates (identity when the spaces agree); `absorbed_roots`
 *  lists free roots of the source that became parabolic in the target. */
MorphismCheck morphism_exists(const HoroSpace& space, const MomentPair& source,
                              const MomentPair& target, const RatMat& inclusion,
                              const std::vector<std::size_t>& absorbed_roots);

struct Curve {
  enum class Kind { edge, schubert } kind = Kind::edge;
  std::vector<std::size_t> active;  // maximal active set of the supporting face
  RatVec endpoints[2];              // weight coords (edge curves)
  std::size_t alpha = 0;            // schubert curves
  RatVec vertex;                    // weight coords (schubert curves)

  std::string describe() const;
};

struct CurveIntersection {
  Curve curve;
  Rat value;  // D . C
};

/// One edge curve per edge (integral length) and one Schubert curve per
/// off-wall (vertex, color) pair (wall pairing of the vertex).
std::vector<CurveIntersection> curves_with_intersections(const HoroSpace& space,
                                                         const MomentPair& pair);

struct QGorensteinReport {
  bool value = false;
  std::optional<RatVec> failing_vertex;  // intrinsic coordinates
};

/** Solvability of A_I y = C_I over the maximal active set of every vertex;
 *  `c_rows` is aligned with the polytope's rows. */
QGorensteinReport q_gorenstein_check(const HPolyhedron& q_tilde, const RatVec& c_rows);

/// Anticanonical right-hand column (1,...,1, c_alpha...) for the row layout.
RatVec anticanonical_column(const HoroSpace& space, std::size_t ray_rows);

struct QFactorialReport {
  bool value = false;
  std::vector<std::string> reasons;
  std::optional<std::size_t> picard;  // set when value is true
};

/** Simplicity plus the wall conditions: every touched wall meets the moment
 *  polytope in a facet and no facet lies in two walls. */
QFactorialReport is_q_factorial(const HoroSpace& space, const MomentPair& pair);

/** Validated polarized embedding. Construction checks the fan invariants,
 *  derives the moment polytopes and verifies ampleness structurally (the
 *  normal colored fan of the moment polytope must equal the input fan). */
struct PolarizedEmbedding {
  HoroSpace space;
  std::vector<IntVec> rays;
  ColoredFan fan;
  BDivisor divisor;
  MomentPair polytopes;
};

PolarizedEmbedding make_embedding(HoroSpace space, std::vector<IntVec> rays, ColoredFan fan,
                                  BDivisor divisor);

/** Sampled completeness/overlap diagnostics for a colored fan (relative
 *  interior points, pairwise, plus coordinate directions). */
ValidityReport fan_sanity(const ColoredFan& fan, std::size_t dim);

}  // namespace polymmp
