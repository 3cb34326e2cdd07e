#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polymmp/horospherical.hpp"

namespace polymmp {

/** Sweep data built from a polarized embedding: the pseudo-moment family
 *  (A, B~, C~) with the color rows exempt, plus the moment-side columns and
 *  the drifting translation v^eps = v0 - eps * anticanonical_translation. */
struct FamilyBundle {
  ParametricFamily family;
  std::size_t ray_count = 0;  // G-stable rows (color rows follow)
  RatVec b_tilde, c_tilde;
  RatVec moment_B, moment_C;  // translation formulas; color entries are zero
  RatVec v0_weights, k_weights;
};

/// Refuses inputs that are not Q-Gorenstein (failing vertex in the message).
FamilyBundle build_family(const PolarizedEmbedding& embedding);

/** Per-class variety descriptor: one per equivalence class of the sweep. */
struct ClassReport {
  EpsInterval interval;
  Rat representative;
  std::vector<std::size_t> rows_in_force;
  ColoredFan fan;
  std::vector<std::size_t> colors;  // touched walls
  bool q_gorenstein = false;
  QFactorialReport q_factorial;
};

struct ContractedCurve {
  Curve curve;
  Rat boundary_value;  // (D + eps K) . C at the boundary (zero when contracted)
  Rat k_value;         // K . C
};

struct MMPStep {
  enum class Kind { divisorial, flip, mori_fibration } kind = Kind::divisorial;
  Rat epsilon;
  std::size_t source_class = 0;  // indices into the trace's class list
  std::size_t boundary_class = 0;
  std::size_t target_class = 0;  // == boundary_class for divisorial steps
  std::vector<std::size_t> dropped_rows;
  std::vector<ContractedCurve> forward_curves;   // contracted by the step
  std::vector<ContractedCurve> backward_curves;  // contracted by the flip's other leg
  bool forward_morphism = false;
  std::optional<bool> backward_morphism;  // flips only
};

/** General fiber of the Mori fibration, present when the dimension drops. */
struct FiberData {
  std::vector<IntVec> quotient_basis;      // Z-basis of M / M^1 (ambient coords)
  std::vector<std::size_t> fiber_rows;     // tight rows I, original indices
  RatMat fiber_A;                          // induced rows over the quotient
  RatVec fiber_b;                          // B~ restricted to I
  std::vector<std::size_t> colors;         // R^1 \ R
  std::vector<IntVec> fan_edges;           // primitive facet normals
  bool is_simplex = false;
  bool walls_are_facets = false;
  std::optional<std::size_t> picard;
};

struct TerminalData {
  Rat eps_max;
  std::vector<std::size_t> tight_rows;             // I, original indices
  std::vector<IntVec> m1_basis;                    // direction lattice of Q^{eps_max}
  std::vector<std::size_t> new_parabolic_roots;    // R^1 \ R
  std::vector<RatVec> terminal_vertices;           // weight coordinates
  bool dimension_drops = false;
  std::optional<FiberData> fiber;
};

TerminalData terminal_data(const HoroSpace& space, const FamilyBundle& bundle,
                           const ParametricFamily& last_family, const Rat& eps_max);

struct GenericityReport {
  bool q_factorial_generic = false;
  std::vector<std::vector<std::size_t>> q_factorial_witnesses;
  bool fiber_generic = false;
  std::vector<std::vector<std::size_t>> fiber_witnesses;
};

/// Genericity of B~ against the row matrix, with violating subsets.
GenericityReport is_general_divisor(const FamilyBundle& bundle);

struct MMPTrace {
  std::string fingerprint;
  ClassDecomposition decomposition;
  std::vector<ClassReport> classes;  // aligned with decomposition.classes
  std::vector<MMPStep> steps;
  bool k_nef = false;                // no K-negative curve on the input: no steps
  Rat eps_max;
  TerminalData terminal;
  GenericityReport genericity;
};

/** Full sweep: decompose, classify every boundary (one-point class = flip,
 *  absorbed boundary = divisorial contraction, terminal = Mori fibration),
 *  attach contracted curves with canonical-divisor signs, and compute the
 *  terminal data. Hard-errors when the structural classification disagrees
 *  with the singularity criterion. */
MMPTrace run_mmp(const PolarizedEmbedding& embedding, bool use_oracle = false,
                 std::string fingerprint = {});

/// Moment pair of the swept family at a parameter value.
MomentPair class_pair(const HoroSpace& space, const FamilyBundle& bundle,
                      const ParametricFamily& family, const Rat& eps);

}  // namespace polymmp
