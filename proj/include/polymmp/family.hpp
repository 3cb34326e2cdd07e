#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polymmp/polytope.hpp"

namespace polymmp {

/** Interval of rational parameter values; either side may be infinite.
 *  A point interval is closed on both sides. */
struct EpsInterval {
  std::optional<Rat> lo, hi;  // nullopt = infinite
  bool lo_open = true;
  bool hi_open = true;
  bool is_empty = true;

  static EpsInterval none();
  static EpsInterval point(const Rat& value);
  static EpsInterval open(std::optional<Rat> lo, std::optional<Rat> hi);
  static EpsInterval closed(std::optional<Rat> lo, std::optional<Rat> hi);
  static EpsInterval half_open(const Rat& lo, std::optional<Rat> hi);  // [lo, hi)

  enum class Kind { empty, point, open, closed, half_open };
  Kind kind() const;
  bool is_point() const;
  bool contains(const Rat& value) const;
  EpsInterval intersect(const EpsInterval& other) const;
  std::string to_string() const;

  bool operator==(const EpsInterval&) const = default;
};

struct OmegaPair {
  EpsInterval omega0;  // parameters where the face is nonempty (closed)
  EpsInterval omega1;  // parameters where its index set is maximal (open or point)
};

/** One-parameter family of polyhedra { x : A x >= B + eps C } restricted to
 *  an active row universe, with exempt rows (zero rows plus caller-designated
 *  ones) excluded from the facet-survival requirement. Rows keep their
 *  original indices across restrictions so index bookkeeping never drifts. */
class ParametricFamily {
 public:
  ParametricFamily(RatMat A, RatVec B, RatVec C, std::vector<std::size_t> exempt = {},
                   std::optional<AffineHost> ambient = std::nullopt);

  /// Same data restricted to a smaller active row universe.
  ParametricFamily with_rows(std::vector<std::size_t> rows) const;

  /// Mirror family (C negated) for sweeping toward the left extremity.
  ParametricFamily reversed_direction() const;

  const RatMat& matrix_A() const { return A_; }
  const RatVec& vector_B() const { return B_; }
  const RatVec& vector_C() const { return C_; }
  const std::vector<std::size_t>& rows() const { return rows_; }
  const std::vector<std::size_t>& exempt_rows() const { return exempt_; }
  const std::optional<AffineHost>& ambient() const { return ambient_; }
  std::size_t intrinsic_dim() const;

  /// Non-exempt active rows (the ones whose facets must survive).
  std::vector<std::size_t> mandatory_rows() const;

  HPolyhedron polytope_at(const Rat& eps) const;

  /// Combinatorial type at eps, faces labeled with original row indices.
  CombinatorialType type_at(const Rat& eps) const;

  /// Membership of eps in Omega^1 of the index set I (original indices).
  bool in_omega1(const std::vector<std::size_t>& I, const Rat& eps) const;

  OmegaPair omega_intervals(const std::vector<std::size_t>& I) const;

  /// Omega^1(empty) intersected with Omega^1(i) over all mandatory rows.
  EpsInterval omega_max() const;

  /** Superset of all class boundaries inside `range`: unique-parameter
   *  subsets of size <= dim+1 plus the finite endpoints of the single-row
   *  and whole-polytope Omega^0 intervals. Sorted, duplicate-free. */
  std::vector<Rat> candidate_breakpoints(const EpsInterval& range) const;

  /** Exponential-cost reference candidate set: finite Omega^0 endpoints and
   *  point Omega^1 values of every subset of the active rows. */
  std::vector<Rat> oracle_breakpoints(const EpsInterval& range) const;

 private:
  void validate();
  RatMat intrinsic_rows_A() const;   // active rows, host coordinates
  RatVec intrinsic_rows_B(const Rat& eps) const;

  RatMat A_;
  RatVec B_, C_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> exempt_;
  std::optional<AffineHost> ambient_;
};

/** One equivalence class of the family: a maximal parameter interval with
 *  constant combinatorial data, its sampled representative and the row
 *  universe in force there. */
struct ClassRecord {
  EpsInterval interval;
  Rat representative;
  CombinatorialType type;
  std::vector<std::size_t> rows_in_force;
};

/// Classes of one maximal span, covering [start, hi) (hi = span's upper end).
struct SpanDecomposition {
  std::vector<ClassRecord> classes;
  std::optional<Rat> hi;
};

SpanDecomposition class_decomposition(const ParametricFamily& family, const Rat& start);

/// As above but with the exponential reference candidate set.
SpanDecomposition class_decomposition_oracle(const ParametricFamily& family, const Rat& start);

struct ExtensionResult {
  enum class Case { full_dim, subspace } kind = Case::full_dim;
  ParametricFamily family;
  std::vector<std::size_t> dropped_rows;  // rows removed from the universe
  std::vector<std::size_t> tight_rows;    // rows tight on the whole boundary polytope
};

/** Continuation of the family past the finite upper end of its maximal span:
 *  either the same ambient with degenerate facet rows dropped, or the family
 *  restricted to the affine hull of the boundary polytope. */
ExtensionResult extend_family(const ParametricFamily& family, const Rat& eps1);

struct FamilyHop {
  Rat eps;
  std::vector<std::size_t> dropped_rows;
  bool subspace = false;
};

/** Full decomposition across extension hops, starting at 0. When the sweep
 *  terminates (the boundary polytope loses interior), the terminal value is
 *  recorded and appended as a final point class. */
struct ClassDecomposition {
  std::vector<ClassRecord> classes;
  std::optional<Rat> eps_max;              // nullopt = classes continue forever
  std::vector<FamilyHop> hops;
  std::vector<ParametricFamily> families;  // family of each span, in order
  std::vector<std::size_t> class_family;   // class index -> span index
};

ClassDecomposition iterated_decomposition(const ParametricFamily& family);

/// Reference implementation used by `--oracle`: same hops, brute candidates.
ClassDecomposition iterated_decomposition_oracle(const ParametricFamily& family);

}  // namespace polymmp
