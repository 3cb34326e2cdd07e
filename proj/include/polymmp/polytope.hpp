#pragma once

#include <optional>
#include <vector>

#include "polymmp/lp.hpp"

namespace polymmp {

/** Affine subspace origin + basis, in ambient coordinates. Hosts
 *  lower-dimensional polyhedra; basis vectors are linearly independent. */
struct AffineHost {
  RatVec origin;
  std::vector<RatVec> basis;
};

/** A face together with its maximal active set: every row tight on the
 *  whole face is listed. Coordinates are carried both intrinsically and in
 *  the ambient space. */
struct FaceRecord {
  std::vector<std::size_t> active;  // sorted row indices
  std::size_t dim = 0;
  RatVec witness;           // relative-interior point, intrinsic coordinates
  RatVec witness_ambient;
};

/** Maximal active set of every nonempty face, canonically ordered, plus the
 *  touched-wall bookkeeping filled in by callers that know about walls. */
struct CombinatorialType {
  std::vector<std::vector<std::size_t>> faces;
  std::vector<std::size_t> touched_walls;

  bool operator==(const CombinatorialType&) const = default;
};

/** Rational polyhedron { x : A x >= b }, optionally restricted to an affine
 *  host subspace. Feasibility and boundedness are computed, never assumed. */
class HPolyhedron {
 public:
  HPolyhedron(RatMat A, RatVec b);
  HPolyhedron(RatMat A, RatVec b, AffineHost host);

  std::size_t row_count() const { return A_.rows(); }
  std::size_t ambient_dim() const { return A_.cols(); }
  std::size_t intrinsic_dim() const { return intrinsic_A_.cols(); }

  const RatMat& ambient_A() const { return A_; }
  const RatVec& ambient_b() const { return b_; }
  const RatMat& intrinsic_A() const { return intrinsic_A_; }
  const RatVec& intrinsic_b() const { return intrinsic_b_; }
  const std::optional<AffineHost>& host() const { return host_; }

  RatVec to_ambient(const RatVec& intrinsic_point) const;

  bool is_feasible() const;
  /// True iff the recession cone { u : A u >= 0 } of the intrinsic system is trivial.
  bool is_recession_trivial() const;

  /// Exact vertices with maximal active sets, ordered lexicographically by
  /// ambient coordinates. Throws on unbounded input; empty polytope -> {}.
  std::vector<FaceRecord> vertices() const;

  /// Every nonempty face with its maximal active set, dimension and witness.
  std::vector<FaceRecord> faces() const;

  CombinatorialType combinatorial_type() const;

  /// Dimension of the polytope itself (throws when empty).
  std::size_t dimension() const;

  /// Rows whose tight set is a facet (irredundant rows, duplicates included).
  std::vector<std::size_t> facet_rows() const;

  /// True iff every vertex lies on exactly dim(P) geometrically distinct facets.
  bool is_simple() const;

  /** Primitive inward normals (intrinsic coordinates) of the facets through
   *  a vertex, one per geometrically distinct facet. */
  std::vector<RatVec> normal_cone(const FaceRecord& vertex) const;

  /// Largest face whose active set contains `rows`; nullopt when that face is empty.
  std::optional<FaceRecord> face_of_active(const std::vector<std::size_t>& rows) const;

 private:
  void build_intrinsic();
  std::vector<FaceRecord> faces_from(const std::vector<FaceRecord>& verts) const;

  RatMat A_;
  RatVec b_;
  std::optional<AffineHost> host_;
  RatMat intrinsic_A_;
  RatVec intrinsic_b_;
};

}  // namespace polymmp
