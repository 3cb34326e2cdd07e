#include "polymmp/horospherical.hpp"

#include <algorithm>
#include <set>

#include "polymmp/errors.hpp"

namespace polymmp {

bool ColoredCone::operator<(const ColoredCone& other) const {
  if (generators != other.generators) return generators < other.generators;
  return colors < other.colors;
}

bool cone_contains(const std::vector<IntVec>& generators, const RatVec& point) {
  if (generators.empty()) return is_zero(point);
  const std::size_t dim = point.size();
  // point = sum lambda_i g_i with lambda >= 0.
  IneqSystem sys(generators.size());
  for (std::size_t c = 0; c < dim; ++c) {
    RatVec row(generators.size());
    for (std::size_t i = 0; i < generators.size(); ++i) row[i] = Rat(generators[i][c]);
    sys.add_eq(row, point[c]);
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    RatVec row(generators.size(), Rat(0));
    row[i] = 1;
    sys.add_ge(row, Rat(0));
  }
  return feasible_point(sys).has_value();
}

ColoredCone canonical_cone(std::vector<IntVec> generators, std::vector<std::size_t> colors) {
  // Primitive, deduplicated rays.
  std::set<IntVec> prim;
  for (const auto& g : generators) prim.insert(primitive_vector(to_rat_vec(g)));
  std::vector<IntVec> rays(prim.begin(), prim.end());

  // Drop rays generated by the others.
  std::vector<IntVec> extreme;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    std::vector<IntVec> others;
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (j != i) others.push_back(rays[j]);
    if (!cone_contains(others, to_rat_vec(rays[i]))) extreme.push_back(rays[i]);
  }

  ColoredCone cone;
  cone.generators = std::move(extreme);
  std::sort(cone.generators.begin(), cone.generators.end());
  cone.colors = std::move(colors);
  std::sort(cone.colors.begin(), cone.colors.end());
  cone.colors.erase(std::unique(cone.colors.begin(), cone.colors.end()), cone.colors.end());
  return cone;
}

RatVec weight_point(const HoroSpace& space, const MomentPair& pair, const RatVec& u) {
  RatVec w = pair.v0;
  for (std::size_t j = 0; j < space.m_basis().size(); ++j)
    w = add(w, scale(space.m_basis()[j], u[j]));
  return w;
}

namespace {

// Wall pairings of every vertex, one row per vertex.
std::vector<RatVec> vertex_wall_pairings(const HoroSpace& space, const MomentPair& pair) {
  std::vector<RatVec> out;
  for (const auto& v : pair.q_tilde.vertices()) {
    const RatVec w = weight_point(space, pair, v.witness_ambient);
    RatVec pairings(space.color_count());
    for (std::size_t c = 0; c < space.color_count(); ++c)
      pairings[c] = space.wall_pairing(w, c);
    out.push_back(std::move(pairings));
  }
  return out;
}

}  // namespace

std::vector<std::size_t> touched_walls(const HoroSpace& space, const MomentPair& pair) {
  std::vector<std::size_t> out;
  const auto pairings = vertex_wall_pairings(space, pair);
  for (std::size_t c = 0; c < space.color_count(); ++c) {
    bool touched = false;
    for (const auto& row : pairings) touched = touched || row[c] == 0;
    if (touched) out.push_back(space.free_roots()[c]);
  }
  return out;
}

std::vector<std::size_t> contained_walls(const HoroSpace& space, const MomentPair& pair) {
  std::vector<std::size_t> out;
  const auto pairings = vertex_wall_pairings(space, pair);
  for (std::size_t c = 0; c < space.color_count(); ++c) {
    bool contained = !pairings.empty();
    for (const auto& row : pairings) contained = contained && row[c] == 0;
    if (contained) out.push_back(space.free_roots()[c]);
  }
  return out;
}

MomentPair moment_polytopes(const HoroSpace& space, const std::vector<IntVec>& rays,
                            const BDivisor& divisor) {
  if (divisor.g_stable.size() != rays.size())
    throw InvariantError("one G-stable coefficient per ray is required");
  const std::size_t n = space.lattice_rank();
  RatMat A(0, n);
  RatVec b;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (rays[i].size() != n) throw InvariantError("ray dimension mismatch");
    A.append_row(to_rat_vec(rays[i]));
    b.push_back(-divisor.g_stable[i]);
  }
  RatVec v0(space.weight_dim(), Rat(0));
  for (std::size_t c = 0; c < space.color_count(); ++c) {
    const std::size_t alpha = space.free_roots()[c];
    const auto it = divisor.colors.find(alpha);
    if (it == divisor.colors.end())
      throw InvariantError("missing color coefficient for a free simple root");
    A.append_row(space.coroot_restriction(alpha));
    b.push_back(-it->second);
    v0[c] = it->second;
  }
  MomentPair pair{HPolyhedron(std::move(A), std::move(b)), std::move(v0), rays.size()};
  if (!pair.q_tilde.is_recession_trivial())
    throw AmpleError("moment polytope is unbounded: fan not complete or divisor not ample");
  if (!pair.q_tilde.is_feasible()) throw AmpleError("divisor not ample: empty moment polytope");
  if (pair.q_tilde.dimension() != n)
    throw AmpleError("divisor not ample: moment polytope is not full-dimensional");
  return pair;
}

ValidityReport gh_valid(const HoroSpace& space, const MomentPair& pair) {
  ValidityReport report;
  if (!pair.q_tilde.is_feasible()) {
    report.reasons.push_back("polytope is empty");
    return report;
  }
  if (pair.q_tilde.dimension() != space.lattice_rank())
    report.reasons.push_back("direction is a proper subspace of the lattice");
  for (auto alpha : contained_walls(space, pair))
    report.reasons.push_back("contained in the wall of simple root " + std::to_string(alpha));
  for (const auto& row : vertex_wall_pairings(space, pair))
    for (const auto& value : row)
      if (value < 0) {
        report.reasons.push_back("leaves the dominant chamber");
        report.valid = false;
        return report;
      }
  report.valid = report.reasons.empty();
  return report;
}

ColoredFan fan_from_polytope(const HoroSpace& space, const MomentPair& pair) {
  const auto validity = gh_valid(space, pair);
  if (!validity.valid) {
    std::string what = "not a valid moment polytope:";
    for (const auto& r : validity.reasons) what += " " + r + ";";
    throw InvariantError(what);
  }
  ColoredFan fan;
  for (const auto& v : pair.q_tilde.vertices()) {
    std::vector<IntVec> gens;
    for (const auto& normal : pair.q_tilde.normal_cone(v)) gens.push_back(primitive_vector(normal));
    std::vector<std::size_t> colors;
    const RatVec w = weight_point(space, pair, v.witness_ambient);
    for (std::size_t c = 0; c < space.color_count(); ++c)
      if (space.wall_pairing(w, c) == 0) colors.push_back(space.free_roots()[c]);
    ColoredCone cone = canonical_cone(gens, colors);
    // Colors must contribute their restricted coroot inside the cone.
    for (auto alpha : cone.colors) {
      const RatVec coroot = space.coroot_restriction(alpha);
      internal_check(!is_zero(coroot) && cone_contains(cone.generators, coroot),
                     "color coroot escapes its vertex cone");
    }
    fan.maximal_cones.push_back(std::move(cone));
  }
  std::sort(fan.maximal_cones.begin(), fan.maximal_cones.end());
  fan.maximal_cones.erase(std::unique(fan.maximal_cones.begin(), fan.maximal_cones.end()),
                          fan.maximal_cones.end());
  return fan;
}

BDivisor divisor_from_polytopes(const HoroSpace& space, const MomentPair& pair) {
  BDivisor divisor;
  for (std::size_t i = 0; i < pair.ray_rows; ++i)
    divisor.g_stable.push_back(-pair.q_tilde.ambient_b()[i]);
  for (std::size_t c = 0; c < space.color_count(); ++c) {
    if (pair.v0[c] < 0) throw InvariantError("translation vector leaves the dominant chamber");
    divisor.colors[space.free_roots()[c]] = pair.v0[c];
  }
  return divisor;
}

bool gh_equivalent(const HoroSpace& space, const MomentPair& a, const MomentPair& b) {
  if (!(a.q_tilde.ambient_A() == b.q_tilde.ambient_A()))
    throw InvariantError("equivalence requires matching half-space systems");
  if (!(a.q_tilde.combinatorial_type() == b.q_tilde.combinatorial_type())) return false;
  return touched_walls(space, a) == touched_walls(space, b);
}

MorphismCheck morphism_exists(const HoroSpace& space, const MomentPair& source,
                              const MomentPair& target, const RatMat& inclusion,
                              const std::vector<std::size_t>& absorbed_roots) {
  MorphismCheck check;
  const auto target_verts = target.q_tilde.vertices();
  internal_check(!target_verts.empty(), "morphism target has no vertices");

  // Slide every facet's half-space until it supports the target polytope;
  // the face it cuts out there is its image.
  const auto facet_rows = source.q_tilde.facet_rows();
  std::map<std::size_t, std::vector<std::size_t>> images;  // facet row -> vertex ids
  for (auto row : facet_rows) {
    const RatVec normal = source.q_tilde.intrinsic_A().row(row);
    RatVec restricted(inclusion.cols());
    for (std::size_t c = 0; c < inclusion.cols(); ++c) {
      RatVec column(inclusion.rows());
      for (std::size_t r = 0; r < inclusion.rows(); ++r) column[r] = inclusion.at(r, c);
      restricted[c] = dot(normal, column);
    }
    FaceImage image;
    image.facet_row = row;
    if (is_zero(restricted)) {
      image.whole_target = true;
      check.face_map.push_back(image);
      continue;
    }
    std::optional<Rat> best;
    for (const auto& v : target_verts) {
      const Rat value = dot(restricted, v.witness);
      if (!best || value < *best) best = value;
    }
    for (std::size_t i = 0; i < target_verts.size(); ++i)
      if (dot(restricted, target_verts[i].witness) == *best) image.target_vertices.push_back(i);
    images[row] = image.target_vertices;
    check.face_map.push_back(std::move(image));
  }

  // Intersecting facet families must keep intersecting images; families of
  // facets through one source vertex are the maximal intersecting ones.
  for (const auto& v : source.q_tilde.vertices()) {
    std::vector<bool> common(target_verts.size(), true);
    for (auto row : v.active) {
      const auto it = images.find(row);
      if (it == images.end()) continue;  // non-facet or whole-target image
      std::vector<bool> hit(target_verts.size(), false);
      for (auto idx : it->second) hit[idx] = true;
      for (std::size_t i = 0; i < target_verts.size(); ++i) common[i] = common[i] && hit[i];
    }
    if (std::none_of(common.begin(), common.end(), [](bool b) { return b; })) {
      check.reason = "facet images through a vertex have empty intersection";
      return check;
    }
  }

  // Touched walls must survive, up to roots absorbed into the parabolic.
  const auto source_walls = touched_walls(space, source);
  const auto target_walls = touched_walls(space, target);
  for (auto alpha : source_walls) {
    if (std::find(absorbed_roots.begin(), absorbed_roots.end(), alpha) != absorbed_roots.end())
      continue;
    if (!std::binary_search(target_walls.begin(), target_walls.end(), alpha)) {
      check.reason = "touched wall disappears along the morphism";
      return check;
    }
  }

  check.exists = true;
  return check;
}

std::string Curve::describe() const {
  auto point = [](const RatVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += rat_to_string(v[i]);
    }
    return s + ")";
  };
  if (kind == Kind::edge) return "edge " + point(endpoints[0]) + "-" + point(endpoints[1]);
  return "schubert a" + std::to_string(alpha + 1) + " at " + point(vertex);
}

std::vector<CurveIntersection> curves_with_intersections(const HoroSpace& space,
                                                         const MomentPair& pair) {
  std::vector<CurveIntersection> out;
  const auto faces = pair.q_tilde.faces();
  const auto verts = pair.q_tilde.vertices();

  for (const auto& f : faces) {
    if (f.dim != 1) continue;
    std::vector<const FaceRecord*> ends;
    for (const auto& v : verts)
      if (std::includes(v.active.begin(), v.active.end(), f.active.begin(), f.active.end()))
        ends.push_back(&v);
    internal_check(ends.size() == 2, "edge without exactly two endpoints");

    Curve curve;
    curve.kind = Curve::Kind::edge;
    curve.active = f.active;
    curve.endpoints[0] = weight_point(space, pair, ends[0]->witness_ambient);
    curve.endpoints[1] = weight_point(space, pair, ends[1]->witness_ambient);

    // Integral length in the lattice of the intrinsic coordinates.
    const RatVec delta = subtract(ends[1]->witness, ends[0]->witness);
    const IntVec prim = primitive_vector(delta);
    std::size_t j = 0;
    while (prim[j] == 0) ++j;
    out.push_back({curve, delta[j] / Rat(prim[j])});
  }

  for (const auto& v : verts) {
    const RatVec w = weight_point(space, pair, v.witness_ambient);
    for (std::size_t c = 0; c < space.color_count(); ++c) {
      const Rat pairing = space.wall_pairing(w, c);
      internal_check(pairing >= 0, "moment polytope leaves the dominant chamber");
      if (pairing == 0) continue;  // vertex on the wall: no curve
      Curve curve;
      curve.kind = Curve::Kind::schubert;
      curve.active = v.active;
      curve.alpha = space.free_roots()[c];
      curve.vertex = w;
      out.push_back({curve, pairing});
    }
  }
  return out;
}

QGorensteinReport q_gorenstein_check(const HPolyhedron& q_tilde, const RatVec& c_rows) {
  if (c_rows.size() != q_tilde.row_count())
    throw InvariantError("anticanonical column length mismatch");
  QGorensteinReport report;
  report.value = true;
  for (const auto& v : q_tilde.vertices()) {
    RatVec rhs;
    for (auto r : v.active) rhs.push_back(c_rows[r]);
    if (!solve_affine(q_tilde.intrinsic_A().select_rows(v.active), rhs)) {
      report.value = false;
      report.failing_vertex = v.witness;
      return report;
    }
  }
  return report;
}

RatVec anticanonical_column(const HoroSpace& space, std::size_t ray_rows) {
  RatVec c(ray_rows, Rat(1));
  const auto coeffs = space.anticanonical_colors();
  for (auto alpha : space.free_roots()) c.push_back(coeffs.at(alpha));
  return c;
}

QFactorialReport is_q_factorial(const HoroSpace& space, const MomentPair& pair) {
  QFactorialReport report;
  const std::size_t dim = pair.q_tilde.dimension();
  if (!pair.q_tilde.is_simple()) report.reasons.push_back("moment polytope is not simple");

  // Wall faces come from the color rows: row ray_rows + c is tight exactly
  // on the wall of color c.
  std::size_t wall_facets = 0;
  for (std::size_t c = 0; c < space.color_count(); ++c) {
    const std::size_t row = pair.ray_rows + c;
    const auto face = pair.q_tilde.face_of_active({row});
    if (!face) continue;  // wall untouched
    if (face->dim != dim - 1)
      report.reasons.push_back("wall of simple root " +
                               std::to_string(space.free_roots()[c]) +
                               " meets the polytope in codimension > 1");
    else
      ++wall_facets;
    for (std::size_t c2 = c + 1; c2 < space.color_count(); ++c2) {
      const auto shared = pair.q_tilde.face_of_active({row, pair.ray_rows + c2});
      if (shared && shared->dim == dim - 1)
        report.reasons.push_back("a facet lies in two walls");
    }
  }

  report.value = report.reasons.empty();
  if (report.value) {
    // Geometric facet count: distinct facet hyperplanes among facet rows.
    std::set<std::pair<IntVec, std::string>> facets;
    for (auto r : pair.q_tilde.facet_rows()) {
      const RatVec row = pair.q_tilde.intrinsic_A().row(r);
      const IntVec prim = primitive_vector(row);
      std::size_t j = 0;
      while (prim[j] == 0) ++j;
      const Rat lambda = row[j] / Rat(prim[j]);
      facets.insert({prim, rat_to_string(pair.q_tilde.intrinsic_b()[r] / lambda)});
    }
    report.picard = facets.size() - wall_facets + space.color_count() - dim;
  }
  return report;
}

PolarizedEmbedding make_embedding(HoroSpace space, std::vector<IntVec> rays, ColoredFan fan,
                                  BDivisor divisor) {
  const std::size_t n = space.lattice_rank();
  for (const auto& ray : rays) {
    if (ray.size() != n) throw InvariantError("ray dimension mismatch");
    if (primitive_vector(to_rat_vec(ray)) != ray)
      throw InvariantError("G-stable rays must be primitive lattice vectors");
  }

  // Canonicalize the fan and check the colored-cone invariants.
  ColoredFan canonical;
  for (const auto& cone : fan.maximal_cones) {
    std::vector<IntVec> gens = cone.generators;
    for (auto alpha : cone.colors) {
      const RatVec coroot = space.coroot_restriction(alpha);
      if (is_zero(coroot))
        throw InvariantError("color with zero restricted coroot in a cone");
      gens.push_back(primitive_vector(coroot));
    }
    ColoredCone c = canonical_cone(gens, cone.colors);
    if (c.generators.empty()) throw InvariantError("empty cone in the fan");
    // Strict convexity: some functional is positive on all generators.
    IneqSystem sys(n);
    for (const auto& g : c.generators) sys.add_gt(to_rat_vec(g), Rat(0));
    if (!strict_feasible(sys))
      throw InvariantError("fan cone is not strictly convex");
    canonical.maximal_cones.push_back(std::move(c));
  }
  std::sort(canonical.maximal_cones.begin(), canonical.maximal_cones.end());
  canonical.maximal_cones.erase(
      std::unique(canonical.maximal_cones.begin(), canonical.maximal_cones.end()),
      canonical.maximal_cones.end());

  const auto sanity = fan_sanity(canonical, n);
  if (!sanity.valid) {
    std::string what = "fan sanity check failed:";
    for (const auto& r : sanity.reasons) what += " " + r + ";";
    throw InvariantError(what);
  }

  MomentPair pair = moment_polytopes(space, rays, divisor);
  const ColoredFan derived = fan_from_polytope(space, pair);
  if (!(derived == canonical))
    throw AmpleError("divisor not ample: the moment polytope's normal fan differs "
                     "from the input fan");

  PolarizedEmbedding embedding{std::move(space), std::move(rays), std::move(canonical),
                               std::move(divisor), std::move(pair)};
  return embedding;
}

ValidityReport fan_sanity(const ColoredFan& fan, std::size_t dim) {
  ValidityReport report;
  std::vector<RatVec> interior;
  for (const auto& cone : fan.maximal_cones) {
    RatVec sum(dim, Rat(0));
    for (const auto& g : cone.generators) sum = add(sum, to_rat_vec(g));
    interior.push_back(sum);
  }
  // No overlap: the interior sample of one maximal cone may not lie in
  // another one.
  for (std::size_t i = 0; i < fan.maximal_cones.size(); ++i)
    for (std::size_t j = 0; j < fan.maximal_cones.size(); ++j) {
      if (i == j) continue;
      if (cone_contains(fan.maximal_cones[j].generators, interior[i])) {
        report.reasons.push_back("maximal cones overlap");
        return report;
      }
    }
  // Sampled completeness: coordinate directions, their negatives and the
  // pairwise midpoints of generators must be covered.
  std::vector<RatVec> samples;
  for (std::size_t c = 0; c < dim; ++c) {
    RatVec e(dim, Rat(0));
    e[c] = 1;
    samples.push_back(e);
    e[c] = -1;
    samples.push_back(e);
  }
  for (const auto& cone : fan.maximal_cones)
    for (std::size_t a = 0; a < cone.generators.size(); ++a)
      for (std::size_t b = a + 1; b < cone.generators.size(); ++b)
        samples.push_back(add(to_rat_vec(cone.generators[a]), to_rat_vec(cone.generators[b])));
  for (const auto& s : samples) {
    bool covered = false;
    for (const auto& cone : fan.maximal_cones)
      covered = covered || cone_contains(cone.generators, s);
    if (!covered) {
      report.reasons.push_back("fan is not complete (uncovered direction)");
      return report;
    }
  }
  report.valid = true;
  return report;
}

}  // namespace polymmp
