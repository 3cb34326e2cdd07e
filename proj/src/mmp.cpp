#include "polymmp/mmp.hpp"

#include <algorithm>
#include <set>

#include "polymmp/errors.hpp"

namespace polymmp {

namespace {

std::string format_point(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += rat_to_string(v[i]);
  }
  return s + ")";
}

// Quotient basis modulo the kernel lattice: the lexicographically first set
// of coordinate vectors completing the kernel to a Z-basis, when one exists
// (it keeps the reported fiber rows in the ambient coordinate order), else
// the general unimodular complement.
std::vector<IntVec> choose_quotient_basis(const LatticeSplit& split, std::size_t dim) {
  const std::size_t s = split.kernel.size();
  const std::size_t want = dim - s;
  if (want == 0) return {};

  auto unimodular_with_kernel = [&](const std::vector<IntVec>& units) {
    RatMat V(dim, dim);
    for (std::size_t c = 0; c < s; ++c)
      for (std::size_t r = 0; r < dim; ++r) V.at(r, c) = Rat(split.kernel[c][r]);
    for (std::size_t c = 0; c < want; ++c)
      for (std::size_t r = 0; r < dim; ++r) V.at(r, s + c) = Rat(units[c][r]);
    if (rank(V) != dim) return false;
    for (std::size_t i = 0; i < dim; ++i) {
      RatVec e(dim, Rat(0));
      e[i] = 1;
      const auto sol = solve_affine(V, e);
      for (const auto& x : sol->witness)
        if (rat_den(x) != 1) return false;
    }
    return true;
  };

  std::vector<std::size_t> pick(want);
  for (std::size_t i = 0; i < want; ++i) pick[i] = i;
  for (;;) {
    std::vector<IntVec> units;
    for (auto j : pick) {
      IntVec e(dim, Int(0));
      e[j] = 1;
      units.push_back(std::move(e));
    }
    if (unimodular_with_kernel(units)) return units;
    std::size_t i = want;
    for (;;) {
      if (i == 0) return split.complement;
      --i;
      if (pick[i] != i + dim - want) break;
      if (i == 0) return split.complement;
    }
    ++pick[i];
    for (std::size_t j = i + 1; j < want; ++j) pick[j] = pick[j - 1] + 1;
  }
}

// Functional on the weight space restricting to row i of the family matrix
// on M and vanishing on the orthogonal complement of M.
RatVec extend_ray_functional(const HoroSpace& space, const RatVec& row_on_m) {
  const std::size_t wd = space.weight_dim();
  const auto& basis = space.m_basis();
  RatMat sys(0, wd);
  RatVec rhs;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    sys.append_row(basis[j]);
    rhs.push_back(row_on_m[j]);
  }
  // Orthogonal complement of the lattice span completes the system.
  for (const auto& k : kernel_basis(RatMat::from_rows(basis))) {
    sys.append_row(k);
    rhs.push_back(Rat(0));
  }
  const auto sol = solve_affine(sys, rhs);
  internal_check(sol.has_value() && sol->kernel_basis.empty(),
                 "ray functional extension is not unique");
  return sol->witness;
}

}  // namespace

FamilyBundle build_family(const PolarizedEmbedding& embedding) {
  const HoroSpace& space = embedding.space;
  const HPolyhedron& q_tilde = embedding.polytopes.q_tilde;
  const std::size_t m = embedding.polytopes.ray_rows;
  const std::size_t r = space.color_count();

  const RatVec c_tilde = anticanonical_column(space, m);
  const auto gor = q_gorenstein_check(q_tilde, c_tilde);
  if (!gor.value)
    throw InvariantError("input variety is not Q-Gorenstein: vertex " +
                         format_point(*gor.failing_vertex) + " fails the canonical test");

  FamilyBundle bundle{ParametricFamily(q_tilde.ambient_A(), q_tilde.ambient_b(), c_tilde,
                                       [&] {
                                         std::vector<std::size_t> exempt;
                                         for (std::size_t c = 0; c < r; ++c)
                                           exempt.push_back(m + c);
                                         return exempt;
                                       }()),
                      m,
                      q_tilde.ambient_b(),
                      c_tilde,
                      {},
                      {},
                      {},
                      {}};

  bundle.v0_weights.assign(space.weight_dim(), Rat(0));
  bundle.k_weights.assign(space.weight_dim(), Rat(0));
  const auto anticanonical = space.anticanonical_colors();
  for (std::size_t c = 0; c < r; ++c) {
    bundle.v0_weights[c] = embedding.polytopes.v0[c];
    bundle.k_weights[c] = anticanonical.at(space.free_roots()[c]);
  }

  // Moment-side columns via the translation formulas; the ray functionals
  // are extended from M to the weight space by killing the orthogonal
  // complement (any extension yields the same moment polytopes).
  bundle.moment_B.assign(m + r, Rat(0));
  bundle.moment_C.assign(m + r, Rat(0));
  for (std::size_t i = 0; i < m; ++i) {
    const RatVec functional = extend_ray_functional(space, q_tilde.ambient_A().row(i));
    bundle.moment_B[i] = bundle.b_tilde[i] + dot(functional, bundle.v0_weights);
    bundle.moment_C[i] = bundle.c_tilde[i] - dot(functional, bundle.k_weights);
  }
  return bundle;
}

MomentPair class_pair(const HoroSpace& space, const FamilyBundle& bundle,
                      const ParametricFamily& family, const Rat& eps) {
  RatVec v = bundle.v0_weights;
  v = subtract(v, scale(bundle.k_weights, eps));
  std::size_t ray_rows = 0;
  for (auto r : family.rows())
    if (r < bundle.ray_count) ++ray_rows;
  return MomentPair{family.polytope_at(eps), std::move(v), ray_rows};
}

namespace {

// Curves of the class variety at `rep` with their values at the boundary:
// (D + boundary K).C via the boundary face of the same active set, and K.C
// from the exact difference quotient.
std::vector<ContractedCurve> contracted_curves(const HoroSpace& space,
                                               const FamilyBundle& bundle,
                                               const ParametricFamily& family, const Rat& rep,
                                               const Rat& boundary) {
  const MomentPair at_rep = class_pair(space, bundle, family, rep);
  const MomentPair at_boundary = class_pair(space, bundle, family, boundary);
  std::vector<ContractedCurve> out;
  for (const auto& [curve, value] : curves_with_intersections(space, at_rep)) {
    const auto face = at_boundary.q_tilde.face_of_active(curve.active);
    internal_check(face.has_value(), "curve face disappears at the class boundary");
    Rat boundary_value;
    if (curve.kind == Curve::Kind::edge) {
      internal_check(face->dim <= 1, "edge face gains dimension at the boundary");
      if (face->dim == 0) {
        boundary_value = 0;
      } else {
        std::vector<RatVec> ends;
        for (const auto& v : at_boundary.q_tilde.vertices())
          if (std::includes(v.active.begin(), v.active.end(), face->active.begin(),
                            face->active.end()))
            ends.push_back(v.witness);
        internal_check(ends.size() == 2, "boundary edge without two endpoints");
        const RatVec delta = subtract(ends[1], ends[0]);
        const IntVec prim = primitive_vector(delta);
        std::size_t j = 0;
        while (prim[j] == 0) ++j;
        boundary_value = delta[j] / Rat(prim[j]);
        if (boundary_value < 0) boundary_value = -boundary_value;
      }
    } else {
      internal_check(face->dim == 0, "schubert vertex face gains dimension at the boundary");
      const RatVec w = weight_point(space, at_boundary, face->witness_ambient);
      boundary_value = space.wall_pairing(w, space.color_position(curve.alpha));
    }
    ContractedCurve record;
    record.curve = curve;
    record.boundary_value = boundary_value;
    record.k_value = (boundary_value - value) / (boundary - rep);
    if (boundary_value == 0) out.push_back(std::move(record));
  }
  return out;
}

}  // namespace

TerminalData terminal_data(const HoroSpace& space, const FamilyBundle& bundle,
                           const ParametricFamily& last_family, const Rat& eps_max) {
  TerminalData data;
  data.eps_max = eps_max;

  const MomentPair pair = class_pair(space, bundle, last_family, eps_max);
  const auto verts = pair.q_tilde.vertices();
  internal_check(!verts.empty(), "terminal polytope is empty");
  for (const auto& v : verts)
    data.terminal_vertices.push_back(weight_point(space, pair, v.witness_ambient));

  // Rows tight on the whole terminal polytope, in original indices.
  std::vector<std::size_t> tight_local = verts.front().active;
  for (const auto& v : verts) {
    std::vector<std::size_t> meet;
    std::set_intersection(tight_local.begin(), tight_local.end(), v.active.begin(),
                          v.active.end(), std::back_inserter(meet));
    tight_local = std::move(meet);
  }
  for (auto local : tight_local) data.tight_rows.push_back(last_family.rows()[local]);

  const RatMat tight_A = pair.q_tilde.intrinsic_A().select_rows(tight_local);
  const LatticeSplit split = integer_kernel_split(tight_A);
  data.m1_basis = split.kernel;
  data.dimension_drops = split.kernel.size() < space.lattice_rank();
  data.new_parabolic_roots = contained_walls(space, pair);
  internal_check(data.dimension_drops || !data.new_parabolic_roots.empty(),
                 "terminal polytope keeps dimension yet lies in no wall");

  if (!data.dimension_drops) return data;

  FiberData fiber;
  fiber.quotient_basis = choose_quotient_basis(split, space.lattice_rank());
  fiber.fiber_rows = data.tight_rows;
  fiber.colors = data.new_parabolic_roots;

  // Induced rows over the quotient lattice: evaluate each tight row on the
  // complement basis; the right-hand side is B~ with no drift.
  fiber.fiber_A = RatMat(tight_local.size(), fiber.quotient_basis.size());
  for (std::size_t i = 0; i < tight_local.size(); ++i) {
    const RatVec row = tight_A.row(i);
    for (std::size_t c = 0; c < fiber.quotient_basis.size(); ++c)
      fiber.fiber_A.at(i, c) = dot(row, to_rat_vec(fiber.quotient_basis[c]));
    fiber.fiber_b.push_back(bundle.b_tilde[data.tight_rows[i]]);
  }
  HPolyhedron fiber_poly(fiber.fiber_A, fiber.fiber_b);
  internal_check(fiber_poly.is_recession_trivial() && fiber_poly.is_feasible(),
                 "fiber polytope is empty or unbounded");
  const std::size_t fdim = fiber_poly.dimension();
  internal_check(fdim == fiber.quotient_basis.size(),
                 "fiber polytope is not full-dimensional in the quotient");

  std::set<IntVec> edges;
  for (auto row : fiber_poly.facet_rows()) edges.insert(primitive_vector(fiber.fiber_A.row(row)));
  fiber.fan_edges.assign(edges.begin(), edges.end());
  fiber.is_simplex = fiber.fan_edges.size() == fdim + 1;

  // Every absorbed color must cut the fiber in a facet.
  fiber.walls_are_facets = true;
  std::size_t wall_facets = 0;
  for (auto alpha : fiber.colors) {
    const std::size_t original = bundle.ray_count + space.color_position(alpha);
    const auto it =
        std::find(fiber.fiber_rows.begin(), fiber.fiber_rows.end(), original);
    internal_check(it != fiber.fiber_rows.end(), "absorbed color row is not tight");
    const std::size_t local = static_cast<std::size_t>(it - fiber.fiber_rows.begin());
    const auto face = fiber_poly.face_of_active({local});
    if (face && face->dim == fdim - 1)
      ++wall_facets;
    else
      fiber.walls_are_facets = false;
  }
  if (fiber_poly.is_simple() && fiber.walls_are_facets)
    fiber.picard = fiber.fan_edges.size() - wall_facets + fiber.colors.size() - fdim;

  data.fiber = std::move(fiber);
  return data;
}

GenericityReport is_general_divisor(const FamilyBundle& bundle) {
  GenericityReport report;
  const RatMat& A = bundle.family.matrix_A();
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();

  // Factoriality genericity: no (n+1)-row subsystem may absorb B~.
  std::vector<std::size_t> subset;
  auto scan_factorial = [&](auto&& self, std::size_t next) -> void {
    if (subset.size() == n + 1) {
      RatVec rhs;
      for (auto r : subset) rhs.push_back(bundle.b_tilde[r]);
      if (solve_affine(A.select_rows(subset), rhs))
        report.q_factorial_witnesses.push_back(subset);
      return;
    }
    for (std::size_t i = next; i < m; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  if (m > n) scan_factorial(scan_factorial, 0);
  report.q_factorial_generic = report.q_factorial_witnesses.empty();

  // Fiber genericity: B~ never lies in the span of Im(A_J) and C~_J for
  // subsets larger than rank + 1.
  auto scan_fiber = [&](auto&& self, std::size_t next) -> void {
    if (subset.size() >= 2) {
      const RatMat sub = A.select_rows(subset);
      if (subset.size() >= rank(sub) + 2) {
        RatMat lifted(subset.size(), n + 1);
        RatVec rhs;
        for (std::size_t i = 0; i < subset.size(); ++i) {
          for (std::size_t c = 0; c < n; ++c) lifted.at(i, c) = sub.at(i, c);
          lifted.at(i, n) = bundle.c_tilde[subset[i]];
          rhs.push_back(bundle.b_tilde[subset[i]]);
        }
        if (solve_affine(lifted, rhs)) {
          report.fiber_witnesses.push_back(subset);
          return;  // supersets are implied
        }
      }
    }
    if (subset.size() == n + 2) return;
    for (std::size_t i = next; i < m; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  scan_fiber(scan_fiber, 0);
  report.fiber_generic = report.fiber_witnesses.empty();
  return report;
}

MMPTrace run_mmp(const PolarizedEmbedding& embedding, bool use_oracle,
                 std::string fingerprint) {
  const HoroSpace& space = embedding.space;
  MMPTrace trace;
  trace.fingerprint = std::move(fingerprint);

  FamilyBundle bundle = build_family(embedding);
  trace.decomposition = use_oracle ? iterated_decomposition_oracle(bundle.family)
                                   : iterated_decomposition(bundle.family);
  const ClassDecomposition& dec = trace.decomposition;
  internal_check(dec.eps_max.has_value(),
                 "positive anticanonical drift must terminate the sweep");
  trace.eps_max = *dec.eps_max;

  // Per-class variety descriptors. The terminal class is no longer a
  // moment polytope of the same homogeneous space; its data lives in the
  // terminal record instead.
  for (std::size_t i = 0; i < dec.classes.size(); ++i) {
    const auto& rec = dec.classes[i];
    const auto& family = dec.families[dec.class_family[i]];
    ClassReport report;
    report.interval = rec.interval;
    report.representative = rec.representative;
    report.rows_in_force = rec.rows_in_force;
    const bool terminal = i + 1 == dec.classes.size();
    const MomentPair pair = class_pair(space, bundle, family, rec.representative);
    RatVec c_rows;
    for (auto r : family.rows()) c_rows.push_back(bundle.c_tilde[r]);
    report.q_gorenstein = q_gorenstein_check(pair.q_tilde, c_rows).value;
    if (!terminal) {
      report.fan = fan_from_polytope(space, pair);
      report.colors = touched_walls(space, pair);
      report.q_factorial = is_q_factorial(space, pair);
      if (!rec.interval.is_point())
        internal_check(report.q_gorenstein,
                       "interval class variety fails the Q-Gorenstein criterion");
    }
    trace.classes.push_back(std::move(report));
  }

  // A canonical divisor that is already nef would stop the program before
  // any step; projective horospherical geometry never reaches this branch,
  // but the check keeps the contract honest.
  {
    const auto& first = dec.classes.front();
    const auto& family = dec.families[dec.class_family.front()];
    const Rat first_boundary = first.interval.hi ? *first.interval.hi : trace.eps_max;
    const MomentPair at_rep = class_pair(space, bundle, family, first.representative);
    const MomentPair at_b = class_pair(space, bundle, family, first_boundary);
    bool negative = false;
    for (const auto& [curve, value] : curves_with_intersections(space, at_rep)) {
      const auto face = at_b.q_tilde.face_of_active(curve.active);
      if (!face) continue;
      Rat boundary_value = 0;
      if (curve.kind == Curve::Kind::edge && face->dim == 1) {
        std::vector<RatVec> ends;
        for (const auto& v : at_b.q_tilde.vertices())
          if (std::includes(v.active.begin(), v.active.end(), face->active.begin(),
                            face->active.end()))
            ends.push_back(v.witness);
        const RatVec delta = subtract(ends[1], ends[0]);
        const IntVec prim = primitive_vector(delta);
        std::size_t j = 0;
        while (prim[j] == 0) ++j;
        boundary_value = delta[j] / Rat(prim[j]);
      } else if (curve.kind == Curve::Kind::schubert) {
        const RatVec w = weight_point(space, at_b, face->witness_ambient);
        boundary_value = space.wall_pairing(w, space.color_position(curve.alpha));
      }
      if (boundary_value < value) negative = true;  // K.C < 0 witness
    }
    if (!negative) {
      trace.k_nef = true;
      trace.terminal = terminal_data(space, bundle, dec.families.back(), trace.eps_max);
      trace.genericity = is_general_divisor(bundle);
      return trace;
    }
  }

  // Steps: walk the class boundaries.
  for (std::size_t i = 0; i + 1 < dec.classes.size(); ++i) {
    const auto& source = dec.classes[i];
    if (source.interval.is_point()) continue;  // one-point classes are step targets
    const auto& next = dec.classes[i + 1];
    const Rat boundary = *source.interval.hi;
    const auto& source_family = dec.families[dec.class_family[i]];

    MMPStep step;
    step.epsilon = boundary;
    step.source_class = i;
    for (const auto& hop : dec.hops)
      if (hop.eps == boundary) step.dropped_rows = hop.dropped_rows;

    const bool terminal_next = i + 2 == dec.classes.size() && next.interval.is_point() &&
                               *next.interval.lo == trace.eps_max;

    if (terminal_next) {
      step.kind = MMPStep::Kind::mori_fibration;
      step.boundary_class = i + 1;
      step.target_class = i + 1;
    } else if (next.interval.is_point()) {
      step.kind = MMPStep::Kind::flip;
      step.boundary_class = i + 1;
      step.target_class = i + 2;
      internal_check(i + 2 < dec.classes.size(), "flip boundary without a right class");
      internal_check(!trace.classes[i + 1].q_gorenstein,
                     "flip intermediate passes the Q-Gorenstein criterion");
    } else {
      step.kind = MMPStep::Kind::divisorial;
      step.boundary_class = i + 1;
      step.target_class = i + 1;
      internal_check(trace.classes[i + 1].q_gorenstein,
                     "divisorial target fails the Q-Gorenstein criterion");
      internal_check(!step.dropped_rows.empty(),
                     "divisorial boundary without a dropped divisor row");
    }

    // Contracted curves of the forward morphism, with canonical signs.
    step.forward_curves =
        contracted_curves(space, bundle, source_family, source.representative, boundary);
    for (const auto& c : step.forward_curves)
      internal_check(c.k_value < 0, "forward-contracted curve with K.C >= 0");

    // Morphism existence: source class onto the boundary variety.
    const MomentPair source_pair =
        class_pair(space, bundle, source_family, source.representative);
    const std::size_t n = space.lattice_rank();
    if (step.kind == MMPStep::Kind::mori_fibration) {
      trace.terminal = terminal_data(space, bundle, dec.families.back(), trace.eps_max);
      // Target polytope inside its affine hull, with the lattice basis of
      // the terminal direction space as inclusion.
      const auto ext = extend_family(source_family, trace.eps_max);
      const MomentPair target_pair =
          class_pair(space, bundle, ext.family, trace.eps_max);
      RatMat inclusion(n, trace.terminal.m1_basis.size());
      for (std::size_t c = 0; c < trace.terminal.m1_basis.size(); ++c)
        for (std::size_t r = 0; r < n; ++r)
          inclusion.at(r, c) = Rat(trace.terminal.m1_basis[c][r]);
      step.forward_morphism =
          morphism_exists(space, source_pair, target_pair, inclusion,
                          trace.terminal.new_parabolic_roots)
              .exists;
    } else {
      const auto& boundary_rec = dec.classes[step.boundary_class];
      const auto& boundary_family = dec.families[dec.class_family[step.boundary_class]];
      const MomentPair boundary_pair =
          class_pair(space, bundle, boundary_family, boundary_rec.representative);
      step.forward_morphism =
          morphism_exists(space, source_pair, boundary_pair, RatMat::identity(n), {}).exists;

      if (step.kind == MMPStep::Kind::flip) {
        const auto& target_rec = dec.classes[step.target_class];
        const auto& target_family = dec.families[dec.class_family[step.target_class]];
        step.backward_curves = contracted_curves(space, bundle, target_family,
                                                 target_rec.representative, boundary);
        for (const auto& c : step.backward_curves)
          internal_check(c.k_value > 0, "flip-backward curve with K.C <= 0");
        const MomentPair target_pair =
            class_pair(space, bundle, target_family, target_rec.representative);
        step.backward_morphism =
            morphism_exists(space, target_pair, boundary_pair, RatMat::identity(n), {})
                .exists;
      }
    }
    internal_check(step.forward_morphism, "emitted step without an equivariant morphism");
    trace.steps.push_back(std::move(step));
  }

  internal_check(!trace.steps.empty() &&
                     trace.steps.back().kind == MMPStep::Kind::mori_fibration,
                 "trace does not end with a Mori fibration");
  for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i)
    internal_check(trace.steps[i].epsilon < trace.steps[i + 1].epsilon,
                   "step parameters are not strictly increasing");

  trace.genericity = is_general_divisor(bundle);

  // Under a generic factorial start the fiber of the fibration is cut out
  // by exactly dim + 1 tight rows.
  if (trace.genericity.fiber_generic && trace.classes.front().q_factorial.value &&
      trace.terminal.fiber) {
    internal_check(trace.terminal.tight_rows.size() ==
                       trace.terminal.fiber->quotient_basis.size() + 1,
                   "generic fiber is not a simplex");
  }
  return trace;
}

}  // namespace polymmp
