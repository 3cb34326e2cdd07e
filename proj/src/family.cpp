#include "polymmp/family.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "polymmp/errors.hpp"

namespace polymmp {

// ---------------------------------------------------------------------------
// EpsInterval

EpsInterval EpsInterval::none() { return EpsInterval{}; }

EpsInterval EpsInterval::point(const Rat& value) {
  EpsInterval i;
  i.lo = i.hi = value;
  i.lo_open = i.hi_open = false;
  i.is_empty = false;
  return i;
}

EpsInterval EpsInterval::open(std::optional<Rat> lo, std::optional<Rat> hi) {
  EpsInterval i;
  i.lo = std::move(lo);
  i.hi = std::move(hi);
  i.lo_open = i.hi_open = true;
  i.is_empty = i.lo && i.hi && *i.lo >= *i.hi;
  return i;
}

EpsInterval EpsInterval::closed(std::optional<Rat> lo, std::optional<Rat> hi) {
  EpsInterval i;
  i.lo = std::move(lo);
  i.hi = std::move(hi);
  i.lo_open = !i.lo.has_value();
  i.hi_open = !i.hi.has_value();
  i.is_empty = i.lo && i.hi && *i.lo > *i.hi;
  return i;
}

EpsInterval EpsInterval::half_open(const Rat& lo, std::optional<Rat> hi) {
  EpsInterval i;
  i.lo = lo;
  i.hi = std::move(hi);
  i.lo_open = false;
  i.hi_open = true;
  i.is_empty = i.hi && *i.lo >= *i.hi;
  return i;
}

EpsInterval::Kind EpsInterval::kind() const {
  if (is_empty) return Kind::empty;
  if (lo && hi && *lo == *hi) return Kind::point;
  const bool closed_lo = lo && !lo_open;
  const bool closed_hi = hi && !hi_open;
  if (closed_lo && closed_hi) return Kind::closed;
  if (!closed_lo && !closed_hi) return Kind::open;
  return Kind::half_open;
}

bool EpsInterval::is_point() const { return kind() == Kind::point; }

bool EpsInterval::contains(const Rat& value) const {
  if (is_empty) return false;
  if (lo) {
    if (lo_open ? value <= *lo : value < *lo) return false;
  }
  if (hi) {
    if (hi_open ? value >= *hi : value > *hi) return false;
  }
  return true;
}

EpsInterval EpsInterval::intersect(const EpsInterval& other) const {
  if (is_empty || other.is_empty) return none();
  EpsInterval out;
  out.lo = lo;
  out.lo_open = lo_open;
  if (other.lo && (!out.lo || *other.lo > *out.lo ||
                   (*other.lo == *out.lo && other.lo_open))) {
    out.lo = other.lo;
    out.lo_open = other.lo_open;
  }
  out.hi = hi;
  out.hi_open = hi_open;
  if (other.hi && (!out.hi || *other.hi < *out.hi ||
                   (*other.hi == *out.hi && other.hi_open))) {
    out.hi = other.hi;
    out.hi_open = other.hi_open;
  }
  out.is_empty = false;
  if (out.lo && out.hi) {
    if (*out.lo > *out.hi) out.is_empty = true;
    if (*out.lo == *out.hi && (out.lo_open || out.hi_open)) out.is_empty = true;
  }
  return out;
}

std::string EpsInterval::to_string() const {
  if (is_empty) return "{}";
  if (is_point()) return "{" + rat_to_string(*lo) + "}";
  std::string s;
  s += (lo && !lo_open) ? "[" : "(";
  s += lo ? rat_to_string(*lo) : "-inf";
  s += ",";
  s += hi ? rat_to_string(*hi) : "+inf";
  s += (hi && !hi_open) ? "]" : ")";
  return s;
}

// ---------------------------------------------------------------------------
// ParametricFamily

ParametricFamily::ParametricFamily(RatMat A, RatVec B, RatVec C,
                                   std::vector<std::size_t> exempt,
                                   std::optional<AffineHost> ambient)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), ambient_(std::move(ambient)) {
  if (B_.size() != A_.rows() || C_.size() != A_.rows())
    throw InvariantError("family column lengths do not match the matrix");
  rows_.resize(A_.rows());
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] = i;
  exempt_ = std::move(exempt);
  validate();
}

ParametricFamily ParametricFamily::with_rows(std::vector<std::size_t> rows) const {
  ParametricFamily out = *this;
  std::sort(rows.begin(), rows.end());
  for (auto r : rows)
    if (!std::binary_search(rows_.begin(), rows_.end(), r))
      throw InvariantError("row restriction outside the active universe");
  out.rows_ = std::move(rows);
  out.validate();
  return out;
}

ParametricFamily ParametricFamily::reversed_direction() const {
  ParametricFamily out = *this;
  for (auto& c : out.C_) c = -c;
  return out;
}

void ParametricFamily::validate() {
  // Exempt rows: the caller's choices (restricted to the universe) plus all
  // rows whose restriction to the ambient subspace vanishes.
  std::set<std::size_t> ex;
  for (auto r : exempt_)
    if (std::binary_search(rows_.begin(), rows_.end(), r)) ex.insert(r);
  const RatMat intr = intrinsic_rows_A();
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (is_zero(intr.row(i))) ex.insert(rows_[i]);
  exempt_.assign(ex.begin(), ex.end());

  HPolyhedron probe(intr, RatVec(rows_.size(), Rat(0)));
  if (!probe.is_recession_trivial())
    throw InvariantError("family admits a nonzero recession direction");
}

std::size_t ParametricFamily::intrinsic_dim() const {
  return ambient_ ? ambient_->basis.size() : A_.cols();
}

std::vector<std::size_t> ParametricFamily::mandatory_rows() const {
  std::vector<std::size_t> out;
  for (auto r : rows_)
    if (!std::binary_search(exempt_.begin(), exempt_.end(), r)) out.push_back(r);
  return out;
}

RatMat ParametricFamily::intrinsic_rows_A() const {
  RatMat sel = A_.select_rows(rows_);
  if (!ambient_) return sel;
  RatMat out(rows_.size(), ambient_->basis.size());
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (std::size_t c = 0; c < ambient_->basis.size(); ++c)
      out.at(r, c) = dot(sel.row(r), ambient_->basis[c]);
  return out;
}

RatVec ParametricFamily::intrinsic_rows_B(const Rat& eps) const {
  RatVec out(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = B_[rows_[i]] + eps * C_[rows_[i]];
  if (ambient_) {
    const RatVec shift = A_.select_rows(rows_).apply(ambient_->origin);
    for (std::size_t i = 0; i < rows_.size(); ++i) out[i] -= shift[i];
  }
  return out;
}

HPolyhedron ParametricFamily::polytope_at(const Rat& eps) const {
  RatVec rhs(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) rhs[i] = B_[rows_[i]] + eps * C_[rows_[i]];
  if (ambient_) return HPolyhedron(A_.select_rows(rows_), rhs, *ambient_);
  return HPolyhedron(A_.select_rows(rows_), rhs);
}

CombinatorialType ParametricFamily::type_at(const Rat& eps) const {
  CombinatorialType type = polytope_at(eps).combinatorial_type();
  for (auto& face : type.faces)
    for (auto& idx : face) idx = rows_[idx];
  return type;
}

bool ParametricFamily::in_omega1(const std::vector<std::size_t>& I, const Rat& eps) const {
  std::vector<std::size_t> sorted = I;
  std::sort(sorted.begin(), sorted.end());
  const RatMat intr = intrinsic_rows_A();
  const RatVec rhs = intrinsic_rows_B(eps);
  IneqSystem sys(intr.cols());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (std::binary_search(sorted.begin(), sorted.end(), rows_[i]))
      sys.add_eq(intr.row(i), rhs[i]);
    else
      sys.add_gt(intr.row(i), rhs[i]);
  }
  return strict_feasible(sys).has_value();
}

OmegaPair ParametricFamily::omega_intervals(const std::vector<std::size_t>& I) const {
  std::vector<std::size_t> sorted = I;
  std::sort(sorted.begin(), sorted.end());
  for (auto r : sorted)
    if (!std::binary_search(rows_.begin(), rows_.end(), r))
      throw InvariantError("omega index set outside the active universe");

  const RatMat intr = intrinsic_rows_A();
  const std::size_t k = intr.cols();

  // Lifted system over (u, eps).
  IneqSystem lifted(k + 1);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    RatVec row = intr.row(i);
    row.push_back(-C_[rows_[i]]);
    Rat rhs = B_[rows_[i]];
    if (ambient_) rhs -= dot(A_.row(rows_[i]), ambient_->origin);
    if (std::binary_search(sorted.begin(), sorted.end(), rows_[i]))
      lifted.add_eq(row, rhs);
    else
      lifted.add_ge(row, rhs);
  }
  RatVec objective(k + 1, Rat(0));
  objective[k] = 1;

  OmegaPair pair;
  const LPResult up = lp_extremize(objective, lifted, true);
  if (up.status == LPStatus::infeasible) {
    pair.omega0 = EpsInterval::none();
    pair.omega1 = EpsInterval::none();
    return pair;
  }
  const LPResult down = lp_extremize(objective, lifted, false);
  internal_check(down.status != LPStatus::infeasible, "asymmetric feasibility in omega LP");

  std::optional<Rat> lo, hi;
  if (down.status == LPStatus::optimal) lo = down.value;
  if (up.status == LPStatus::optimal) hi = up.value;
  pair.omega0 = EpsInterval::closed(lo, hi);

  if (lo && hi && *lo == *hi) {
    pair.omega1 = in_omega1(sorted, *lo) ? EpsInterval::point(*lo) : EpsInterval::none();
    return pair;
  }
  Rat sample;
  if (lo && hi)
    sample = (*lo + *hi) / 2;
  else if (lo)
    sample = *lo + 1;
  else if (hi)
    sample = *hi - 1;
  else
    sample = 0;
  pair.omega1 = in_omega1(sorted, sample) ? EpsInterval::open(lo, hi) : EpsInterval::none();
  return pair;
}

EpsInterval ParametricFamily::omega_max() const {
  EpsInterval acc = omega_intervals({}).omega1;
  for (auto r : mandatory_rows()) {
    if (acc.is_empty) return acc;
    const EpsInterval omega1 = omega_intervals({r}).omega1;
    internal_check(!omega1.is_point(), "single-row omega1 cannot be a point off the exempt set");
    acc = acc.intersect(omega1);
  }
  return acc;
}

namespace {

void insert_candidate(std::set<Rat>& out, const EpsInterval& range, const Rat& value) {
  if (range.contains(value)) out.insert(value);
}

}  // namespace

std::vector<Rat> ParametricFamily::candidate_breakpoints(const EpsInterval& range) const {
  std::set<Rat> found;

  // Finite endpoints of the whole-polytope and single-row Omega^0 intervals.
  auto harvest = [&](const std::vector<std::size_t>& I) {
    const OmegaPair pair = omega_intervals(I);
    if (pair.omega0.is_empty) return;
    if (pair.omega0.lo) insert_candidate(found, range, *pair.omega0.lo);
    if (pair.omega0.hi) insert_candidate(found, range, *pair.omega0.hi);
  };
  harvest({});
  for (auto r : rows_) harvest({r});

  // Unique-parameter subsets of size at most dim+1: solvability of the
  // lifted equality system at exactly one parameter value.
  const RatMat intr = intrinsic_rows_A();
  const std::size_t k = intr.cols();
  const std::size_t m = rows_.size();
  const std::size_t max_size = std::min(m, k + 1);

  std::vector<std::size_t> subset;
  auto visit = [&](auto&& self, std::size_t next) -> void {
    if (!subset.empty()) {
      RatMat lifted(subset.size(), k + 1);
      RatVec rhs(subset.size());
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const std::size_t local = subset[i];
        for (std::size_t c = 0; c < k; ++c) lifted.at(i, c) = intr.at(local, c);
        lifted.at(i, k) = -C_[rows_[local]];
        rhs[i] = B_[rows_[local]];
        if (ambient_) rhs[i] -= dot(A_.row(rows_[local]), ambient_->origin);
      }
      const auto sol = solve_affine(lifted, rhs);
      if (sol) {
        bool unique_eps = true;
        for (const auto& kv : sol->kernel_basis)
          if (kv[k] != 0) unique_eps = false;
        if (unique_eps) insert_candidate(found, range, sol->witness[k]);
      }
    }
    if (subset.size() == max_size) return;
    for (std::size_t i = next; i < m; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  visit(visit, 0);

  return std::vector<Rat>(found.begin(), found.end());
}

std::vector<Rat> ParametricFamily::oracle_breakpoints(const EpsInterval& range) const {
  std::set<Rat> found;
  const std::size_t m = rows_.size();
  if (m > 20) throw InvariantError("oracle breakpoint scan is limited to 20 rows");
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    std::vector<std::size_t> I;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t(1) << i)) I.push_back(rows_[i]);
    const OmegaPair pair = omega_intervals(I);
    if (!pair.omega0.is_empty) {
      if (pair.omega0.lo) insert_candidate(found, range, *pair.omega0.lo);
      if (pair.omega0.hi) insert_candidate(found, range, *pair.omega0.hi);
    }
    if (pair.omega1.is_point()) insert_candidate(found, range, *pair.omega1.lo);
  }
  return std::vector<Rat>(found.begin(), found.end());
}

// ---------------------------------------------------------------------------
// Class decompositions

namespace {

using CandidateFn =
    std::function<std::vector<Rat>(const ParametricFamily&, const EpsInterval&)>;

SpanDecomposition decompose_span(const ParametricFamily& family, const Rat& start,
                                 const CandidateFn& candidates_in) {
  const EpsInterval span = family.omega_max();
  if (!span.contains(start))
    throw InvariantError("start parameter lies outside the family's maximal span");

  SpanDecomposition out;
  out.hi = span.hi;

  const EpsInterval range = EpsInterval::half_open(start, span.hi);
  std::vector<Rat> anchors = candidates_in(family, range);
  if (anchors.empty() || anchors.front() != start) anchors.insert(anchors.begin(), start);

  // Sample points: each anchor plus a midpoint after each anchor.
  std::vector<Rat> mids(anchors.size());
  for (std::size_t i = 0; i + 1 < anchors.size(); ++i) mids[i] = (anchors[i] + anchors[i + 1]) / 2;
  mids.back() = span.hi ? Rat((anchors.back() + *span.hi) / 2) : Rat(anchors.back() + 1);

  std::vector<CombinatorialType> anchor_type(anchors.size()), mid_type(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    anchor_type[i] = family.type_at(anchors[i]);
    mid_type[i] = family.type_at(mids[i]);
  }

  auto push_interval = [&](const Rat& lo, bool lo_closed, const std::optional<Rat>& hi,
                           const Rat& rep, const CombinatorialType& type) {
    ClassRecord rec;
    rec.interval = lo_closed ? EpsInterval::half_open(lo, hi)
                             : EpsInterval::open(lo, hi);
    rec.representative = rep;
    rec.type = type;
    rec.rows_in_force = family.rows();
    out.classes.push_back(std::move(rec));
  };
  auto push_point = [&](const Rat& value, const CombinatorialType& type) {
    ClassRecord rec;
    rec.interval = EpsInterval::point(value);
    rec.representative = value;
    rec.type = type;
    rec.rows_in_force = family.rows();
    out.classes.push_back(std::move(rec));
  };

  Rat open_lo = start;
  bool open_lo_closed = true;
  std::optional<std::size_t> open_mid;  // sample index witnessing the open class

  // The start itself may already be a one-point class (possible right after
  // a family extension).
  if (anchor_type[0] == mid_type[0]) {
    open_mid = 0;
  } else {
    push_point(start, anchor_type[0]);
    open_lo_closed = false;
    open_mid = 0;
  }

  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const bool matches_left = anchor_type[i] == mid_type[i - 1];
    const bool matches_right = anchor_type[i] == mid_type[i];
    if (matches_left && matches_right) {
      internal_check(mid_type[i - 1] == mid_type[i],
                     "class interval interrupted without a boundary");
      continue;  // not a real boundary
    }
    internal_check(!matches_left && !matches_right,
                   "half-closed equivalence class inside an open span");
    internal_check(!(mid_type[i - 1] == mid_type[i]),
                   "identical classes separated by a one-point class");
    push_interval(open_lo, open_lo_closed, anchors[i], mids[*open_mid], mid_type[*open_mid]);
    push_point(anchors[i], anchor_type[i]);
    open_lo = anchors[i];
    open_lo_closed = false;
    open_mid = i;
  }
  push_interval(open_lo, open_lo_closed, span.hi, mids[*open_mid], mid_type[*open_mid]);
  return out;
}

std::vector<Rat> sweep_candidates(const ParametricFamily& f, const EpsInterval& r) {
  return f.candidate_breakpoints(r);
}

std::vector<Rat> brute_candidates(const ParametricFamily& f, const EpsInterval& r) {
  return f.oracle_breakpoints(r);
}

ClassDecomposition iterate(const ParametricFamily& initial, const CandidateFn& candidates) {
  ClassDecomposition out;
  ParametricFamily family = initial;
  Rat start = 0;

  if (!family.omega_max().contains(start))
    throw InvariantError("divisor not ample or not Q-Cartier: 0 outside the maximal span");

  for (;;) {
    const SpanDecomposition span = decompose_span(family, start, candidates);
    const std::size_t span_index = out.families.size();
    out.families.push_back(family);
    if (out.classes.empty() && span.classes.front().interval.is_point())
      throw InvariantError(
          "divisor not ample or not Q-Cartier: 0 is already a class boundary");
    for (const auto& rec : span.classes) {
      out.classes.push_back(rec);
      out.class_family.push_back(span_index);
    }
    if (!span.hi) {
      out.eps_max = std::nullopt;
      return out;
    }

    const Rat boundary = *span.hi;
    if (!family.in_omega1({}, boundary)) {
      // The boundary polytope has no interior: terminal value reached.
      out.eps_max = boundary;
      ClassRecord terminal;
      terminal.interval = EpsInterval::point(boundary);
      terminal.representative = boundary;
      terminal.type = family.type_at(boundary);
      terminal.rows_in_force = family.rows();
      out.classes.push_back(std::move(terminal));
      out.class_family.push_back(span_index);
      return out;
    }

    ExtensionResult ext = extend_family(family, boundary);
    internal_check(ext.kind == ExtensionResult::Case::full_dim,
                   "interior boundary produced a subspace extension");
    out.hops.push_back({boundary, ext.dropped_rows, false});
    family = std::move(ext.family);
    start = boundary;
  }
}

}  // namespace

SpanDecomposition class_decomposition(const ParametricFamily& family, const Rat& start) {
  return decompose_span(family, start, sweep_candidates);
}

SpanDecomposition class_decomposition_oracle(const ParametricFamily& family, const Rat& start) {
  return decompose_span(family, start, brute_candidates);
}

ExtensionResult extend_family(const ParametricFamily& family, const Rat& eps1) {
  const EpsInterval span = family.omega_max();
  if (!span.hi || *span.hi != eps1)
    throw InvariantError("extension parameter is not the family's upper boundary");

  if (family.in_omega1({}, eps1)) {
    // Full-dimensional boundary: drop the rows whose facets degenerate there.
    std::vector<std::size_t> dropped, kept;
    for (auto r : family.rows()) {
      const bool exempt = std::binary_search(family.exempt_rows().begin(),
                                             family.exempt_rows().end(), r);
      if (!exempt && !family.in_omega1({r}, eps1))
        dropped.push_back(r);
      else
        kept.push_back(r);
    }
    internal_check(!dropped.empty(), "no degenerate row at a finite full-dimensional boundary");
    ExtensionResult out{ExtensionResult::Case::full_dim, family.with_rows(kept), dropped, {}};
    internal_check(out.family.omega_max().contains(eps1),
                   "extended family does not contain the boundary parameter");
    return out;
  }

  // Boundary polytope lies in a proper affine subspace: restrict to its
  // affine hull (tight rows drop out) and continue there.
  const HPolyhedron poly = family.polytope_at(eps1);
  const auto verts = poly.vertices();
  internal_check(!verts.empty(), "empty polytope at the family boundary");
  std::vector<std::size_t> tight_local = verts.front().active;
  for (const auto& v : verts) {
    std::vector<std::size_t> meet;
    std::set_intersection(tight_local.begin(), tight_local.end(), v.active.begin(),
                          v.active.end(), std::back_inserter(meet));
    tight_local = std::move(meet);
  }
  internal_check(!tight_local.empty(), "interior-free polytope without tight rows");

  std::vector<std::size_t> tight, kept;
  for (std::size_t i = 0, j = 0; i < family.rows().size(); ++i) {
    if (j < tight_local.size() && tight_local[j] == i) {
      tight.push_back(family.rows()[i]);
      ++j;
    } else {
      kept.push_back(family.rows()[i]);
    }
  }

  // Affine hull of the boundary polytope, with a lattice-correct direction
  // basis chosen once (integer-echelon basis of the direction lattice).
  const RatMat intr = family.polytope_at(eps1).intrinsic_A();
  RatMat tight_A(0, intr.cols());
  RatVec tight_b;
  const HPolyhedron at_eps = family.polytope_at(eps1);
  for (auto local : tight_local) {
    tight_A.append_row(at_eps.intrinsic_A().row(local));
    tight_b.push_back(at_eps.intrinsic_b()[local]);
  }
  const auto hull = solve_affine(tight_A, tight_b);
  internal_check(hull.has_value(), "tight rows of a nonempty polytope are inconsistent");
  const LatticeSplit split = integer_kernel_split(tight_A);

  AffineHost host;
  host.origin = at_eps.to_ambient(hull->witness);
  for (const auto& k : split.kernel) {
    RatVec dir(family.matrix_A().cols(), Rat(0));
    const RatVec kq = to_rat_vec(k);
    if (family.ambient()) {
      for (std::size_t c = 0; c < kq.size(); ++c)
        dir = add(dir, scale(family.ambient()->basis[c], kq[c]));
    } else {
      dir = kq;
    }
    host.basis.push_back(dir);
  }

  ParametricFamily restricted(family.matrix_A(), family.vector_B(), family.vector_C(),
                              family.exempt_rows(), host);
  ParametricFamily narrowed = restricted.with_rows(kept);

  ExtensionResult out{ExtensionResult::Case::subspace, narrowed, {}, tight};
  if (!out.family.omega_max().contains(eps1)) {
    internal_check(out.family.in_omega1({}, eps1),
                   "restricted boundary polytope still lacks interior");
    std::vector<std::size_t> dropped, kept2;
    for (auto r : out.family.rows()) {
      const bool exempt = std::binary_search(out.family.exempt_rows().begin(),
                                             out.family.exempt_rows().end(), r);
      if (!exempt && !out.family.in_omega1({r}, eps1))
        dropped.push_back(r);
      else
        kept2.push_back(r);
    }
    internal_check(!dropped.empty(), "boundary outside the restricted span with no bad row");
    out.family = out.family.with_rows(kept2);
    out.dropped_rows = dropped;
    internal_check(out.family.omega_max().contains(eps1),
                   "restricted family does not contain the boundary parameter");
  }
  return out;
}

ClassDecomposition iterated_decomposition(const ParametricFamily& family) {
  return iterate(family, sweep_candidates);
}

ClassDecomposition iterated_decomposition_oracle(const ParametricFamily& family) {
  return iterate(family, brute_candidates);
}

}  // namespace polymmp
