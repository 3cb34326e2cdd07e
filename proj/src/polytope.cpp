#include "polymmp/polytope.hpp"

#include <algorithm>
#include <set>

#include "polymmp/errors.hpp"

namespace polymmp {

namespace {

bool lex_less(const RatVec& a, const RatVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Iterates over all `choose`-element subsets of {0,...,total-1}.
template <typename F>
void for_each_subset(std::size_t total, std::size_t choose, F&& fn) {
  if (choose > total) return;
  std::vector<std::size_t> idx(choose);
  for (std::size_t i = 0; i < choose; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    std::size_t i = choose;
    for (;;) {
      if (i == 0) return;
      --i;
      if (idx[i] != i + total - choose) break;
      if (i == 0) return;
    }
    ++idx[i];
    for (std::size_t j = i + 1; j < choose; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Geometric facet key: primitive normal plus matching scaled offset, so
// positively proportional copies of one facet row collapse to one key.
using FacetKey = std::pair<std::vector<std::string>, std::string>;

FacetKey facet_key(const RatVec& row, const Rat& rhs) {
  const IntVec prim = primitive_vector(row);
  std::size_t j = 0;
  while (prim[j] == 0) ++j;
  const Rat lambda = row[j] / Rat(prim[j]);  // positive by construction
  FacetKey key;
  for (const auto& x : prim) key.first.push_back(x.str());
  key.second = rat_to_string(rhs / lambda);
  return key;
}

}  // namespace

HPolyhedron::HPolyhedron(RatMat A, RatVec b) : A_(std::move(A)), b_(std::move(b)) {
  if (b_.size() != A_.rows()) throw InvariantError("polyhedron rhs length mismatch");
  build_intrinsic();
}

HPolyhedron::HPolyhedron(RatMat A, RatVec b, AffineHost host)
    : A_(std::move(A)), b_(std::move(b)), host_(std::move(host)) {
  if (b_.size() != A_.rows()) throw InvariantError("polyhedron rhs length mismatch");
  if (host_->origin.size() != A_.cols()) throw InvariantError("host origin dimension mismatch");
  for (const auto& v : host_->basis)
    if (v.size() != A_.cols()) throw InvariantError("host basis dimension mismatch");
  build_intrinsic();
}

void HPolyhedron::build_intrinsic() {
  if (!host_) {
    intrinsic_A_ = A_;
    intrinsic_b_ = b_;
    return;
  }
  const std::size_t k = host_->basis.size();
  intrinsic_A_ = RatMat(A_.rows(), k);
  for (std::size_t r = 0; r < A_.rows(); ++r) {
    const RatVec row = A_.row(r);
    for (std::size_t c = 0; c < k; ++c) intrinsic_A_.at(r, c) = dot(row, host_->basis[c]);
  }
  const RatVec shift = A_.apply(host_->origin);
  intrinsic_b_ = b_;
  for (std::size_t r = 0; r < b_.size(); ++r) intrinsic_b_[r] -= shift[r];
}

RatVec HPolyhedron::to_ambient(const RatVec& u) const {
  if (!host_) return u;
  RatVec x = host_->origin;
  for (std::size_t c = 0; c < host_->basis.size(); ++c)
    x = add(x, scale(host_->basis[c], u[c]));
  return x;
}

bool HPolyhedron::is_feasible() const {
  IneqSystem sys(intrinsic_dim());
  for (std::size_t r = 0; r < row_count(); ++r)
    sys.add_ge(intrinsic_A_.row(r), intrinsic_b_[r]);
  return feasible_point(sys).has_value();
}

bool HPolyhedron::is_recession_trivial() const {
  const std::size_t k = intrinsic_dim();
  IneqSystem cone(k);
  for (std::size_t r = 0; r < row_count(); ++r) cone.add_ge(intrinsic_A_.row(r), Rat(0));
  for (std::size_t i = 0; i < k; ++i) {
    RatVec e(k, Rat(0));
    e[i] = 1;
    if (lp_extremize(e, cone, true).status != LPStatus::optimal) return false;
    if (lp_extremize(e, cone, false).status != LPStatus::optimal) return false;
  }
  return true;
}

std::vector<FaceRecord> HPolyhedron::vertices() const {
  const std::size_t k = intrinsic_dim();
  const std::size_t m = row_count();

  if (k == 0) {
    // The host point itself, if the rows allow it.
    std::vector<FaceRecord> out;
    FaceRecord rec;
    for (std::size_t r = 0; r < m; ++r) {
      if (intrinsic_b_[r] > 0) return out;
      if (intrinsic_b_[r] == 0) rec.active.push_back(r);
    }
    rec.dim = 0;
    rec.witness = {};
    rec.witness_ambient = to_ambient({});
    out.push_back(std::move(rec));
    return out;
  }

  if (!is_recession_trivial())
    throw InvariantError("vertex enumeration requires a bounded polyhedron");

  std::vector<FaceRecord> out;
  std::set<std::vector<std::string>> seen;
  for_each_subset(m, k, [&](const std::vector<std::size_t>& subset) {
    RatVec rhs;
    for (auto r : subset) rhs.push_back(intrinsic_b_[r]);
    auto sol = solve_affine(intrinsic_A_.select_rows(subset), rhs);
    if (!sol || !sol->kernel_basis.empty()) return;
    const RatVec& u = sol->witness;
    FaceRecord rec;
    for (std::size_t r = 0; r < m; ++r) {
      const Rat value = dot(intrinsic_A_.row(r), u);
      if (value < intrinsic_b_[r]) return;  // infeasible basis
      if (value == intrinsic_b_[r]) rec.active.push_back(r);
    }
    std::vector<std::string> key;
    for (const auto& x : u) key.push_back(rat_to_string(x));
    if (!seen.insert(key).second) return;
    rec.dim = 0;
    rec.witness = u;
    rec.witness_ambient = to_ambient(u);
    out.push_back(std::move(rec));
  });
  std::sort(out.begin(), out.end(), [](const FaceRecord& a, const FaceRecord& b) {
    return lex_less(a.witness_ambient, b.witness_ambient);
  });
  return out;
}

std::vector<FaceRecord> HPolyhedron::faces_from(const std::vector<FaceRecord>& verts) const {
  std::vector<FaceRecord> out;
  if (verts.empty()) return out;

  // Close vertex active sets under intersection; each candidate set is then
  // canonicalized to the maximal active set of the face it spans.
  std::set<std::vector<std::size_t>> pool;
  for (const auto& v : verts) pool.insert(v.active);
  for (;;) {
    std::set<std::vector<std::size_t>> next = pool;
    for (const auto& a : pool)
      for (const auto& b : pool) {
        std::vector<std::size_t> meet;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(meet));
        next.insert(meet);
      }
    if (next.size() == pool.size()) break;
    pool = std::move(next);
  }

  std::set<std::vector<std::size_t>> emitted;
  for (const auto& candidate : pool) {
    // Maximal active set: rows tight at every vertex of the spanned face.
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (std::includes(verts[i].active.begin(), verts[i].active.end(), candidate.begin(),
                        candidate.end()))
        members.push_back(i);
    internal_check(!members.empty(), "face candidate without vertices");
    std::vector<std::size_t> maximal = verts[members.front()].active;
    for (std::size_t i = 1; i < members.size(); ++i) {
      std::vector<std::size_t> meet;
      const auto& va = verts[members[i]].active;
      std::set_intersection(maximal.begin(), maximal.end(), va.begin(), va.end(),
                            std::back_inserter(meet));
      maximal = std::move(meet);
    }
    if (!emitted.insert(maximal).second) continue;

    FaceRecord rec;
    rec.active = maximal;
    rec.dim = intrinsic_dim() - rank(intrinsic_A_.select_rows(maximal));
    RatVec sum(intrinsic_dim(), Rat(0));
    for (auto i : members) sum = add(sum, verts[i].witness);
    rec.witness = scale(sum, Rat(1) / Rat(static_cast<int>(members.size())));
    rec.witness_ambient = to_ambient(rec.witness);
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(), [](const FaceRecord& a, const FaceRecord& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.active < b.active;
  });
  return out;
}

std::vector<FaceRecord> HPolyhedron::faces() const { return faces_from(vertices()); }

CombinatorialType HPolyhedron::combinatorial_type() const {
  CombinatorialType type;
  for (const auto& f : faces()) type.faces.push_back(f.active);
  std::sort(type.faces.begin(), type.faces.end(),
            [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return type;
}

std::size_t HPolyhedron::dimension() const {
  const auto verts = vertices();
  if (verts.empty()) throw InvariantError("dimension of an empty polytope");
  std::vector<std::size_t> everywhere = verts.front().active;
  for (const auto& v : verts) {
    std::vector<std::size_t> meet;
    std::set_intersection(everywhere.begin(), everywhere.end(), v.active.begin(), v.active.end(),
                          std::back_inserter(meet));
    everywhere = std::move(meet);
  }
  return intrinsic_dim() - rank(intrinsic_A_.select_rows(everywhere));
}

std::vector<std::size_t> HPolyhedron::facet_rows() const {
  const auto verts = vertices();
  if (verts.empty()) return {};
  const std::size_t dim = dimension();
  if (dim == 0) return {};
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < row_count(); ++r) {
    std::vector<std::size_t> tight_set;
    bool any = false;
    for (const auto& v : verts) {
      if (!std::binary_search(v.active.begin(), v.active.end(), r)) continue;
      if (!any) {
        tight_set = v.active;
        any = true;
      } else {
        std::vector<std::size_t> meet;
        std::set_intersection(tight_set.begin(), tight_set.end(), v.active.begin(),
                              v.active.end(), std::back_inserter(meet));
        tight_set = std::move(meet);
      }
    }
    if (!any) continue;
    if (intrinsic_dim() - rank(intrinsic_A_.select_rows(tight_set)) == dim - 1)
      out.push_back(r);
  }
  return out;
}

bool HPolyhedron::is_simple() const {
  const auto verts = vertices();
  if (verts.empty()) throw InvariantError("simplicity of an empty polytope");
  const std::size_t dim = dimension();
  const auto facets = facet_rows();
  const std::set<std::size_t> facet_set(facets.begin(), facets.end());
  for (const auto& v : verts) {
    std::set<FacetKey> distinct;
    for (auto r : v.active)
      if (facet_set.count(r)) distinct.insert(facet_key(intrinsic_A_.row(r), intrinsic_b_[r]));
    if (distinct.size() != dim) return false;
  }
  return true;
}

std::vector<RatVec> HPolyhedron::normal_cone(const FaceRecord& vertex) const {
  if (vertex.dim != 0) throw InvariantError("normal_cone expects a vertex");
  const auto facets = facet_rows();
  const std::set<std::size_t> facet_set(facets.begin(), facets.end());
  std::set<FacetKey> emitted;
  std::vector<RatVec> out;
  for (auto r : vertex.active) {
    if (!facet_set.count(r)) continue;
    const auto key = facet_key(intrinsic_A_.row(r), intrinsic_b_[r]);
    if (!emitted.insert(key).second) continue;
    out.push_back(to_rat_vec(primitive_vector(intrinsic_A_.row(r))));
  }
  if (out.empty()) throw InvariantError("normal_cone argument is not a vertex of this polytope");
  return out;
}

std::optional<FaceRecord> HPolyhedron::face_of_active(const std::vector<std::size_t>& rows) const {
  std::vector<std::size_t> sorted = rows;
  std::sort(sorted.begin(), sorted.end());
  std::optional<FaceRecord> best;
  for (const auto& f : faces()) {
    if (!std::includes(f.active.begin(), f.active.end(), sorted.begin(), sorted.end())) continue;
    if (!best || f.dim > best->dim) best = f;
  }
  return best;
}

}  // namespace polymmp
