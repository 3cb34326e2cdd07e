#include "polymmp/root_system.hpp"

#include <algorithm>
#include <set>

#include "polymmp/errors.hpp"

namespace polymmp {

RootType parse_root_type(const std::string& name) {
  if (name.size() == 1) {
    switch (name[0]) {
      case 'A': case 'a': return RootType::A;
      case 'B': case 'b': return RootType::B;
      case 'C': case 'c': return RootType::C;
      case 'D': case 'd': return RootType::D;
      case 'E': case 'e': return RootType::E;
      case 'F': case 'f': return RootType::F;
      case 'G': case 'g': return RootType::G;
      default: break;
    }
  }
  if (name == "torus") return RootType::torus;
  throw InvariantError("unknown root-system type: \"" + name + "\"");
}

std::string root_type_name(RootType type) {
  switch (type) {
    case RootType::A: return "A";
    case RootType::B: return "B";
    case RootType::C: return "C";
    case RootType::D: return "D";
    case RootType::E: return "E";
    case RootType::F: return "F";
    case RootType::G: return "G";
    case RootType::torus: return "torus";
  }
  return "?";
}

int RootSystemData::pair_with_coroot(const std::vector<int>& v, std::size_t i) const {
  int acc = 0;
  for (std::size_t j = 0; j < rank; ++j) acc += v[j] * cartan[i][j];
  return acc;
}

namespace {

std::vector<std::vector<int>> cartan_matrix(RootType type, std::size_t n) {
  std::vector<std::vector<int>> c(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) c[i][i] = 2;
  auto bond = [&](std::size_t i, std::size_t j) { c[i][j] = -1; c[j][i] = -1; };
  switch (type) {
    case RootType::A:
      if (n < 1) throw InvariantError("type A needs rank >= 1");
      for (std::size_t i = 0; i + 1 < n; ++i) bond(i, i + 1);
      break;
    case RootType::B:
      if (n < 2) throw InvariantError("type B needs rank >= 2");
      for (std::size_t i = 0; i + 1 < n; ++i) bond(i, i + 1);
      c[n - 1][n - 2] = -2;  // short last root
      break;
    case RootType::C:
      if (n < 2) throw InvariantError("type C needs rank >= 2");
      for (std::size_t i = 0; i + 1 < n; ++i) bond(i, i + 1);
      c[n - 2][n - 1] = -2;  // long last root
      break;
    case RootType::D:
      if (n < 3) throw InvariantError("type D needs rank >= 3");
      for (std::size_t i = 0; i + 2 < n; ++i) bond(i, i + 1);
      bond(n - 3, n - 1);
      break;
    case RootType::E: {
      if (n < 6 || n > 8) throw InvariantError("type E needs rank 6, 7 or 8");
      // Chain 1-3-4-5-6(-7)(-8) with node 2 attached to node 4.
      bond(0, 2);
      for (std::size_t i = 2; i + 1 < n; ++i) bond(i, i + 1);
      bond(1, 3);
      break;
    }
    case RootType::F:
      if (n != 4) throw InvariantError("type F needs rank 4");
      bond(0, 1);
      bond(2, 3);
      c[1][2] = -1;
      c[2][1] = -2;
      break;
    case RootType::G:
      if (n != 2) throw InvariantError("type G needs rank 2");
      c[0][1] = -3;
      c[1][0] = -1;
      break;
    case RootType::torus:
      throw InvariantError("torus has no Cartan matrix");
  }
  return c;
}

}  // namespace

RootSystemData root_system(RootType type, std::size_t rank) {
  RootSystemData data;
  data.type = type;
  if (type == RootType::torus) {
    data.rank = 0;
    return data;
  }
  if (rank > 8) throw InvariantError("supported rank is capped at 8");
  data.rank = rank;
  data.cartan = cartan_matrix(type, rank);

  // Close the simple roots under simple reflections; keep the positive half.
  std::set<std::vector<int>> all;
  std::vector<std::vector<int>> work;
  for (std::size_t i = 0; i < rank; ++i) {
    std::vector<int> e(rank, 0);
    e[i] = 1;
    all.insert(e);
    work.push_back(e);
  }
  while (!work.empty()) {
    const auto v = work.back();
    work.pop_back();
    for (std::size_t i = 0; i < rank; ++i) {
      auto w = v;
      w[i] -= data.pair_with_coroot(v, i);
      if (all.insert(w).second) work.push_back(w);
    }
  }
  for (const auto& v : all) {
    const bool positive = std::all_of(v.begin(), v.end(), [](int x) { return x >= 0; });
    if (positive) data.positive_roots.push_back(v);
  }
  return data;
}

HoroSpace::HoroSpace(RootSystemData roots, std::vector<std::size_t> parabolic,
                     std::vector<RatVec> m_basis)
    : roots_(std::move(roots)), parabolic_(std::move(parabolic)), m_basis_(std::move(m_basis)) {
  std::sort(parabolic_.begin(), parabolic_.end());
  parabolic_.erase(std::unique(parabolic_.begin(), parabolic_.end()), parabolic_.end());
  for (auto r : parabolic_)
    if (r >= roots_.rank) throw InvariantError("parabolic root index out of range");
  for (std::size_t i = 0; i < roots_.rank; ++i)
    if (!std::binary_search(parabolic_.begin(), parabolic_.end(), i)) free_roots_.push_back(i);

  if (m_basis_.empty()) throw InvariantError("empty lattice basis");
  if (roots_.type == RootType::torus) {
    weight_dim_ = m_basis_.front().size();
  } else {
    weight_dim_ = free_roots_.size();
    if (weight_dim_ == 0) throw InvariantError("all simple roots parabolic: no weight lattice");
  }
  for (const auto& v : m_basis_)
    if (v.size() != weight_dim_) throw InvariantError("lattice basis dimension mismatch");
  RatMat basis = RatMat::from_rows(m_basis_);
  if (rank(basis) != m_basis_.size())
    throw InvariantError("lattice basis vectors are linearly dependent");
}

HoroSpace HoroSpace::torus(std::size_t rank) {
  if (rank == 0) throw InvariantError("torus rank must be positive");
  std::vector<RatVec> basis;
  for (std::size_t i = 0; i < rank; ++i) {
    RatVec e(rank, Rat(0));
    e[i] = 1;
    basis.push_back(std::move(e));
  }
  return HoroSpace(root_system(RootType::torus, 0), {}, std::move(basis));
}

std::size_t HoroSpace::color_position(std::size_t simple_root) const {
  const auto it = std::find(free_roots_.begin(), free_roots_.end(), simple_root);
  if (it == free_roots_.end())
    throw InvariantError("simple root lies in the parabolic subset");
  return static_cast<std::size_t>(it - free_roots_.begin());
}

RatVec HoroSpace::coroot_restriction(std::size_t simple_root) const {
  const std::size_t pos = color_position(simple_root);
  RatVec out(lattice_rank());
  for (std::size_t i = 0; i < m_basis_.size(); ++i) out[i] = m_basis_[i][pos];
  return out;
}

Rat HoroSpace::wall_pairing(const RatVec& weight_point, std::size_t color_position) const {
  if (weight_point.size() != weight_dim_) throw InvariantError("weight point dimension mismatch");
  return weight_point[color_position];
}

std::map<std::size_t, Rat> HoroSpace::anticanonical_colors() const {
  std::map<std::size_t, Rat> out;
  if (roots_.type == RootType::torus) return out;
  // Sum the positive roots not supported on the parabolic subset.
  std::vector<int> sum(roots_.rank, 0);
  for (const auto& root : roots_.positive_roots) {
    bool inside_parabolic = true;
    for (std::size_t j = 0; j < roots_.rank && inside_parabolic; ++j)
      if (root[j] != 0 && !std::binary_search(parabolic_.begin(), parabolic_.end(), j))
        inside_parabolic = false;
    if (inside_parabolic) continue;
    for (std::size_t j = 0; j < roots_.rank; ++j) sum[j] += root[j];
  }
  for (auto alpha : free_roots_) out[alpha] = Rat(roots_.pair_with_coroot(sum, alpha));
  return out;
}

}  // namespace polymmp
