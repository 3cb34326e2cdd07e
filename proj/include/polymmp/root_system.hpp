#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polymmp/linalg.hpp"

namespace polymmp {

enum class RootType { A, B, C, D, E, F, G, torus };

RootType parse_root_type(const std::string& name);
std::string root_type_name(RootType type);

/** Cartan data of a finite root system (or a torus, which has none).
 *  Positive roots are stored in simple-root coordinates and generated by
 *  closing the simple roots under the simple reflections. */
struct RootSystemData {
  RootType type = RootType::torus;
  std::size_t rank = 0;                   // number of simple roots (0 for torus)
  std::vector<std::vector<int>> cartan;   // cartan[i][j] = <alpha_j, alpha_i^vee>
  std::vector<std::vector<int>> positive_roots;

  /// <v, alpha_i^vee> for v given in simple-root coordinates.
  int pair_with_coroot(const std::vector<int>& v, std::size_t i) const;
};

/// Builds the Cartan matrix and positive roots; rank is capped at 8.
RootSystemData root_system(RootType type, std::size_t rank);

/** Combinatorial stand-in for the homogeneous space: simple roots S, the
 *  parabolic subset R, the sublattice M (given by basis vectors in the
 *  fundamental-weight coordinates of X(P), indexed by S\R), and the
 *  restricted coroots. A torus has S empty and M in the standard lattice. */
class HoroSpace {
 public:
  HoroSpace(RootSystemData roots, std::vector<std::size_t> parabolic,
            std::vector<RatVec> m_basis);

  static HoroSpace torus(std::size_t rank);

  const RootSystemData& roots() const { return roots_; }
  const std::vector<std::size_t>& parabolic() const { return parabolic_; }
  /// Simple roots outside R, ascending; these index walls, colors and the
  /// fundamental-weight coordinates.
  const std::vector<std::size_t>& free_roots() const { return free_roots_; }
  std::size_t color_count() const { return free_roots_.size(); }

  const std::vector<RatVec>& m_basis() const { return m_basis_; }
  std::size_t lattice_rank() const { return m_basis_.size(); }
  std::size_t weight_dim() const { return weight_dim_; }

  /// Position of a free simple root inside free_roots(); throws if in R.
  std::size_t color_position(std::size_t simple_root) const;

  /** Restriction of the coroot of a free simple root to M: the vector of
   *  pairings with the M-basis, a point of N. */
  RatVec coroot_restriction(std::size_t simple_root) const;

  /// <v, alpha^vee> of a weight vector given in X(P) coordinates.
  Rat wall_pairing(const RatVec& weight_point, std::size_t color_position) const;

  /** Anticanonical color coefficients: for each free simple root alpha the
   *  pairing of the sum of positive roots not supported on R with
   *  alpha^vee. Empty for a torus. */
  std::map<std::size_t, Rat> anticanonical_colors() const;

 private:
  RootSystemData roots_;
  std::vector<std::size_t> parabolic_;
  std::vector<std::size_t> free_roots_;
  std::vector<RatVec> m_basis_;
  std::size_t weight_dim_ = 0;
};

}  // namespace polymmp
