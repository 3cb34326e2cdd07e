#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "polymmp/rational.hpp"

namespace polymmp {

using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

/** Dense rational matrix, row-major. Dimensions are fixed at construction;
 *  zero rows are allowed. */
class RatMat {
 public:
  RatMat() = default;
  RatMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  RatMat(std::initializer_list<std::initializer_list<Rat>> init);

  static RatMat identity(std::size_t n);
  static RatMat from_rows(const std::vector<RatVec>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rat& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RatVec row(std::size_t r) const;
  void set_row(std::size_t r, const RatVec& values);
  void append_row(const RatVec& values);

  /// Matrix of the rows indexed by `which`, in that order.
  RatMat select_rows(const std::vector<std::size_t>& which) const;

  RatVec apply(const RatVec& x) const;   // A * x
  RatMat multiply(const RatMat& other) const;

  bool operator==(const RatMat& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  RatVec data_;
};

Rat dot(const RatVec& a, const RatVec& b);
RatVec add(const RatVec& a, const RatVec& b);
RatVec subtract(const RatVec& a, const RatVec& b);
RatVec scale(const RatVec& a, const Rat& s);
bool is_zero(const RatVec& a);

/** Affine solution set of a consistent linear system: every point is
 *  witness + rational combination of the kernel basis. */
struct AffineSet {
  RatVec witness;
  std::vector<RatVec> kernel_basis;   // linearly independent, spans ker(A)
};

/// Exact solution set of A x = b, or nullopt when b is not in Im(A).
std::optional<AffineSet> solve_affine(const RatMat& A, const RatVec& b);

std::size_t rank(const RatMat& A);

/// Rational basis of ker(A).
std::vector<RatVec> kernel_basis(const RatMat& A);

/** Scales a nonzero rational vector by a positive rational so its entries
 *  become coprime integers; the direction is preserved. */
IntVec primitive_vector(const RatVec& v);

inline RatVec to_rat_vec(const IntVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

/** Unimodular column split of the ambient lattice against ker(A):
 *  `kernel` is a Z-basis of {u in Z^k : A u = 0} (saturated by construction)
 *  and `complement` completes it to a Z-basis of Z^k, so the complement
 *  columns project to a Z-basis of the quotient lattice. */
struct LatticeSplit {
  std::vector<IntVec> kernel;
  std::vector<IntVec> complement;
};

LatticeSplit integer_kernel_split(const RatMat& A);

}  // namespace polymmp
