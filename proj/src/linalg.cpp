#include "polymmp/linalg.hpp"

#include <algorithm>

#include "polymmp/errors.hpp"

namespace polymmp {

RatMat::RatMat(std::initializer_list<std::initializer_list<Rat>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : init) {
    if (r.size() != cols_) throw InvariantError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RatMat RatMat::identity(std::size_t n) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::from_rows(const std::vector<RatVec>& rows) {
  RatMat m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

RatVec RatMat::row(std::size_t r) const {
  return RatVec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

void RatMat::set_row(std::size_t r, const RatVec& values) {
  if (values.size() != cols_) throw InvariantError("row length mismatch");
  std::copy(values.begin(), values.end(), data_.begin() + r * cols_);
}

void RatMat::append_row(const RatVec& values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw InvariantError("row length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

RatMat RatMat::select_rows(const std::vector<std::size_t>& which) const {
  RatMat out(which.size(), cols_);
  for (std::size_t i = 0; i < which.size(); ++i) out.set_row(i, row(which[i]));
  return out;
}

RatVec RatMat::apply(const RatVec& x) const {
  if (x.size() != cols_) throw InvariantError("matrix-vector dimension mismatch");
  RatVec y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rat acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) acc += at(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

RatMat RatMat::multiply(const RatMat& other) const {
  if (cols_ != other.rows_) throw InvariantError("matrix product dimension mismatch");
  RatMat out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(r, k) == 0) continue;
      for (std::size_t c = 0; c < other.cols_; ++c)
        out.at(r, c) += at(r, k) * other.at(k, c);
    }
  return out;
}

Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw InvariantError("dot dimension mismatch");
  Rat acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

RatVec add(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw InvariantError("vector sum dimension mismatch");
  RatVec out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

RatVec subtract(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw InvariantError("vector difference dimension mismatch");
  RatVec out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

RatVec scale(const RatVec& a, const Rat& s) {
  RatVec out(a);
  for (auto& v : out) v *= s;
  return out;
}

bool is_zero(const RatVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rat& v) { return v == 0; });
}

namespace {

// g = gcd(a, b) > 0 with g = x*a + y*b; (a, b) != (0, 0).
void ext_gcd(const Int& a, const Int& b, Int& g, Int& x, Int& y) {
  Int old_r = a, r = b;
  Int old_x = 1, cur_x = 0;
  Int old_y = 0, cur_y = 1;
  while (r != 0) {
    const Int q = old_r / r;
    Int t = old_r - q * r; old_r = r; r = t;
    t = old_x - q * cur_x; old_x = cur_x; cur_x = t;
    t = old_y - q * cur_y; old_y = cur_y; cur_y = t;
  }
  if (old_r < 0) { old_r = -old_r; old_x = -old_x; old_y = -old_y; }
  g = old_r; x = old_x; y = old_y;
}

// Reduced row echelon form; returns the pivot column of each pivot row.
std::vector<std::size_t> rref_inplace(RatMat& m) {
  std::vector<std::size_t> pivot_cols;
  std::size_t pr = 0;
  for (std::size_t c = 0; c < m.cols() && pr < m.rows(); ++c) {
    std::size_t pivot = pr;
    while (pivot < m.rows() && m.at(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != pr)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(pr, j));
    const Rat inv = Rat(1) / m.at(pr, c);
    for (std::size_t j = c; j < m.cols(); ++j) m.at(pr, j) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == pr || m.at(r, c) == 0) continue;
      const Rat factor = m.at(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) -= factor * m.at(pr, j);
    }
    pivot_cols.push_back(c);
    ++pr;
  }
  return pivot_cols;
}

}  // namespace

std::optional<AffineSet> solve_affine(const RatMat& A, const RatVec& b) {
  if (b.size() != A.rows()) throw InvariantError("solve_affine dimension mismatch");
  const std::size_t n = A.cols();
  RatMat aug(A.rows(), n + 1);
  for (std::size_t r = 0; r < A.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = A.at(r, c);
    aug.at(r, n) = b[r];
  }
  const auto pivots = rref_inplace(aug);
  if (!pivots.empty() && pivots.back() == n) return std::nullopt;  // b not in Im(A)

  AffineSet result;
  result.witness.assign(n, Rat(0));
  std::vector<bool> is_pivot_col(n, false);
  for (std::size_t pr = 0; pr < pivots.size(); ++pr) {
    is_pivot_col[pivots[pr]] = true;
    result.witness[pivots[pr]] = aug.at(pr, n);
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (is_pivot_col[c]) continue;
    RatVec k(n, Rat(0));
    k[c] = 1;
    for (std::size_t pr = 0; pr < pivots.size(); ++pr) k[pivots[pr]] = -aug.at(pr, c);
    result.kernel_basis.push_back(std::move(k));
  }
  return result;
}

std::size_t rank(const RatMat& A) {
  RatMat m = A;
  return rref_inplace(m).size();
}

std::vector<RatVec> kernel_basis(const RatMat& A) {
  auto sol = solve_affine(A, RatVec(A.rows(), Rat(0)));
  return sol->kernel_basis;
}

IntVec primitive_vector(const RatVec& v) {
  Int lcm_den = 1;
  for (const auto& x : v) lcm_den = boost::multiprecision::lcm(lcm_den, rat_den(x));
  IntVec scaled(v.size());
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    scaled[i] = rat_num(v[i]) * (lcm_den / rat_den(v[i]));
    g = boost::multiprecision::gcd(g, scaled[i]);
  }
  if (g == 0) throw InvariantError("primitive vector of the zero vector");
  for (auto& x : scaled) x /= g;
  return scaled;
}

LatticeSplit integer_kernel_split(const RatMat& A) {
  const std::size_t k = A.cols();
  // Integer row data (denominators cleared row by row).
  std::vector<IntVec> rows;
  for (std::size_t r = 0; r < A.rows(); ++r) {
    const RatVec row = A.row(r);
    if (is_zero(row)) continue;
    Int lcm_den = 1;
    for (const auto& x : row) lcm_den = boost::multiprecision::lcm(lcm_den, rat_den(x));
    IntVec irow(k);
    for (std::size_t c = 0; c < k; ++c) irow[c] = rat_num(row[c]) * (lcm_den / rat_den(row[c]));
    rows.push_back(std::move(irow));
  }

  // Unimodular column reduction: the leading `active` columns of V always
  // form a Z-basis of the integer kernel of the rows processed so far.
  std::vector<IntVec> cols(k, IntVec(k, 0));
  for (std::size_t i = 0; i < k; ++i) cols[i][i] = 1;
  std::size_t active = k;
  std::vector<IntVec> complement;

  for (const auto& row : rows) {
    IntVec d(active);
    for (std::size_t j = 0; j < active; ++j) {
      Int acc = 0;
      for (std::size_t c = 0; c < k; ++c) acc += row[c] * cols[j][c];
      d[j] = acc;
    }
    // Combine columns pairwise until at most one pairing is nonzero.
    std::optional<std::size_t> lead;
    for (std::size_t j = 0; j < active; ++j) {
      if (d[j] == 0) continue;
      if (!lead) { lead = j; continue; }
      Int g, x, y;
      ext_gcd(d[*lead], d[j], g, x, y);
      const Int a = d[*lead] / g, b = d[j] / g;
      IntVec new_lead(k), new_j(k);
      for (std::size_t c = 0; c < k; ++c) {
        new_lead[c] = x * cols[*lead][c] + y * cols[j][c];
        new_j[c] = b * cols[*lead][c] - a * cols[j][c];
      }
      cols[*lead] = std::move(new_lead);
      cols[j] = std::move(new_j);
      d[*lead] = g;
      d[j] = 0;
    }
    if (lead) {
      complement.push_back(cols[*lead]);
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(*lead));
      --active;
    }
  }

  LatticeSplit split;
  split.kernel.assign(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(active));
  split.complement = std::move(complement);
  return split;
}

}  // namespace polymmp
