#include "polymmp/lp.hpp"

#include <algorithm>

#include "polymmp/errors.hpp"

namespace polymmp {

void IneqSystem::add_eq(const RatVec& coeffs, const Rat& rhs) {
  if (coeffs.size() != vars_) throw InvariantError("constraint arity mismatch");
  eq_A_.append_row(coeffs);
  eq_b_.push_back(rhs);
}

void IneqSystem::add_ge(const RatVec& coeffs, const Rat& rhs) {
  if (coeffs.size() != vars_) throw InvariantError("constraint arity mismatch");
  ge_A_.append_row(coeffs);
  ge_b_.push_back(rhs);
}

void IneqSystem::add_gt(const RatVec& coeffs, const Rat& rhs) {
  if (coeffs.size() != vars_) throw InvariantError("constraint arity mismatch");
  gt_A_.append_row(coeffs);
  gt_b_.push_back(rhs);
}

namespace {

// Dense simplex tableau in basis-canonical form. Bland's rule throughout,
// so every pivot sequence terminates and runs are deterministic.
class Simplex {
 public:
  // Standard form: maximize cost . y subject to A y = b, y >= 0, b >= 0.
  Simplex(RatMat A, RatVec b) : A_(std::move(A)), b_(std::move(b)) {}

  // Phase 1 with one artificial per row. Returns false when infeasible.
  bool find_basis() {
    const std::size_t m = A_.rows(), n = A_.cols();
    for (std::size_t r = 0; r < m; ++r) {
      if (b_[r] < 0) {
        for (std::size_t c = 0; c < n; ++c) A_.at(r, c) = -A_.at(r, c);
        b_[r] = -b_[r];
      }
    }
    RatMat full(m, n + m);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) full.at(r, c) = A_.at(r, c);
      full.at(r, n + r) = 1;
    }
    A_ = std::move(full);
    basis_.resize(m);
    for (std::size_t r = 0; r < m; ++r) basis_[r] = n + r;

    // Maximize -sum(artificials); reduced over the artificial basis.
    cost_.assign(n + m, Rat(0));
    value_ = 0;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) cost_[c] += A_.at(r, c);
      value_ -= b_[r];
    }
    run();
    if (value_ != 0) return false;

    // Pivot leftover artificials out; an all-zero structural row is redundant.
    for (std::size_t r = 0; r < basis_.size();) {
      if (basis_[r] < n) { ++r; continue; }
      std::optional<std::size_t> col;
      for (std::size_t c = 0; c < n; ++c)
        if (A_.at(r, c) != 0) { col = c; break; }
      if (col) {
        pivot(r, *col);
        ++r;
      } else {
        drop_row(r);
      }
    }
    // Forget the artificial columns.
    RatMat trimmed(A_.rows(), n);
    for (std::size_t r = 0; r < A_.rows(); ++r)
      for (std::size_t c = 0; c < n; ++c) trimmed.at(r, c) = A_.at(r, c);
    A_ = std::move(trimmed);
    return true;
  }

  // Phase 2. Requires find_basis() == true.
  LPStatus optimize(const RatVec& objective) {
    cost_ = objective;
    value_ = 0;
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      const Rat factor = cost_[basis_[r]];
      if (factor == 0) continue;
      value_ += factor * b_[r];
      for (std::size_t c = 0; c < A_.cols(); ++c) cost_[c] -= factor * A_.at(r, c);
    }
    return run();
  }

  const Rat& value() const { return value_; }

  RatVec solution() const {
    RatVec y(A_.cols(), Rat(0));
    for (std::size_t r = 0; r < basis_.size(); ++r) y[basis_[r]] = b_[r];
    return y;
  }

 private:
  LPStatus run() {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t c = 0; c < A_.cols(); ++c)
        if (cost_[c] > 0) { enter = c; break; }
      if (!enter) return LPStatus::optimal;

      std::optional<std::size_t> leave;
      Rat best_ratio;
      for (std::size_t r = 0; r < A_.rows(); ++r) {
        if (A_.at(r, *enter) <= 0) continue;
        const Rat ratio = b_[r] / A_.at(r, *enter);
        if (!leave || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[*leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (!leave) return LPStatus::unbounded;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rat inv = Rat(1) / A_.at(row, col);
    for (std::size_t c = 0; c < A_.cols(); ++c) A_.at(row, c) *= inv;
    b_[row] *= inv;
    for (std::size_t r = 0; r < A_.rows(); ++r) {
      if (r == row) continue;
      const Rat factor = A_.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = 0; c < A_.cols(); ++c) A_.at(r, c) -= factor * A_.at(row, c);
      b_[r] -= factor * b_[row];
    }
    const Rat cfactor = cost_[col];
    if (cfactor != 0) {
      value_ += cfactor * b_[row];
      for (std::size_t c = 0; c < A_.cols(); ++c) cost_[c] -= cfactor * A_.at(row, c);
    }
    basis_[row] = col;
  }

  void drop_row(std::size_t row) {
    RatMat next(A_.rows() - 1, A_.cols());
    std::size_t out = 0;
    for (std::size_t r = 0; r < A_.rows(); ++r) {
      if (r == row) continue;
      for (std::size_t c = 0; c < A_.cols(); ++c) next.at(out, c) = A_.at(r, c);
      ++out;
    }
    A_ = std::move(next);
    b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
  }

  RatMat A_;
  RatVec b_;
  RatVec cost_;
  Rat value_ = 0;
  std::vector<std::size_t> basis_;
};

// Standard-form encoding: each free variable splits as u - v, every weak
// inequality row gains a surplus variable.
struct StandardForm {
  RatMat A;
  RatVec b;
  std::size_t vars;  // original free variables

  explicit StandardForm(const IneqSystem& sys) : vars(sys.vars()) {
    const std::size_t m_eq = sys.eq_A().rows();
    const std::size_t m_ge = sys.ge_A().rows();
    const std::size_t cols = 2 * vars + m_ge;
    A = RatMat(m_eq + m_ge, cols);
    b.resize(m_eq + m_ge);
    for (std::size_t r = 0; r < m_eq; ++r) {
      for (std::size_t c = 0; c < vars; ++c) {
        A.at(r, c) = sys.eq_A().at(r, c);
        A.at(r, vars + c) = -sys.eq_A().at(r, c);
      }
      b[r] = sys.eq_b()[r];
    }
    for (std::size_t r = 0; r < m_ge; ++r) {
      const std::size_t row = m_eq + r;
      for (std::size_t c = 0; c < vars; ++c) {
        A.at(row, c) = sys.ge_A().at(r, c);
        A.at(row, vars + c) = -sys.ge_A().at(r, c);
      }
      A.at(row, 2 * vars + r) = -1;
      b[row] = sys.ge_b()[r];
    }
  }

  RatVec objective(const RatVec& c) const {
    RatVec out(A.cols(), Rat(0));
    for (std::size_t i = 0; i < vars; ++i) {
      out[i] = c[i];
      out[vars + i] = -c[i];
    }
    return out;
  }

  RatVec recover(const RatVec& y) const {
    RatVec x(vars);
    for (std::size_t i = 0; i < vars; ++i) x[i] = y[i] - y[vars + i];
    return x;
  }
};

}  // namespace

LPResult lp_extremize(const RatVec& objective, const IneqSystem& system, bool maximize) {
  if (objective.size() != system.vars()) throw InvariantError("objective arity mismatch");
  if (system.gt_A().rows() != 0)
    throw InvariantError("lp_extremize does not accept strict rows");

  const StandardForm form(system);
  Simplex simplex(form.A, form.b);
  LPResult result;
  if (!simplex.find_basis()) {
    result.status = LPStatus::infeasible;
    return result;
  }
  const RatVec c = maximize ? objective : scale(objective, Rat(-1));
  result.status = simplex.optimize(form.objective(c));
  if (result.status == LPStatus::optimal) {
    result.value = maximize ? simplex.value() : -simplex.value();
    result.point = form.recover(simplex.solution());
  }
  return result;
}

std::optional<RatVec> feasible_point(const IneqSystem& system) {
  if (system.gt_A().rows() != 0)
    throw InvariantError("feasible_point does not accept strict rows");
  const StandardForm form(system);
  Simplex simplex(form.A, form.b);
  if (!simplex.find_basis()) return std::nullopt;
  return form.recover(simplex.solution());
}

std::optional<RatVec> strict_feasible(const IneqSystem& system) {
  const std::size_t n = system.vars();
  if (system.gt_A().rows() == 0) {
    return feasible_point(system);
  }
  // Lift by a slack t shared across all strict rows, maximize t capped at 1.
  IneqSystem lifted(n + 1);
  auto lift = [](const RatVec& row, const Rat& t_coeff) {
    RatVec out(row);
    out.push_back(t_coeff);
    return out;
  };
  for (std::size_t r = 0; r < system.eq_A().rows(); ++r)
    lifted.add_eq(lift(system.eq_A().row(r), Rat(0)), system.eq_b()[r]);
  for (std::size_t r = 0; r < system.ge_A().rows(); ++r)
    lifted.add_ge(lift(system.ge_A().row(r), Rat(0)), system.ge_b()[r]);
  for (std::size_t r = 0; r < system.gt_A().rows(); ++r)
    lifted.add_ge(lift(system.gt_A().row(r), Rat(-1)), system.gt_b()[r]);
  RatVec cap(n + 1, Rat(0));
  cap[n] = -1;
  lifted.add_ge(cap, Rat(-1));  // t <= 1

  RatVec objective(n + 1, Rat(0));
  objective[n] = 1;
  const LPResult lp = lp_extremize(objective, lifted, /*maximize=*/true);
  if (lp.status != LPStatus::optimal || lp.value <= 0) return std::nullopt;
  RatVec point(lp.point.begin(), lp.point.begin() + static_cast<std::ptrdiff_t>(n));
  return point;
}

}  // namespace polymmp
