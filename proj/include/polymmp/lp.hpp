#pragma once

#include <optional>

#include "polymmp/linalg.hpp"

namespace polymmp {

/** Mixed system of exact linear constraints over free rational variables.
 *  Rows are kept in insertion order; `gt` rows are strict. */
class IneqSystem {
 public:
  explicit IneqSystem(std::size_t vars) : vars_(vars) {}

  std::size_t vars() const { return vars_; }

  void add_eq(const RatVec& coeffs, const Rat& rhs);   // coeffs . x == rhs
  void add_ge(const RatVec& coeffs, const Rat& rhs);   // coeffs . x >= rhs
  void add_gt(const RatVec& coeffs, const Rat& rhs);   // coeffs . x >  rhs

  const RatMat& eq_A() const { return eq_A_; }
  const RatVec& eq_b() const { return eq_b_; }
  const RatMat& ge_A() const { return ge_A_; }
  const RatVec& ge_b() const { return ge_b_; }
  const RatMat& gt_A() const { return gt_A_; }
  const RatVec& gt_b() const { return gt_b_; }

 private:
  std::size_t vars_;
  RatMat eq_A_, ge_A_, gt_A_;
  RatVec eq_b_, ge_b_, gt_b_;
};

enum class LPStatus { optimal, unbounded, infeasible };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  Rat value;      // meaningful for optimal
  RatVec point;   // a point attaining the optimum (optimal only)
};

/** Exact extremization of objective . x over the weak part of the system
 *  (strict rows must be absent). Deterministic simplex with Bland's rule. */
LPResult lp_extremize(const RatVec& objective, const IneqSystem& system, bool maximize);

/// Any point of the weak system, or nullopt when infeasible.
std::optional<RatVec> feasible_point(const IneqSystem& system);

/** A point satisfying equalities exactly, strict rows strictly and weak rows
 *  weakly, or nullopt when none exists. A single auxiliary slack shared by
 *  all strict rows is maximized (capped at 1); the strict set is satisfiable
 *  iff the cap problem reaches a positive slack. */
std::optional<RatVec> strict_feasible(const IneqSystem& system);

}  // namespace polymmp
