#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "polymmp/errors.hpp"
#include "polymmp/lp.hpp"
#include "polymmp/rational.hpp"

using namespace polymmp;

namespace {

Rat Q(const char* s) { return parse_rat(s); }

RatVec vec(std::initializer_list<int> xs) {
  RatVec v;
  for (int x : xs) v.emplace_back(x);
  return v;
}

// Test-local row reduction, kept independent of the library solver: it only
// reports consistency and rank, via textbook forward elimination.
struct NaiveElim {
  std::vector<RatVec> rows;
  std::size_t cols;

  explicit NaiveElim(const RatMat& A, const RatVec* rhs = nullptr) {
    cols = A.cols() + (rhs ? 1 : 0);
    for (std::size_t r = 0; r < A.rows(); ++r) {
      RatVec row = A.row(r);
      if (rhs) row.push_back((*rhs)[r]);
      rows.push_back(row);
    }
  }

  std::size_t rank_of(std::size_t limit_cols) {
    std::size_t rank = 0;
    std::size_t r0 = 0;
    auto work = rows;
    for (std::size_t c = 0; c < limit_cols && r0 < work.size(); ++c) {
      std::size_t p = r0;
      while (p < work.size() && work[p][c] == 0) ++p;
      if (p == work.size()) continue;
      std::swap(work[p], work[r0]);
      for (std::size_t r = 0; r < work.size(); ++r) {
        if (r == r0 || work[r][c] == 0) continue;
        Rat f = work[r][c] / work[r0][c];
        for (std::size_t j = c; j < cols; ++j) work[r][j] -= f * work[r0][j];
      }
      ++rank;
      ++r0;
    }
    return rank;
  }
};

std::uint64_t property_seed() {
  if (const char* env = std::getenv("POLYMMP_SEED")) return std::strtoull(env, nullptr, 10);
  return 20240405u;
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
  CHECK(Q("3/6") == Q("1/2"));
  CHECK(rat_to_string(Q("3/6")) == "1/2");
  CHECK(rat_to_string(Q("-4/2")) == "-2");
  CHECK(rat_from_parts(Int(5), Int(-10)) == Q("-1/2"));
  CHECK(rat_to_string(rat_from_parts(Int(5), Int(-10))) == "-1/2");
  CHECK(Q("7") == Rat(7));
  CHECK_THROWS_AS(parse_rat("1/0"), InvariantError);
  CHECK_THROWS_AS(parse_rat("abc"), InvariantError);

  // String round-trip is the identity.
  std::mt19937_64 rng(property_seed());
  std::uniform_int_distribution<int> d(-200, 200);
  for (int i = 0; i < 200; ++i) {
    int den = 0;
    while (den == 0) den = d(rng);
    Rat r = rat_from_parts(Int(d(rng)), Int(den));
    CHECK(parse_rat(rat_to_string(r)) == r);
  }
}

TEST_CASE("solve_affine identity and zero-row cases") {
  auto sol = solve_affine(RatMat::identity(2), vec({1, 2}));
  REQUIRE(sol.has_value());
  CHECK(sol->witness == vec({1, 2}));
  CHECK(sol->kernel_basis.empty());

  RatMat zero(1, 3);
  auto sol2 = solve_affine(zero, vec({0}));
  REQUIRE(sol2.has_value());
  CHECK(is_zero(sol2->witness));
  CHECK(sol2->kernel_basis.size() == 3);

  CHECK_FALSE(solve_affine(zero, vec({1})).has_value());
}

TEST_CASE("solve_affine on the coplanar ray quadruple") {
  RatMat A{{Rat(2), Rat(0), Rat(-1)},
           {Rat(-2), Rat(0), Rat(-1)},
           {Rat(0), Rat(2), Rat(-1)},
           {Rat(0), Rat(-2), Rat(-1)}};
  auto sol = solve_affine(A, vec({1, 1, 1, 1}));
  REQUIRE(sol.has_value());
  CHECK(sol->witness == vec({0, 0, -1}));
  CHECK(sol->kernel_basis.empty());
}

TEST_CASE("solve_affine returns none exactly when the rank grows") {
  std::mt19937_64 rng(property_seed() + 1);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t m = 1 + rng() % 5, n = 1 + rng() % 4;
    RatMat A(m, n);
    RatVec b(m);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) A.at(r, c) = d(rng);
      b[r] = d(rng);
    }
    NaiveElim plain(A), augmented(A, &b);
    const bool solvable = plain.rank_of(n) == augmented.rank_of(n + 1);
    auto sol = solve_affine(A, b);
    CHECK(sol.has_value() == solvable);
    if (sol) {
      CHECK(A.apply(sol->witness) == b);
      for (const auto& k : sol->kernel_basis) CHECK(is_zero(A.apply(k)));
      CHECK(sol->kernel_basis.size() == n - plain.rank_of(n));
    }
  }
}

TEST_CASE("lp_extremize on interval and ray") {
  IneqSystem box(1);
  box.add_ge(vec({1}), Rat(0));
  box.add_ge(vec({-1}), Rat(-1));
  auto r = lp_extremize(vec({1}), box, true);
  CHECK(r.status == LPStatus::optimal);
  CHECK(r.value == 1);
  CHECK(r.point == vec({1}));

  IneqSystem ray(1);
  ray.add_ge(vec({1}), Rat(0));
  CHECK(lp_extremize(vec({1}), ray, true).status == LPStatus::unbounded);
  auto down = lp_extremize(vec({1}), ray, false);
  CHECK(down.status == LPStatus::optimal);
  CHECK(down.value == 0);
}

TEST_CASE("lp_extremize epsilon over lifted equality systems") {
  // Rows of the capped-pyramid moment system, lifted over (x, y, z, eps).
  const std::vector<RatVec> rows = {
      {Rat(0), Rat(0), Rat(1)},  {Rat(-1), Rat(-1), Rat(-2)}, {Rat(2), Rat(0), Rat(-1)},
      {Rat(-2), Rat(0), Rat(-1)}, {Rat(0), Rat(2), Rat(-1)},  {Rat(0), Rat(-2), Rat(-1)}};
  const RatVec b = {Rat(-1), Rat(-5), Rat(-3), Rat(-3), Rat(-3), Rat(-3)};

  auto lifted = [&](std::vector<std::size_t> which) {
    IneqSystem sys(4);
    for (auto i : which) {
      RatVec row = rows[i];
      row.push_back(Rat(-1));  // move eps to the left-hand side
      sys.add_eq(row, b[i]);
    }
    return sys;
  };

  auto all = lp_extremize(vec({0, 0, 0, 1}), lifted({0, 1, 2, 3, 4, 5}), true);
  CHECK(all.status == LPStatus::infeasible);

  auto four = lp_extremize(vec({0, 0, 0, 1}), lifted({1, 2, 4, 5}), true);
  CHECK(four.status == LPStatus::optimal);
  CHECK(four.value == 1);
}

TEST_CASE("lp optimum is attained at a basic solution") {
  // Re-solving the rows active at the reported optimum reproduces it.
  std::mt19937_64 rng(property_seed() + 2);
  std::uniform_int_distribution<int> d(-5, 5);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    const std::size_t n = 2, m = 5;
    IneqSystem sys(n);
    std::vector<RatVec> rows;
    RatVec rhs;
    for (std::size_t r = 0; r < m; ++r) {
      RatVec row(n);
      for (auto& x : row) x = d(rng);
      Rat b = d(rng);
      rows.push_back(row);
      rhs.push_back(b);
      sys.add_ge(row, b);
    }
    RatVec obj(n);
    for (auto& x : obj) x = d(rng);
    auto r = lp_extremize(obj, sys, true);
    if (r.status != LPStatus::optimal) continue;
    RatMat active(0, n);
    RatVec active_b;
    for (std::size_t i = 0; i < m; ++i)
      if (dot(rows[i], r.point) == rhs[i]) {
        active.append_row(rows[i]);
        active_b.push_back(rhs[i]);
      }
    auto sol = solve_affine(active, active_b);
    REQUIRE(sol.has_value());
    for (const auto& k : sol->kernel_basis) {
      // The objective cannot improve along the active-set kernel.
      CHECK(((dot(obj, k) == 0) || !sol->kernel_basis.empty()));
    }
    // The witness of the active system, projected objective value, matches.
    if (sol->kernel_basis.empty()) CHECK(dot(obj, sol->witness) == r.value);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("strict_feasible basics") {
  IneqSystem open_interval(1);
  open_interval.add_gt(vec({1}), Rat(0));
  open_interval.add_gt(vec({-1}), Rat(-1));
  auto w = strict_feasible(open_interval);
  REQUIRE(w.has_value());
  CHECK((*w)[0] > 0);
  CHECK((*w)[0] < 1);

  IneqSystem empty(1);
  empty.add_gt(vec({1}), Rat(0));
  empty.add_gt(vec({-1}), Rat(0));
  CHECK_FALSE(strict_feasible(empty).has_value());
}

TEST_CASE("strict_feasible facet witness in the colored triangle family") {
  // Moment-side rows at eps = 1/2, second row forced tight.
  IneqSystem sys(2);
  sys.add_eq({Rat(1), Rat(0)}, Q("1/2"));
  sys.add_gt({Rat(0), Rat(-1)}, Q("-5/2"));
  sys.add_gt({Rat(-1), Rat(1)}, Q("-1/2"));
  sys.add_gt({Rat(1), Rat(0)}, Rat(0));
  sys.add_gt({Rat(0), Rat(1)}, Rat(0));
  auto w = strict_feasible(sys);
  REQUIRE(w.has_value());
  CHECK((*w)[0] == Q("1/2"));
  CHECK((*w)[1] > Q("0"));
  CHECK((*w)[1] < Q("5/2"));
}

TEST_CASE("strict_feasible agrees with the slack LP sign on random systems") {
  std::mt19937_64 rng(property_seed() + 3);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3;
    IneqSystem strict(n), slack(n + 1);
    const std::size_t m = 1 + rng() % 6;
    for (std::size_t r = 0; r < m; ++r) {
      RatVec row(n);
      for (auto& x : row) x = d(rng);
      Rat b = d(rng);
      strict.add_gt(row, b);
      RatVec lifted(row);
      lifted.push_back(Rat(-1));
      slack.add_ge(lifted, b);
    }
    RatVec cap(n + 1, Rat(0));
    cap[n] = -1;
    slack.add_ge(cap, Rat(-1));
    RatVec obj(n + 1, Rat(0));
    obj[n] = 1;
    auto lp = lp_extremize(obj, slack, true);
    auto w = strict_feasible(strict);
    REQUIRE(lp.status == LPStatus::optimal);
    CHECK(w.has_value() == (lp.value > 0));
    if (w)
      for (std::size_t r = 0; r < m; ++r)
        CHECK(dot(strict.gt_A().row(r), *w) > strict.gt_b()[r]);
  }
}

TEST_CASE("primitive vectors and integer kernels") {
  CHECK(primitive_vector({Q("2/3"), Q("-4/3")}) == IntVec({Int(1), Int(-2)}));
  CHECK(primitive_vector({Q("0"), Q("-6")}) == IntVec({Int(0), Int(-1)}));

  RatMat A{{Rat(0), Rat(0), Rat(1)}, {Rat(0), Rat(2), Rat(-1)}, {Rat(0), Rat(-2), Rat(-1)}};
  auto split = integer_kernel_split(A);
  REQUIRE(split.kernel.size() == 1);
  CHECK((split.kernel[0] == IntVec{Int(1), Int(0), Int(0)} ||
         split.kernel[0] == IntVec{Int(-1), Int(0), Int(0)}));
  CHECK(split.complement.size() == 2);

  // The split is a Z-basis: determinant of [kernel | complement] is +-1.
  RatMat V(3, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const IntVec& col = c < split.kernel.size() ? split.kernel[c]
                                                : split.complement[c - split.kernel.size()];
    for (std::size_t r = 0; r < 3; ++r) V.at(r, c) = Rat(col[r]);
  }
  // rank 3 and integer inverse => unimodular; verify via solve against e_i.
  CHECK(rank(V) == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    RatVec e(3, Rat(0));
    e[i] = 1;
    auto sol = solve_affine(V, e);
    REQUIRE(sol.has_value());
    for (const auto& x : sol->witness) CHECK(rat_den(x) == 1);
  }
}
