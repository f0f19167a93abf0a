#include <doctest.h>

#include "cachenet/lp.hpp"
#include "cachenet/rng.hpp"

using namespace cachenet;

namespace {

LinearProgram empty_blocks(int n) {
  LinearProgram lp;
  lp.cost = Vec::Zero(n);
  lp.eq_lhs = Mat::Zero(0, n);
  lp.eq_rhs = Vec::Zero(0);
  lp.ineq_lhs = Mat::Zero(0, n);
  lp.ineq_rhs = Vec::Zero(0);
  return lp;
}

}  // namespace

TEST_CASE("simple bounded minimization") {
  // min -x0 - 2 x1 s.t. x0 + x1 <= 4, x1 <= 3.
  LinearProgram lp = empty_blocks(2);
  lp.cost = Vec{{-1.0, -2.0}};
  lp.ineq_lhs = Mat{{1.0, 1.0}, {0.0, 1.0}};
  lp.ineq_rhs = Vec{{4.0, 3.0}};
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-7.0));
  CHECK(res.x[0] == doctest::Approx(1.0));
  CHECK(res.x[1] == doctest::Approx(3.0));
}

TEST_CASE("equalities via phase one") {
  // min x0 + x1 s.t. x0 + 2 x1 = 4, x0 - x1 = 1  ->  x = (2, 1).
  LinearProgram lp = empty_blocks(2);
  lp.cost = Vec{{1.0, 1.0}};
  lp.eq_lhs = Mat{{1.0, 2.0}, {1.0, -1.0}};
  lp.eq_rhs = Vec{{4.0, 1.0}};
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == doctest::Approx(2.0));
  CHECK(res.x[1] == doctest::Approx(1.0));
}

TEST_CASE("infeasibility and unboundedness are detected") {
  LinearProgram lp = empty_blocks(1);
  lp.cost = Vec{{1.0}};
  lp.eq_lhs = Mat{{1.0}};
  lp.eq_rhs = Vec{{2.0}};
  lp.ineq_lhs = Mat{{1.0}};
  lp.ineq_rhs = Vec{{1.0}};
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);

  LinearProgram unb = empty_blocks(1);
  unb.cost = Vec{{-1.0}};
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);
}

TEST_CASE("negative right-hand sides are normalized") {
  // x0 - x1 <= -2, x0 + x1 <= 5, min x1  ->  x = (0, 2).
  LinearProgram lp = empty_blocks(2);
  lp.cost = Vec{{0.0, 1.0}};
  lp.ineq_lhs = Mat{{1.0, -1.0}, {1.0, 1.0}};
  lp.ineq_rhs = Vec{{-2.0, 5.0}};
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[1] == doctest::Approx(2.0));
  CHECK(res.x[0] == doctest::Approx(0.0));
}

TEST_CASE("degenerate ties terminate") {
  // Klee-Minty-flavored degeneracy with duplicated rows.
  LinearProgram lp = empty_blocks(3);
  lp.cost = Vec{{-100.0, -10.0, -1.0}};
  lp.ineq_lhs = Mat{{1.0, 0.0, 0.0},
                    {20.0, 1.0, 0.0},
                    {20.0, 1.0, 0.0},
                    {200.0, 20.0, 1.0}};
  lp.ineq_rhs = Vec{{1.0, 100.0, 100.0, 10000.0}};
  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-10000.0));
}

TEST_CASE("random transportation-style programs satisfy their constraints") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(0, 4));
    const int groups = 2;
    LinearProgram lp = empty_blocks(n);
    for (int j = 0; j < n; ++j) lp.cost[j] = rng.uniform(0.2, 3.0);
    lp.eq_lhs = Mat::Zero(groups, n);
    lp.eq_rhs = Vec::Ones(groups);
    for (int j = 0; j < n; ++j) lp.eq_lhs(j % groups, j) = 1.0;
    const int rows = 3;
    lp.ineq_lhs = Mat::Zero(rows, n);
    lp.ineq_rhs = Vec::Zero(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < n; ++j)
        lp.ineq_lhs(i, j) = rng.uniform01() < 0.5 ? rng.uniform(0.1, 1.0) : 0.0;
      lp.ineq_rhs[i] = rng.uniform(0.6, 2.0);
    }
    const LpResult res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) continue;  // some draws are infeasible
    CHECK((lp.eq_lhs * res.x - lp.eq_rhs).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK(((lp.ineq_lhs * res.x - lp.ineq_rhs).array() <= 1e-7).all());
    CHECK(res.x.minCoeff() >= -1e-9);

    // No grid point of the simplex-product beats the reported optimum.
    for (int probe = 0; probe < 200; ++probe) {
      Vec x = Vec::Zero(n);
      for (int g = 0; g < groups; ++g) {
        std::vector<int> members;
        for (int j = 0; j < n; ++j)
          if (lp.eq_lhs(g, j) == 1.0) members.push_back(j);
        x[members[rng.below(members.size())]] = 1.0;
      }
      if (((lp.ineq_lhs * x - lp.ineq_rhs).array() <= 1e-12).all())
        CHECK(lp.cost.dot(x) >= res.objective - 1e-9);
    }
  }
}
