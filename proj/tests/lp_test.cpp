#include <gtest/gtest.h>

#include "martlat/error.hpp"
#include "martlat/lp.hpp"
#include "oracles.hpp"

using namespace martlat;

namespace {

LinearConstraint row(std::vector<Rational> c, Rational rhs) { return {std::move(c), std::move(rhs)}; }

// random bounded LP: box constraints plus random cuts, random objective
LpProblem random_lp(oracle::Gen& g, std::size_t n) {
  LpProblem p;
  p.num_vars = n;
  p.objective = g.vec(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> lo(n), hi(n);
    lo[i] = 1;
    hi[i] = -1;
    p.geq_constraints.push_back(row(lo, g.rational(-4, 0)));
    p.geq_constraints.push_back(row(hi, -g.rational(1, 5)));
  }
  for (long k = g.integer(0, 3); k > 0; --k) p.geq_constraints.push_back(row(g.vec(n), g.rational(-3, 1)));
  if (g.integer(0, 2) == 0) p.eq_constraints.push_back(row(g.vec(n), g.rational(-1, 1)));
  return p;
}

}  // namespace

TEST(Lp, SingleBound) {
  LpProblem p{1, {1}, {}, {row({1}, 3)}};
  auto r = solve_lp_exact(p);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.value, Rational(3));
  EXPECT_EQ(r.witness, std::vector<Rational>{3});
}

TEST(Lp, FiveHalves) {
  LpProblem p{2, {1, 1}, {}, {row({1, 0}, 1), row({0, 1}, 1), row({1, 1}, Rational(5, 2))}};
  auto r = solve_lp_exact(p);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.value, Rational(5, 2));
  EXPECT_TRUE(lp_satisfies(p, r.witness));
  EXPECT_EQ(oracle::vertex_minimum(p), Rational(5, 2));
}

TEST(Lp, UnboundedAndInfeasible) {
  EXPECT_EQ(solve_lp_exact(LpProblem{1, {-1}, {}, {row({1}, 0)}}).status, LpStatus::Unbounded);
  LpProblem bad{2, {0, 0}, {row({1, 1}, 1)}, {row({1, 0}, 1), row({0, 1}, 1)}};
  EXPECT_EQ(solve_lp_exact(bad).status, LpStatus::Infeasible);
  LpSolver s(bad);
  EXPECT_FALSE(s.feasible());
}

TEST(Lp, FreeVariablesAndEqualities) {
  // minimize x + 2y with x - y = 1, y >= -3  ->  x = -2, y = -3
  LpProblem p{2, {1, 2}, {row({1, -1}, 1)}, {row({0, 1}, -3)}};
  auto r = solve_lp_exact(p);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.value, Rational(-8));
  EXPECT_EQ(r.witness, (std::vector<Rational>{-2, -3}));
}

TEST(Lp, DegenerateVertexDoesNotCycle) {
  // many constraints tight at the origin
  LpProblem p{3, {-1, -1, -1}, {}, {}};
  p.geq_constraints = {row({1, 0, 0}, 0),  row({0, 1, 0}, 0),  row({0, 0, 1}, 0), row({-1, -1, 0}, 0),
                       row({-1, 0, -1}, 0), row({0, -1, -1}, 0), row({-1, -1, -1}, -3), row({-1, 1, 0}, -1)};
  auto r = solve_lp_exact(p);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.value, Rational(0));
}

TEST(Lp, MalformedRowsRejected) {
  LpProblem p{2, {1, 1}, {}, {row({1}, 0)}};
  EXPECT_THROW(LpSolver{p}, PreconditionError);
  LpProblem q{2, {1}, {}, {}};
  EXPECT_THROW(solve_lp_exact(q), PreconditionError);
}

TEST(Lp, VertexEnumerationOracleProperty) {
  oracle::Gen g(41);
  int optimal = 0;
  for (int t = 0; t < 250; ++t) {
    LpProblem p = random_lp(g, static_cast<std::size_t>(g.integer(1, 3)));
    auto r = solve_lp_exact(p);
    auto v = oracle::vertex_minimum(p);
    if (!v) {
      EXPECT_EQ(r.status, LpStatus::Infeasible) << p.dump();
      continue;
    }
    ASSERT_EQ(r.status, LpStatus::Optimal) << p.dump();
    ++optimal;
    EXPECT_EQ(r.value, *v) << p.dump();
    EXPECT_TRUE(lp_satisfies(p, r.witness));
    Rational attained(0);
    for (std::size_t i = 0; i < p.num_vars; ++i) attained += p.objective[i] * r.witness[i];
    EXPECT_EQ(attained, r.value);
  }
  EXPECT_GT(optimal, 100);
}

TEST(Lp, SolverReuseMatchesFreshSolve) {
  oracle::Gen g(42);
  for (int t = 0; t < 60; ++t) {
    LpProblem p = random_lp(g, 3);
    LpSolver s(p);
    for (int k = 0; k < 4; ++k) {
      LpProblem q = p;
      q.objective = g.vec(3);
      auto fresh = solve_lp_exact(q);
      auto reused = s.minimize(q.objective);
      EXPECT_EQ(fresh.status, reused.status);
      if (fresh.status == LpStatus::Optimal) {
        EXPECT_EQ(fresh.value, reused.value);
      }
    }
  }
}

TEST(Lp, Deterministic) {
  oracle::Gen g(43);
  for (int t = 0; t < 50; ++t) {
    LpProblem p = random_lp(g, 3);
    EXPECT_EQ(solve_lp_exact(p), solve_lp_exact(p));
  }
}

TEST(Lp, DumpFormat) {
  LpProblem p{2, {1, Rational(1, 2)}, {row({1, -1}, 0)}, {row({2, 0}, Rational(-3, 4))}};
  const std::string d = p.dump();
  EXPECT_NE(d.find("1/2"), std::string::npos);
  EXPECT_NE(d.find("-3/4"), std::string::npos);
  EXPECT_EQ(std::count(d.begin(), d.end(), '\n'), 4);
}
