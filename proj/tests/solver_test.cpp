#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>

#include "jacmap/elimination.hpp"
#include "jacmap/gcd.hpp"
#include "jacmap/solver.hpp"
#include "support.hpp"

using namespace jacmap;
using testing_support::example_inverse;
using testing_support::example_map;
using testing_support::make_map;

namespace {

std::vector<Complex> complex_point(const std::vector<Scalar>& y) {
  std::vector<Complex> out;
  for (const Scalar& s : y) out.push_back(s.to_complex());
  return out;
}

double max_rel_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double scale = 1.0, d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    scale = std::max(scale, std::abs(b[k]));
    d = std::max(d, std::abs(a[k] - b[k]));
  }
  return d / scale;
}

}  // namespace

TEST(Resultant, AgreesWithRootProduct) {
  Vars v{"x", "a"};
  // Res_x((x - 1)(x - 2), x - a) = (1 - a)(2 - a) up to the sign convention.
  Polynomial r = resultant(parse_poly("(x - 1)*(x - 2)", v), parse_poly("x - a", v), 0);
  Polynomial want = parse_poly("(1 - a)*(2 - a)", v);
  EXPECT_TRUE(r == want || r == -want) << format(r);
  // Common root gives zero.
  EXPECT_TRUE(resultant(parse_poly("x^2 - 1", v), parse_poly("x - 1", v), 0).is_zero());
}

TEST(Resultant, MatchesSylvesterDeterminant) {
  Vars v{"x", "y"};
  SplitMix64 rng(41);
  for (int k = 0; k < 50; ++k) {
    Polynomial a = testing_support::random_poly(rng, v, 3, 4) + parse_poly("x^2", v);
    Polynomial b = testing_support::random_poly(rng, v, 3, 4) + parse_poly("x^3", v);
    if (a.is_zero() || b.is_zero() || a.degree_in(0) < 1 || b.degree_in(0) < 1) continue;
    Polynomial r = resultant(a, b, 0);
    Polynomial s = bareiss_determinant(sylvester_matrix(a, b, 0), v);
    ASSERT_TRUE(r == s || r == -s);
  }
}

TEST(Gcd, BasicFacts) {
  Vars v{"x", "y"};
  Polynomial g = poly_gcd(parse_poly("(x + y)^2*(x - 1)", v), parse_poly("(x + y)*(y + 3)", v));
  EXPECT_EQ(g, monic(parse_poly("x + y", v)));
  EXPECT_EQ(squarefree_part(parse_poly("x^3*(y - 1)^2", v)), monic(parse_poly("x*(y - 1)", v)));
  auto basis = coprime_basis({parse_poly("x*y", v), parse_poly("x^2", v)});
  ASSERT_EQ(basis.size(), 2u);
}

TEST(Elimination, TriangularSystem) {
  Vars v{"x", "y"};
  EliminationOptions opt;
  opt.eliminable = {0};
  auto r = eliminate({parse_poly("x - y^2", v), parse_poly("x + y - 2", v)}, opt);
  ASSERT_FALSE(r.degenerate);
  ASSERT_EQ(r.remaining.size(), 1u);
  EXPECT_FALSE(r.remaining[0].involves(0));
  // y^2 + y - 2
  EXPECT_EQ(monic(r.remaining[0]), parse_poly("y^2 + y - 2", v));
}

TEST(Solve, LinearSystem) {
  PolyMap f = make_map({"x", "y"}, {"x + 2*y", "3*x - y"});
  std::vector<Complex> y{1.0, 2.0};
  auto sols = solve_fiber(f, y);
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_NEAR(std::abs(sols[0].point[0] - 5.0 / 7.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(sols[0].point[1] - 1.0 / 7.0), 0.0, 1e-12);
}

TEST(Solve, SquareMap) {
  auto sols = solve_fiber_exact(make_map({"x", "y"}, {"x^2", "y"}), {Scalar(4), Scalar(5)});
  ASSERT_EQ(sols.size(), 2u);
  EXPECT_NEAR(std::abs(sols[0].point[0] - (-2.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(sols[1].point[0] - 2.0), 0.0, 1e-12);
  for (const auto& s : sols) {
    EXPECT_NEAR(std::abs(s.point[1] - 5.0), 0.0, 1e-12);
    EXPECT_FALSE(s.multiple);
  }
}

TEST(Solve, DoubleRootFlagged) {
  auto sols = solve_fiber_exact(make_map({"x", "y"}, {"x^2", "y"}), {Scalar(0), Scalar(1)});
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_TRUE(sols[0].multiple);
}

TEST(Solve, FiberCounts) {
  PolyMap f = make_map({"x", "y"}, {"x", "x*y"});
  EXPECT_EQ(fiber_count_exact(f, {Scalar(3), Scalar(6)}), 1u);
  auto sols = solve_fiber_exact(f, {Scalar(3), Scalar(6)});
  EXPECT_NEAR(std::abs(sols[0].point[1] - 2.0), 0.0, 1e-12);
  EXPECT_EQ(fiber_count_exact(f, {Scalar(0), Scalar(1)}), 0u);
  EXPECT_EQ(fiber_count_exact(make_map({"x", "y"}, {"x^2", "y"}), {Scalar(Rational(1, 3)), Scalar(2)}), 2u);
}

TEST(Solve, PositiveDimensionalFiber) {
  PolyMap f = make_map({"x", "y"}, {"x", "x*y"});
  EXPECT_THROW(solve_fiber_exact(f, {Scalar(0), Scalar(0)}), PositiveDimensionalFiber);
  EXPECT_THROW(solve_fiber_exact(make_map({"x", "y"}, {"x + y", "x + y"}), {Scalar(1), Scalar(1)}),
               PositiveDimensionalFiber);
}

TEST(Solve, ScaleContract) {
  EXPECT_THROW(solve_fiber_exact(make_map({"x"}, {"x^11"}), {Scalar(1)}), ScaleContractError);
  EXPECT_THROW(solve_fiber_exact(make_map({"a", "b", "c", "d"}, {"a", "b", "c", "d"}),
                                 {Scalar(1), Scalar(1), Scalar(1), Scalar(1)}),
               ScaleContractError);
  EXPECT_THROW(solve_fiber_exact(make_map({"x", "y"}, {"x"}), {Scalar(1)}), Error);
}

TEST(Solve, ExampleMatchesExplicitInverse) {
  PolyMap f = example_map(), g = example_inverse();
  for (std::size_t k = 0; k < 20; ++k) {
    std::vector<Scalar> y = degree_sample_target(5, k, 3);
    auto sols = solve_fiber_exact(f, y);
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_LT(max_rel_distance(sols[0].point, g.evaluate(complex_point(y))), 1e-8);
    EXPECT_LT(sols[0].residual, 1e-6);
  }
}

TEST(Degree, Examples) {
  auto start = std::chrono::steady_clock::now();
  DegreeEstimate d = geometric_degree(example_map(), 50, 0);
  EXPECT_EQ(d.mu, 1);
  EXPECT_EQ(d.histogram, (std::map<int, int>{{1, 50}}));
  EXPECT_EQ(d.samples, 50);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30.0);
  EXPECT_EQ(geometric_degree(make_map({"x", "y"}, {"x^2", "y"}), 50, 0).mu, 2);
  EXPECT_EQ(geometric_degree(make_map({"x", "y"}, {"x", "x*y"}), 50, 0).mu, 1);
  EXPECT_EQ(geometric_degree(make_map({"x", "y"}, {"x^2*y + y^3 - x", "x*y - 1"}), 20, 0).mu, 4);
}

TEST(Degree, NonDominantMapRejected) {
  EXPECT_THROW(geometric_degree(make_map({"x", "y"}, {"x + y", "(x + y)^2"}), 5, 0), Error);
}

TEST(Degree, Deterministic) {
  PolyMap f = make_map({"x", "y"}, {"x^2 + y", "y^3 - x"});
  DegreeEstimate a = geometric_degree(f, 30, 77), b = geometric_degree(f, 30, 77);
  EXPECT_EQ(a.histogram, b.histogram);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.seed, 77u);
  EXPECT_EQ(degree_sample_target(77, 3, 2)[0].str(), degree_sample_target(77, 3, 2)[0].str());
}

// ---- property suites -------------------------------------------------------

TEST(SolverProperties, BezoutBoundAndResiduals) {
  SplitMix64 rng(42);
  int checked = 0;
  for (int k = 0; k < 260; ++k) {
    std::size_t n = 1 + rng.below(3);
    Vars v = testing_support::vars_of_dim(n);
    PolyMap f = testing_support::random_map(rng, v, n == 3 ? 2 : 3, 3);
    std::vector<Scalar> y;
    for (std::size_t j = 0; j < n; ++j) y.push_back(Scalar(static_cast<int>(rng.below(5)) - 2));
    try {
      auto sols = solve_fiber_exact(f, y);
      ASSERT_LE(sols.size(), bezout_bound(f)) << format(f[0]);
      for (const auto& s : sols) ASSERT_LT(s.residual, 1e-6);
      ++checked;
    } catch (const PositiveDimensionalFiber&) {
    }
  }
  EXPECT_GE(checked, 200);
}

TEST(SolverProperties, NewtonPointsAreAllDistinct) {
  SplitMix64 rng(43);
  for (int k = 0; k < 200; ++k) {
    Vars v = testing_support::vars_of_dim(2);
    PolyMap f = testing_support::random_map(rng, v, 3, 3);
    std::vector<Scalar> y{Scalar(static_cast<int>(rng.below(3))), Scalar(1)};
    try {
      auto sols = solve_fiber_exact(f, y);
      for (std::size_t a = 0; a < sols.size(); ++a)
        for (std::size_t b = a + 1; b < sols.size(); ++b)
          ASSERT_GT(detail::distance(sols[a].point, sols[b].point), 1e-6);
    } catch (const PositiveDimensionalFiber&) {
    }
  }
}
