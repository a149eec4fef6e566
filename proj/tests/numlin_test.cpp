#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "jacmap/numlin.hpp"
#include "jacmap/random.hpp"

using namespace jacmap;

namespace {

ComplexMatrix random_matrix(SplitMix64& rng, Eigen::Index m, Eigen::Index n) {
  ComplexMatrix a(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return a;
}

ComplexMatrix random_unitary(SplitMix64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n, n));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

// Ascending coefficients of prod (z - r_k).
std::vector<Complex> from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = next;
  }
  return c;
}

int total_multiplicity(const RootSet& rs) {
  int s = 0;
  for (const Root& r : rs) s += r.multiplicity;
  return s;
}

}  // namespace

TEST(Nu, Examples) {
  EXPECT_DOUBLE_EQ(nu(ComplexMatrix::Identity(2, 2)), 1.0);
  EXPECT_DOUBLE_EQ(nu(ComplexMatrix::Zero(2, 3)), 0.0);
  ComplexMatrix row(1, 2);
  row << Complex(1, 0), Complex(0, 2);
  EXPECT_NEAR(nu(row), std::sqrt(5.0), 1e-15);
  ComplexMatrix a = ComplexMatrix::Zero(2, 3);
  a(0, 2) = 1e-2;
  a(1, 1) = 1.0;
  EXPECT_NEAR(nu(a), 0.01, 1e-17);
  EXPECT_THROW(nu(ComplexMatrix(0, 0)), Error);
  a(0, 0) = Complex(std::nan(""), 0.0);
  EXPECT_THROW(nu(a), Error);
}

TEST(Nu, TallMatricesHaveZeroNu) { EXPECT_EQ(nu(ComplexMatrix::Identity(3, 2)), 0.0); }

TEST(Nu, GramDeterminantRecoversTinySingularValue) {
  // rows (0, 1, 0) and (-t^2, t^5, 1): nu ~ t^-3, far below |A| eps.
  const double t = 1e4;
  ComplexMatrix a(2, 3);
  a << 0.0, 1.0, 0.0, -t * t, std::pow(t, 5), 1.0;
  const double gram_det = t * t * t * t + 1.0;  // det(A A^*)
  double exact = std::sqrt(gram_det / (1.0 + t * t * t * t + std::pow(t, 10)));
  EXPECT_NEAR(nu_with_gram_determinant(a, gram_det) / exact, 1.0, 1e-9);
}

TEST(Roots, Examples) {
  RootSet r = univariate_roots({1.0, 0.0, 1.0});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(std::abs(r[0].value - Complex(0, -1)) + std::abs(r[1].value - Complex(0, 1)), 0.0, 1e-12);

  r = univariate_roots(from_roots({1.0, 1.0, -2.0}));
  ASSERT_EQ(r.size(), 2u);
  auto one = std::find_if(r.begin(), r.end(), [](const Root& x) { return std::abs(x.value - 1.0) < 1e-6; });
  ASSERT_NE(one, r.end());
  EXPECT_EQ(one->multiplicity, 2);
  EXPECT_EQ(total_multiplicity(r), 3);

  r = univariate_roots({0.0, 0.0, 1.0});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].multiplicity, 2);
  EXPECT_EQ(r[0].value, Complex(0.0));

  EXPECT_THROW(univariate_roots({}), Error);
  EXPECT_THROW(univariate_roots({3.0}), Error);
  EXPECT_THROW(univariate_roots({0.0, 0.0}), Error);
}

TEST(Roots, ResidualsReported) {
  for (const Root& r : univariate_roots({-2.0, 0.0, 1.0})) {
    EXPECT_NEAR(r.residual, std::abs(r.value * r.value - 2.0), 1e-15);
    EXPECT_LT(r.residual, 1e-12);
  }
}

// ---- property suites -------------------------------------------------------

TEST(NumlinProperties, NuMatchesGramEigenvalue) {
  SplitMix64 rng(31);
  for (int k = 0; k < 300; ++k) {
    Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(3));
    Eigen::Index n = m + static_cast<Eigen::Index>(rng.below(2));
    ComplexMatrix a = random_matrix(rng, m, n);
    double v = nu(a), lam = gram_least_eigenvalue(a);
    ASSERT_NEAR(v * v, lam, 1e-10 * std::max(1.0, lam) + 1e-14) << a;
  }
}

TEST(NumlinProperties, UnitaryInvariance) {
  SplitMix64 rng(32);
  for (int k = 0; k < 200; ++k) {
    Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(3));
    Eigen::Index n = m + static_cast<Eigen::Index>(rng.below(2));
    ComplexMatrix a = random_matrix(rng, m, n);
    ComplexMatrix u = random_unitary(rng, m), w = random_unitary(rng, n);
    ASSERT_NEAR(nu(u * a * w), nu(a), 1e-10);
  }
}

TEST(NumlinProperties, RowVectorNuIsNorm) {
  SplitMix64 rng(33);
  for (int k = 0; k < 200; ++k) {
    ComplexMatrix a = random_matrix(rng, 1, 1 + static_cast<Eigen::Index>(rng.below(4)));
    double norm = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) norm += std::norm(a(0, j));
    ASSERT_NEAR(nu(a), std::sqrt(norm), 1e-12 * std::sqrt(norm));
  }
}

TEST(NumlinProperties, GramRouteAgreesWithSvdOnGenericMatrices) {
  SplitMix64 rng(34);
  for (int k = 0; k < 200; ++k) {
    Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.below(2));
    ComplexMatrix a = random_matrix(rng, m, m + 1);
    double gd = (a * a.adjoint()).determinant().real();
    ASSERT_NEAR(nu_with_gram_determinant(a, gd), nu(a), 1e-9 * std::max(1.0, nu(a)));
  }
}

TEST(NumlinProperties, RootsOfConstructedPolynomials) {
  SplitMix64 rng(35);
  for (int k = 0; k < 300; ++k) {
    int deg = 1 + static_cast<int>(rng.below(8));
    std::vector<Complex> roots;
    for (int j = 0; j < deg; ++j) roots.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
    RootSet found = univariate_roots(from_roots(roots));
    ASSERT_EQ(total_multiplicity(found), deg);
    for (const Root& r : found) ASSERT_LT(r.relative_residual, 1e-8);
    if (deg == 8) {
      for (const Complex& want : roots) {
        double best = 1e9;
        for (const Root& r : found) best = std::min(best, std::abs(r.value - want));
        ASSERT_LT(best, 1e-8);
      }
    }
  }
}

TEST(NumlinProperties, RandomCoefficientRootResiduals) {
  SplitMix64 rng(36);
  for (int k = 0; k < 300; ++k) {
    int deg = 1 + static_cast<int>(rng.below(12));
    std::vector<Complex> c;
    for (int j = 0; j <= deg; ++j) c.emplace_back(rng.uniform(-3, 3), rng.uniform(-3, 3));
    RootSet found = univariate_roots(c);
    ASSERT_EQ(total_multiplicity(found), deg);
    for (const Root& r : found) ASSERT_LT(r.relative_residual, 1e-8);
  }
}
