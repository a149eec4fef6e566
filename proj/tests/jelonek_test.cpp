#include <gtest/gtest.h>

#include <chrono>

#include "jacmap/jelonek.hpp"
#include "support.hpp"

using namespace jacmap;
using testing_support::example_map;
using testing_support::make_map;

namespace {

Polynomial Y(const std::string& s, const SfResult& r) { return parse_poly(s, r.target_vars); }

std::string sf_of(const PolyMap& f) { return describe(sf_symbolic(f).sf); }

}  // namespace

TEST(Sf, HandComputedExamples) {
  auto start = std::chrono::steady_clock::now();
  SfResult r = sf_symbolic(make_map({"x", "y"}, {"x", "x*y"}));
  ASSERT_TRUE(r.sf.is_proper());
  EXPECT_EQ(r.sf.polynomial, Y("y1", r));
  EXPECT_EQ(format(r.leading_coefficients[1]), "y1");
  EXPECT_TRUE(sf_symbolic(make_map({"x", "y"}, {"x^2", "y"})).sf.is_empty());
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}

TEST(Sf, MoreMaps) {
  EXPECT_EQ(sf_of(make_map({"x", "y"}, {"x + 2*y", "x - y"})), "empty");
  EXPECT_EQ(sf_of(make_map({"x", "y"}, {"x*y", "y"})), "{y2 = 0}");
  EXPECT_EQ(sf_of(make_map({"x", "y"}, {"x + y", "(x + y)*y"})), "{y1 = 0}");
  EXPECT_EQ(sf_of(make_map({"x", "y"}, {"x", "y^2 + x*y"})), "empty");
  EXPECT_EQ(sf_of(make_map({"x", "y", "z"}, {"x", "x*y", "z"})), "{y1 = 0}");
  EXPECT_EQ(sf_of(make_map({"x", "y"}, {"x", "(x^2 - 1)*y"})), "{y1^2 - 1 = 0}");
  EXPECT_EQ(sf_of(example_map()), "empty");
}

TEST(Sf, NonDominantMapIsUnknown) {
  SfResult r = sf_symbolic(make_map({"x", "y"}, {"x + y", "(x + y)^2"}));
  EXPECT_TRUE(r.sf.is_unknown());
  EXPECT_FALSE(r.sf.reason.empty());
}

TEST(Sf, TargetNamesAvoidSourceNames) {
  SfResult r = sf_symbolic(make_map({"y1", "y2"}, {"y1", "y1*y2"}));
  EXPECT_EQ(r.target_vars[0], "w1");
  EXPECT_EQ(describe(r.sf), "{w1 = 0}");
}

TEST(Sf, StructureForNonsingularMaps) {
  for (const PolyMap& f : {example_map(), make_map({"x", "y"}, {"x + y^3", "y"}),
                           make_map({"x", "y", "z"}, {"x", "y + x^2", "z + y^2 + x^3"})}) {
    SfResult r = sf_symbolic(f);
    ASSERT_TRUE(r.nonsingular);
    ASSERT_FALSE(r.sf.is_unknown());
    if (r.sf.is_proper()) {
      EXPECT_FALSE(r.sf.polynomial.is_constant());
    }
    EXPECT_EQ(r.mu, 1);
  }
}

TEST(Sf, CertificateForEmptyNonsingular) {
  SfResult r = sf_symbolic(example_map());
  auto c = properness_certificate(example_map(), r);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->criterion, criteria::kNonsingularProper);
  EXPECT_EQ(c->digest().size(), 16u);
  EXPECT_FALSE(properness_certificate(make_map({"x", "y"}, {"x^2", "y"}),
                                      sf_symbolic(make_map({"x", "y"}, {"x^2", "y"})))
                   .has_value());
}

TEST(Diagnostic, FiberCountFollowsMu) {
  PolyMap f = example_map();
  SplitMix64 rng(51);
  for (int k = 0; k < 5; ++k) {
    auto y = sample_box(rng, 3);
    EXPECT_EQ(sf_sample_diagnostic(f, y, 1).verdict, SfMembership::OffSf);
  }
  PolyMap id = PolyMap::identity(Vars{"x", "y"});
  EXPECT_EQ(sf_sample_diagnostic(id, {Scalar(3), Scalar(-1)}, 1).verdict, SfMembership::OffSf);
}

TEST(Diagnostic, SingularMapsNeedExplicitOptIn) {
  PolyMap f = make_map({"x", "y"}, {"x", "x*y"});
  EXPECT_THROW(sf_sample_diagnostic(f, {Scalar(0), Scalar(1)}, 1), DomainError);
  SfDiagnostic d = sf_sample_diagnostic(f, {Scalar(0), Scalar(1)}, 1, {}, true);
  EXPECT_EQ(d.verdict, SfMembership::InSf);
  EXPECT_EQ(*d.count, 0u);
  EXPECT_FALSE(d.warning.empty());
  EXPECT_EQ(sf_sample_diagnostic(f, {Scalar(0), Scalar(0)}, 1, {}, true).verdict, SfMembership::Undetermined);
}

TEST(Probe, DetectsEscapingPreimages) {
  PolyMap f = make_map({"x", "y"}, {"x", "x*y"});
  SplitMix64 rng(52);
  EXPECT_TRUE(nonproperness_probe(f, {0.0, 1.0}, rng).nonproper);
  EXPECT_FALSE(nonproperness_probe(f, {1.0, 1.0}, rng).nonproper);
  // (x^2, y) drops its count on x = 0 but stays proper there.
  EXPECT_FALSE(nonproperness_probe(make_map({"x", "y"}, {"x^2", "y"}), {0.0, 1.0}, rng).nonproper);
}

TEST(Cylinder, Examples) {
  Vars y{"y1", "y2"};
  EXPECT_TRUE(cylinder_check(Hypersurface::proper(parse_poly("y1", y)), 2));
  EXPECT_FALSE(cylinder_check(Hypersurface::proper(parse_poly("y2", y)), 2));
  EXPECT_TRUE(cylinder_check(Hypersurface::empty(), 1));
  EXPECT_THROW(cylinder_check(Hypersurface::unknown("x"), 1), DomainError);
  EXPECT_THROW(cylinder_check(Hypersurface::proper(parse_poly("y1", y)), 3), Error);
  SfResult r = sf_symbolic(make_map({"x", "y"}, {"x", "x*y"}));
  EXPECT_TRUE(cylinder_check(r.sf, 2));
  EXPECT_FALSE(cylinder_check(r.sf, 1));
}

TEST(Cylinder, InvariantUnderScalingAndSquares) {
  Vars y{"y1", "y2", "y3"};
  for (const char* s : {"y1*y3 + 1", "y1^2 - y3", "y2"}) {
    Polynomial p = parse_poly(s, y);
    for (std::size_t k = 1; k <= 3; ++k) {
      bool base = cylinder_check(Hypersurface::proper(p), k);
      EXPECT_EQ(cylinder_check(Hypersurface::proper(p * Scalar(Rational(-7, 3))), k), base);
      EXPECT_EQ(cylinder_check(Hypersurface::proper(p * p * Scalar::i()), k), base);
    }
  }
  EXPECT_EQ(Hypersurface::proper(parse_poly("4*y1^2", y)).polynomial, parse_poly("y1", y));
}

TEST(Clearance, ExampleWithEmptySf) {
  PolyMap f = example_map();
  SfResult r = sf_symbolic(f);
  ClearanceVerdict v = hyperplane_clearance(f, r.sf, Y("y1", r));
  EXPECT_EQ(v.intersects, Intersects::No);
  ASSERT_TRUE(v.certificate.has_value());
  EXPECT_EQ(v.certificate->criterion, criteria::kHypersurfaceClearance);
  EXPECT_TRUE(v.graph_type);
  EXPECT_TRUE(v.certificate->asserted.empty());
}

TEST(Clearance, SingularMapGivesVerdictsButNoCertificate) {
  PolyMap f = make_map({"x", "y"}, {"x", "x*y"});
  SfResult r = sf_symbolic(f);
  ClearanceVerdict same = hyperplane_clearance(f, r.sf, Y("y1", r));
  EXPECT_EQ(same.intersects, Intersects::Yes);
  EXPECT_FALSE(same.certificate);
  ClearanceVerdict parallel = hyperplane_clearance(f, r.sf, Y("y1 - 1", r));
  EXPECT_EQ(parallel.intersects, Intersects::No);
  EXPECT_FALSE(parallel.certificate);
  EXPECT_FALSE(parallel.warnings.empty());
  ClearanceOptions sampling;
  sampling.mode = ClearanceMode::Sampling;
  EXPECT_THROW(hyperplane_clearance(f, r.sf, Y("y1 - 1", r), sampling), DomainError);
}

TEST(Clearance, NonGraphHypersurfaces) {
  PolyMap f = make_map({"x", "y"}, {"x", "x*y"});
  SfResult r = sf_symbolic(f);
  EXPECT_EQ(hyperplane_clearance(f, r.sf, Y("y1^2 + y2^2 - 1", r)).intersects, Intersects::Yes);
  ClearanceVerdict hyperbola = hyperplane_clearance(f, r.sf, Y("y1*y2 - 1", r));
  EXPECT_EQ(hyperbola.intersects, Intersects::No);
  EXPECT_FALSE(hyperbola.graph_type);
  EXPECT_THROW(hyperplane_clearance(f, r.sf, Y("3", r)), DomainError);
}

TEST(Clearance, AssertedBiregularityIsRecorded) {
  PolyMap f = example_map();
  SfResult r = sf_symbolic(f);
  Polynomial h = Y("y1*y2 - 1", r);
  EXPECT_FALSE(hyperplane_clearance(f, r.sf, h).certificate);
  ClearanceOptions opt;
  opt.assert_biregular = true;
  ClearanceVerdict v = hyperplane_clearance(f, r.sf, h, opt);
  ASSERT_TRUE(v.certificate);
  EXPECT_FALSE(v.certificate->asserted.empty());
}

TEST(Clearance, SymbolicAndSamplingAgree) {
  ClearanceOptions sampling;
  sampling.mode = ClearanceMode::Sampling;
  for (const PolyMap& f : {example_map(), make_map({"x", "y", "z"}, {"x", "y + x^2", "z + y^2 + x^3"})}) {
    SfResult r = sf_symbolic(f);
    for (const char* h : {"y1", "y2 - y3^2", "y3 + y1*y2"}) {
      EXPECT_EQ(hyperplane_clearance(f, r.sf, Y(h, r)).intersects,
                hyperplane_clearance(f, r.sf, Y(h, r), sampling).intersects)
          << h;
    }
  }
}

// ---- property suites -------------------------------------------------------

TEST(JelonekProperties, GenericCountOffSf) {
  for (const auto& [f, mu] : std::vector<std::pair<PolyMap, int>>{
           {make_map({"x", "y"}, {"x^2", "y"}), 2}, {make_map({"x", "y"}, {"x", "x*y"}), 1}}) {
    SfResult r = sf_symbolic(f);
    ASSERT_EQ(r.mu, mu);
    SplitMix64 rng(53);
    int tested = 0;
    while (tested < 100) {
      auto y = sample_box(rng, 2);
      if (r.sf.is_proper() && evaluate_exact(r.sf.polynomial, y).is_zero()) continue;
      ASSERT_EQ(static_cast<int>(fiber_count_exact(f, y)), mu);
      ++tested;
    }
  }
}
