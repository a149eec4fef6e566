#pragma once

#include <string>
#include <vector>

#include "jacmap/parse.hpp"
#include "jacmap/polymap.hpp"
#include "jacmap/random.hpp"

namespace testing_support {

using namespace jacmap;

inline PolyMap make_map(const std::vector<std::string>& vars, const std::vector<std::string>& comps) {
  Vars v(vars);
  std::vector<Polynomial> ps;
  for (const std::string& c : comps) ps.push_back(parse_poly(c, v));
  return PolyMap(v, ps);
}

inline const std::string kH = "z - 3*x^5*y + 2*x^7*y^2";

inline PolyMap example_map() {
  return make_map({"x", "y", "z"}, {"x + y*(" + kH + ")", "y", kH});
}

inline PolyMap example_inverse() {
  return make_map({"p", "q", "r"}, {"p - q*r", "q", "r + 3*q*(p - q*r)^5 - 2*q^2*(p - q*r)^7"});
}

// Small integer Gaussian coefficient, nonzero.
inline Scalar small_coeff(SplitMix64& rng, bool complex_allowed = true) {
  for (;;) {
    int re = static_cast<int>(rng.below(7)) - 3;
    int im = complex_allowed && rng.below(3) == 0 ? static_cast<int>(rng.below(5)) - 2 : 0;
    if (re || im) return Scalar(Rational(re), Rational(im));
  }
}

inline Polynomial random_poly(SplitMix64& rng, const Vars& vars, int max_degree, int max_terms,
                              bool complex_allowed = true) {
  Polynomial p = Polynomial::constant(vars, Scalar(0));
  int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
  for (int t = 0; t < terms; ++t) {
    Exponents e(vars.size(), 0);
    int budget = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_degree) + 1));
    for (int k = 0; k < budget; ++k) e[rng.below(vars.size())] += 1;
    p += Polynomial::monomial(vars, e, small_coeff(rng, complex_allowed));
  }
  return p;
}

inline PolyMap random_map(SplitMix64& rng, const Vars& vars, int max_degree, int max_terms) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < vars.size(); ++i) comps.push_back(random_poly(rng, vars, max_degree, max_terms));
  return PolyMap(vars, comps);
}

inline Vars vars_of_dim(std::size_t n) {
  static const std::vector<std::string> names{"x", "y", "z"};
  return Vars(std::vector<std::string>(names.begin(), names.begin() + static_cast<long>(n)));
}

}  // namespace testing_support
