#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jacmap/elimination.hpp"
#include "jacmap/gcd.hpp"
#include "jacmap/numlin.hpp"
#include "jacmap/polymap.hpp"
#include "jacmap/random.hpp"

namespace jacmap {

class PositiveDimensionalFiber : public Error {
 public:
  using Error::Error;
};

class ScaleContractError : public Error {
 public:
  using Error::Error;
};

struct FiberSolution {
  std::vector<Complex> point;
  double residual = 0.0;  // |f(point) - y|_2
  bool multiple = false;  // Jacobian numerically singular at the point
};

struct SolveOptions {
  double tol = 1e-6;
  double dedup_radius = 1e-6;
  int newton_iterations = 40;
  std::size_t max_dimension = 3;
  int max_degree = 10;
};

namespace detail {

// Float copy of an exact polynomial with a fast specialization to one
// variable given values for the others.
class FloatPoly {
 public:
  explicit FloatPoly(const Polynomial& p, bool rescale) {
    FloatPolynomial fp = to_float(p, rescale);
    exps_ = std::move(fp.exponents);
    coeffs_ = std::move(fp.coeffs);
  }

  Complex operator()(std::span<const Complex> x) const {
    Complex acc(0.0);
    for (std::size_t t = 0; t < exps_.size(); ++t) {
      Complex term = coeffs_[t];
      for (std::size_t v = 0; v < x.size(); ++v)
        if (exps_[t][v] != 0) term *= ipow(x[v], exps_[t][v]);
      acc += term;
    }
    return acc;
  }

  // Coefficients (ascending) in `var` after substituting x for every other
  // variable, plus the matching absolute-value coefficients (for relative
  // residuals).
  std::vector<Complex> specialize(std::span<const Complex> x, std::size_t var, std::vector<double>* mags = nullptr) const {
    std::vector<Complex> out;
    if (mags) mags->clear();
    for (std::size_t t = 0; t < exps_.size(); ++t) {
      Complex term = coeffs_[t];
      for (std::size_t v = 0; v < x.size(); ++v)
        if (v != var && exps_[t][v] != 0) term *= ipow(x[v], exps_[t][v]);
      auto k = static_cast<std::size_t>(exps_[t][var]);
      if (out.size() <= k) {
        out.resize(k + 1, Complex(0.0));
        if (mags) mags->resize(k + 1, 0.0);
      }
      out[k] += term;
      if (mags) (*mags)[k] += std::abs(term);
    }
    return out;
  }

 private:
  std::vector<Exponents> exps_;
  std::vector<Complex> coeffs_;
};

inline int effective_degree(const std::vector<Complex>& c) {
  double m = 0.0;
  for (const Complex& z : c) m = std::max(m, std::abs(z));
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    if (std::abs(c[static_cast<std::size_t>(k)]) > 1e-12 * m) return k;
  return -1;
}

inline double relative_value(const std::vector<Complex>& c, const std::vector<double>& mags, Complex z) {
  Complex p(0.0);
  double scale = 0.0, az = std::abs(z), pw = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    p += c[k] * ipow(z, static_cast<int>(k));
    scale += mags[k] * pw;
    pw *= az;
  }
  return scale > 0.0 ? std::abs(p) / scale : std::abs(p);
}

inline bool point_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

inline double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace detail

inline void check_scale_contract(const PolyMap& f, const SolveOptions& opt) {
  if (!f.is_square()) throw DimensionError("fiber solving needs a square map");
  if (f.source_dim() > opt.max_dimension)
    throw ScaleContractError("fiber solving supports dimension <= " + std::to_string(opt.max_dimension));
  for (const Polynomial& p : f.components())
    if (!p.is_zero() && p.total_degree() > opt.max_degree)
      throw ScaleContractError("component degree exceeds " + std::to_string(opt.max_degree));
}

// All isolated points of f^{-1}(y).  Elimination by a resultant cascade over
// the exact target, univariate roots, back-substitution, Newton refinement on
// the original system, deduplication.
inline std::vector<FiberSolution> solve_fiber_exact(const PolyMap& f, const std::vector<Scalar>& y,
                                                    const SolveOptions& opt = {}) {
  check_scale_contract(f, opt);
  const std::size_t n = f.source_dim();
  if (y.size() != n) throw DimensionError("target has wrong dimension");
  std::vector<Complex> yf;
  for (const Scalar& s : y) yf.push_back(s.to_complex());

  std::vector<Polynomial> eqs;
  for (std::size_t i = 0; i < n; ++i) eqs.push_back(f[i] - Polynomial::constant(f.vars(), y[i]));

  EliminationOptions eo;
  eo.mode = EliminationMode::Resultant;
  eo.stop_at_univariate = true;
  for (std::size_t v = 0; v < n; ++v) eo.eliminable.push_back(v);
  EliminationResult er = eliminate(eqs, eo);
  if (er.inconsistent) return {};
  if (er.degenerate) throw PositiveDimensionalFiber("elimination degenerated: fiber is not isolated");

  std::vector<bool> determined(n, false);
  for (const auto& st : er.steps) determined[st.var] = true;
  std::optional<std::size_t> last;
  for (const Polynomial& p : er.remaining)
    for (std::size_t v : p.occurring_vars()) last = v;
  if (last) determined[*last] = true;
  for (std::size_t v = 0; v < n; ++v)
    if (!determined[v]) throw PositiveDimensionalFiber("variable '" + f.vars()[v] + "' is unconstrained");

  std::vector<std::vector<Complex>> partial;
  if (last) {
    Polynomial g(f.vars());
    for (const Polynomial& p : er.remaining) g = g.is_zero() ? p : poly_gcd(g, p);
    if (g.is_constant()) return {};
    std::vector<Scalar> cs;
    for (const Polynomial& c : coefficients_in(g, *last)) cs.push_back(c.constant_term());
    for (const Root& r : univariate_roots(scaled_complex(cs))) {
      std::vector<Complex> pt(n, Complex(0.0));
      pt[*last] = r.value;
      partial.push_back(std::move(pt));
    }
  } else {
    partial.emplace_back(n, Complex(0.0));
  }

  for (auto st = er.steps.rbegin(); st != er.steps.rend(); ++st) {
    std::vector<detail::FloatPoly> polys;
    for (const Polynomial& p : st->involved) polys.emplace_back(p, true);
    std::vector<std::vector<Complex>> next;
    for (const auto& pt : partial) {
      std::vector<std::vector<Complex>> cs(polys.size());
      std::vector<std::vector<double>> mags(polys.size());
      int best = -1, best_deg = 0;
      for (std::size_t i = 0; i < polys.size(); ++i) {
        cs[i] = polys[i].specialize(pt, st->var, &mags[i]);
        int d = detail::effective_degree(cs[i]);
        if (d >= 1 && (best < 0 || d < best_deg)) {
          best = static_cast<int>(i);
          best_deg = d;
        }
      }
      if (best < 0) {
        bool free = true;
        for (std::size_t i = 0; i < polys.size() && free; ++i) {
          double scale = 0.0, size = 0.0;
          for (std::size_t k = 0; k < cs[i].size(); ++k) {
            scale = std::max(scale, mags[i][k]);
            size = std::max(size, std::abs(cs[i][k]));
          }
          free = size <= 1e-10 * scale;
        }
        if (free) throw PositiveDimensionalFiber("variable '" + f.vars()[st->var] + "' is free over a solution");
        continue;
      }
      auto coeffs = cs[static_cast<std::size_t>(best)];
      coeffs.resize(static_cast<std::size_t>(best_deg) + 1);
      for (const Root& r : univariate_roots(coeffs)) {
        bool ok = true;
        for (std::size_t i = 0; i < polys.size() && ok; ++i)
          if (static_cast<int>(i) != best && detail::relative_value(cs[i], mags[i], r.value) > 1e-6) ok = false;
        if (!ok) continue;
        auto q = pt;
        q[st->var] = r.value;
        next.push_back(std::move(q));
      }
    }
    partial = std::move(next);
  }

  // Newton refinement on f(x) = y.
  std::vector<detail::FloatPoly> comps;
  std::vector<std::vector<detail::FloatPoly>> jac;
  PolyMatrix jm = jacobian_matrix(f);
  for (std::size_t i = 0; i < n; ++i) {
    comps.emplace_back(f[i], false);
    jac.emplace_back();
    for (std::size_t j = 0; j < n; ++j) jac[i].emplace_back(jm[i][j], false);
  }
  auto residual_of = [&](const std::vector<Complex>& x, Eigen::VectorXcd& r) {
    r.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) r(static_cast<Eigen::Index>(i)) = comps[i](x) - yf[i];
    return r.norm();
  };
  auto jacobian_at = [&](const std::vector<Complex>& x) {
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = jac[i][j](x);
    return a;
  };

  std::vector<FiberSolution> found;
  for (auto x : partial) {
    Eigen::VectorXcd r;
    double res = residual_of(x, r);
    if (!std::isfinite(res)) continue;
    for (int it = 0; it < opt.newton_iterations && res > 0.0; ++it) {
      Eigen::MatrixXcd a = jacobian_at(x);
      Eigen::VectorXcd step = a.fullPivLu().solve(r);
      if (!step.allFinite()) break;
      std::vector<Complex> cand = x;
      for (std::size_t i = 0; i < n; ++i) cand[i] -= step(static_cast<Eigen::Index>(i));
      Eigen::VectorXcd rc;
      double rn = residual_of(cand, rc);
      if (!(rn < res)) break;
      x = std::move(cand);
      r = std::move(rc);
      res = rn;
    }
    if (!(res < opt.tol)) continue;
    bool dup = false;
    for (FiberSolution& s : found)
      if (detail::distance(s.point, x) < opt.dedup_radius) {
        if (res < s.residual) {
          s.point = x;
          s.residual = res;
        }
        dup = true;
        break;
      }
    if (dup) continue;
    FiberSolution sol;
    sol.point = x;
    sol.residual = res;
    Eigen::MatrixXcd a = jacobian_at(x);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& s = svd.singularValues();
    sol.multiple = s(0) == 0.0 || s(s.size() - 1) <= 1e-8 * s(0);
    found.push_back(std::move(sol));
  }
  std::sort(found.begin(), found.end(),
            [](const FiberSolution& a, const FiberSolution& b) { return detail::point_less(a.point, b.point); });
  return found;
}

inline std::vector<FiberSolution> solve_fiber(const PolyMap& f, std::span<const Complex> y, const SolveOptions& opt = {}) {
  std::vector<Scalar> exact;
  for (const Complex& z : y) exact.push_back(Scalar::from_double(z));
  return solve_fiber_exact(f, exact, opt);
}

inline std::size_t fiber_count(const PolyMap& f, std::span<const Complex> y, const SolveOptions& opt = {}) {
  return solve_fiber(f, y, opt).size();
}

inline std::size_t fiber_count_exact(const PolyMap& f, const std::vector<Scalar>& y, const SolveOptions& opt = {}) {
  return solve_fiber_exact(f, y, opt).size();
}

// Product of total degrees of the components.
inline std::size_t bezout_bound(const PolyMap& f) {
  std::size_t b = 1;
  for (const Polynomial& p : f.components()) b *= p.is_zero() ? 0 : static_cast<std::size_t>(p.total_degree());
  return b;
}

struct DegreeEstimate {
  int mu = 0;
  std::map<int, int> histogram;  // fiber count -> frequency
  int samples = 0;
  int degenerate = 0;  // positive-dimensional or failed samples; histogram + degenerate = samples
  std::uint64_t seed = 0;
};

// Deterministic target for the index-th sample of a run.
inline std::vector<Scalar> degree_sample_target(std::uint64_t seed, std::size_t index, std::size_t dim) {
  SplitMix64 rng = SplitMix64::stream(seed, index);
  return sample_box(rng, dim);
}

// mu(f) as the largest finite fiber count over seeded targets in the box
// [-2,2] + [-2,2]i per coordinate.
inline DegreeEstimate geometric_degree(const PolyMap& f, int n_samples, std::uint64_t seed, const SolveOptions& opt = {}) {
  check_scale_contract(f, opt);
  if (n_samples <= 0) throw DomainError("geometric degree needs at least one sample");
  DegreeEstimate est;
  est.samples = n_samples;
  est.seed = seed;
  for (int s = 0; s < n_samples; ++s) {
    auto y = degree_sample_target(seed, static_cast<std::size_t>(s), f.source_dim());
    try {
      int c = static_cast<int>(fiber_count_exact(f, y, opt));
      ++est.histogram[c];
      est.mu = std::max(est.mu, c);
    } catch (const PositiveDimensionalFiber&) {
      ++est.degenerate;
    }
  }
  if (est.degenerate == n_samples) throw DomainError("every sampled fiber was degenerate");
  if (est.mu == 0) throw DomainError("no sampled fiber was nonempty; the map does not look dominant");
  return est;
}

}  // namespace jacmap
