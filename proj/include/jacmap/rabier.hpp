#pragma once

#include <cmath>
#include <cstdio>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "jacmap/certificate.hpp"
#include "jacmap/laurent.hpp"
#include "jacmap/numlin.hpp"
#include "jacmap/polymap.hpp"

namespace jacmap {

// 1-based indices of the coordinates with positive degree; the path leaves
// every compact set iff this is nonempty.
inline std::vector<std::size_t> divergent_coordinates(const LaurentPath& path) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < path.size(); ++i)
    if (!path.coords[i].is_zero() && path.coords[i].degree() >= 1) out.push_back(i + 1);
  return out;
}

inline bool path_diverges(const LaurentPath& path) { return !divergent_coordinates(path).empty(); }

struct ImageLimit {
  bool finite = false;
  std::size_t diverging_component = 0;  // 1-based, when not finite
  std::vector<Scalar> limit;
  // Per component: exponent of the slowest decaying term, i.e. |g_j(x(t)) -
  // limit_j| = O(t^rate); empty when the composition is constant.
  std::vector<std::optional<int>> rates;
  std::vector<LaurentPoly> compositions;

  std::optional<int> rate() const {
    std::optional<int> r;
    for (const auto& q : rates)
      if (q && (!r || *q > *r)) r = q;
    return r;
  }
};

inline ImageLimit image_limit(const PolyMap& g, const LaurentPath& path) {
  if (path.size() != g.source_dim()) throw DimensionError("path dimension differs from the source dimension");
  ImageLimit out;
  out.finite = true;
  for (std::size_t j = 0; j < g.target_dim(); ++j) {
    LaurentPoly c = laurent_substitute(g[j], path);
    out.compositions.push_back(c);
    if (!c.is_zero() && c.degree() > 0) {
      if (out.finite) out.diverging_component = j + 1;
      out.finite = false;
      continue;
    }
    out.limit.push_back(c.coefficient(0));
    std::optional<int> rate;
    for (const auto& [e, coeff] : c.terms())
      if (e < 0 && (!rate || e > *rate)) rate = e;
    out.rates.push_back(rate);
  }
  if (!out.finite) {
    out.limit.clear();
    out.rates.clear();
  }
  return out;
}

struct NuSample {
  double t = 0.0;
  double nu = 0.0;
  bool overflow = false;
};

namespace detail {

inline LaurentPoly laurent_det(const std::vector<std::vector<LaurentPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  LaurentPoly acc;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<LaurentPoly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<LaurentPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    LaurentPoly term = m[0][c] * laurent_det(minor);
    if (c % 2) acc -= term;
    else acc += term;
  }
  return acc;
}

}  // namespace detail

// Jacobian of g along the path, with each entry simplified exactly as a
// Laurent polynomial before any float evaluation.
inline std::vector<std::vector<LaurentPoly>> jacobian_along_path(const PolyMap& g, const LaurentPath& path) {
  if (path.size() != g.source_dim()) throw DimensionError("path dimension differs from the source dimension");
  PolyMatrix jac = jacobian_matrix(g);
  std::vector<std::vector<LaurentPoly>> out(jac.size());
  for (std::size_t i = 0; i < jac.size(); ++i)
    for (const Polynomial& e : jac[i]) out[i].push_back(laurent_substitute(e, path));
  return out;
}

// det(J J^*) along the path, for real t, exactly.
inline LaurentPoly gram_determinant_along_path(const std::vector<std::vector<LaurentPoly>>& j) {
  const std::size_t m = j.size();
  std::vector<std::vector<LaurentPoly>> gram(m, std::vector<LaurentPoly>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t k = 0; k < j[a].size(); ++k) gram[a][b] += j[a][k] * j[b][k].conj();
  return detail::laurent_det(gram);
}

inline ComplexMatrix evaluate_matrix(const std::vector<std::vector<LaurentPoly>>& j, double t) {
  ComplexMatrix a(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.front().size()));
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < j[r].size(); ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].evaluate({t, 0.0});
  return a;
}

inline std::vector<NuSample> nu_along_path(const PolyMap& g, const LaurentPath& path, const std::vector<double>& ts) {
  for (std::size_t k = 0; k < ts.size(); ++k)
    if (!(ts[k] > 0.0) || (k && ts[k] <= ts[k - 1])) throw DomainError("t values must be positive and increasing");
  auto jac = jacobian_along_path(g, path);
  LaurentPoly gram = gram_determinant_along_path(jac);
  std::vector<NuSample> out;
  for (double t : ts) {
    NuSample s{t, 0.0, false};
    ComplexMatrix a = evaluate_matrix(jac, t);
    const double gd = gram.evaluate_real(t);
    if (!a.allFinite()) {
      s.overflow = true;
      s.nu = std::nan("");
    } else {
      s.nu = nu_with_gram_determinant(a, gd);
    }
    out.push_back(s);
  }
  return out;
}

// t = 10, 100, ..., t_max.
inline std::vector<double> decade_grid(double t_max) {
  std::vector<double> ts;
  for (double t = 10.0; t <= t_max * (1.0 + 1e-12); t *= 10.0) ts.push_back(t);
  if (ts.empty()) throw DomainError("t_max must be at least 10");
  return ts;
}

struct WitnessOptions {
  double tol = 1e-3;
  double t_max = 1e4;
  double decrease_slack = 1e-9;
};

struct RabierWitness {
  bool accepted = false;
  std::string rejection;  // first failed clause when not accepted
  PolyMap map;
  LaurentPath path;
  std::vector<std::size_t> divergent;
  ImageLimit image;
  std::vector<NuSample> nu_samples;
  std::optional<double> decay_exponent;  // slope of log nu against log t over the last decade

  std::vector<Complex> limit() const {
    std::vector<Complex> out;
    for (const Scalar& s : image.limit) out.push_back(s.to_complex());
    return out;
  }
};

inline RabierWitness check_witness(const PolyMap& g, const LaurentPath& path, const WitnessOptions& opt = {}) {
  RabierWitness w{false, "", g, path, {}, {}, {}, std::nullopt};
  w.divergent = divergent_coordinates(path);
  if (w.divergent.empty()) {
    w.rejection = "path does not diverge";
    return w;
  }
  w.image = image_limit(g, path);
  if (!w.image.finite) {
    w.rejection = "image diverges";
    return w;
  }
  w.nu_samples = nu_along_path(g, path, decade_grid(opt.t_max));
  const auto& s = w.nu_samples;
  if (s.size() >= 2 && s.back().nu > 0.0 && s[s.size() - 2].nu > 0.0)
    w.decay_exponent = std::log10(s.back().nu / s[s.size() - 2].nu) / std::log10(s.back().t / s[s.size() - 2].t);
  for (const NuSample& x : s)
    if (x.overflow) {
      w.rejection = "nu evaluation overflow";
      return w;
    }
  for (std::size_t k = 1; k < s.size(); ++k)
    if (!(s[k].nu < s[k - 1].nu * (1.0 - opt.decrease_slack))) {
      w.rejection = "nu not strictly decreasing";
      return w;
    }
  if (!(s.back().nu < opt.tol)) {
    w.rejection = "nu does not fall below tolerance";
    return w;
  }
  w.accepted = true;
  return w;
}

// An accepted witness puts its limit into the Rabier set of g, so g cannot
// satisfy the Rabier condition.
inline bool rabier_condition_claimed(const std::vector<RabierWitness>& witnesses) {
  for (const RabierWitness& w : witnesses)
    if (w.accepted) return false;
  return true;
}

inline std::optional<Certificate> witness_certificate(const RabierWitness& w) {
  if (!w.accepted) return std::nullopt;
  Certificate c;
  c.kind = "rabier-witness";
  c.criterion = criteria::kRabierPath;
  std::string div;
  for (std::size_t k : w.divergent) div += (div.empty() ? "" : ",") + std::to_string(k);
  c.verified.push_back("path coordinates " + div + " have positive degree, so |x(t)| -> oo");
  c.verified.push_back("g(x(t)) has no positive powers of t (exact)");
  c.verified.push_back("nu strictly decreasing on the decade grid with final value below tolerance");
  c.asserted.push_back("nu -> 0 extrapolated from the sampled grid");
  std::string lim;
  for (const Scalar& s : w.image.limit) lim += (lim.empty() ? "" : ", ") + s.str();
  c.evidence = "path (" + format(w.path) + "); limit (" + lim + ")";
  for (const NuSample& s : w.nu_samples) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "; nu(%g) = %.6e", s.t, s.nu);
    c.evidence += buf;
  }
  return c;
}

}  // namespace jacmap
