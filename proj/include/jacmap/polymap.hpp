#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jacmap/error.hpp"
#include "jacmap/polynomial.hpp"

namespace jacmap {

// g = (g_1, ..., g_m) : C^n -> C^m with every component over the same source
// variables.
class PolyMap {
 public:
  PolyMap(Vars vars, std::vector<Polynomial> components)
      : vars_(std::move(vars)), components_(std::move(components)) {
    if (vars_.size() == 0) throw DimensionError("a map needs at least one source variable");
    if (components_.empty()) throw DimensionError("a map needs at least one component");
    for (const Polynomial& p : components_)
      if (p.vars() != vars_) throw DimensionError("map component uses a different variable context");
  }

  static PolyMap identity(const Vars& vars) {
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < vars.size(); ++i) comps.push_back(Polynomial::variable(vars, i));
    return PolyMap(vars, std::move(comps));
  }

  const Vars& vars() const noexcept { return vars_; }
  std::size_t source_dim() const noexcept { return vars_.size(); }
  std::size_t target_dim() const noexcept { return components_.size(); }
  bool is_square() const noexcept { return source_dim() == target_dim(); }
  const std::vector<Polynomial>& components() const noexcept { return components_; }
  const Polynomial& operator[](std::size_t i) const { return components_.at(i); }

  std::vector<std::complex<double>> evaluate(std::span<const std::complex<double>> x) const {
    std::vector<std::complex<double>> out;
    out.reserve(components_.size());
    for (const Polynomial& p : components_) out.push_back(jacmap::evaluate(p, x));
    return out;
  }

  friend bool operator==(const PolyMap& a, const PolyMap& b) {
    return a.vars_ == b.vars_ && a.components_ == b.components_;
  }

 private:
  Vars vars_;
  std::vector<Polynomial> components_;
};

using PolyMatrix = std::vector<std::vector<Polynomial>>;

inline PolyMatrix jacobian_matrix(const PolyMap& f) {
  PolyMatrix jac(f.target_dim());
  for (std::size_t i = 0; i < f.target_dim(); ++i)
    for (std::size_t j = 0; j < f.source_dim(); ++j) jac[i].push_back(differentiate(f[i], j));
  return jac;
}

// Fraction-free Bareiss elimination.  Every intermediate division is exact.
inline Polynomial bareiss_determinant(PolyMatrix m, const Vars& vars) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial::constant(vars, Scalar(1));
  for (const auto& row : m)
    if (row.size() != n) throw DimensionError("determinant of a non-square matrix");
  bool negate = false;
  Polynomial prev = Polynomial::constant(vars, Scalar(1));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return Polynomial(vars);
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Polynomial num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = prev.is_constant() ? num * (Scalar(1) / prev.constant_term()) : divide_exact(std::move(num), prev);
      }
      m[i][k] = Polynomial(vars);
    }
    prev = m[k][k];
  }
  Polynomial det = m[n - 1][n - 1];
  return negate ? -det : det;
}

inline Polynomial jacobian_det(const PolyMap& f) {
  if (!f.is_square()) throw DimensionError("Jacobian determinant needs a square map");
  return bareiss_determinant(jacobian_matrix(f), f.vars());
}

struct NonsingularVerdict {
  bool nonsingular = false;
  std::optional<Scalar> constant;  // set iff nonsingular
  Polynomial determinant;
};

inline NonsingularVerdict is_nonsingular(const PolyMap& f) {
  NonsingularVerdict v;
  v.determinant = jacobian_det(f);
  if (v.determinant.is_constant() && !v.determinant.is_zero()) {
    v.nonsingular = true;
    v.constant = v.determinant.constant_term();
  }
  return v;
}

// F_k^ : the map with the k-th component (1-based) removed.
inline PolyMap drop_component(const PolyMap& f, std::size_t k) {
  if (k < 1 || k > f.target_dim()) throw DimensionError("component index out of range");
  if (f.target_dim() == 1) throw DimensionError("cannot drop the only component");
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < f.target_dim(); ++i)
    if (i + 1 != k) comps.push_back(f[i]);
  return PolyMap(f.vars(), std::move(comps));
}

// Inverse of drop_component: `component` becomes the k-th (1-based) entry.
inline PolyMap insert_component(const PolyMap& f, std::size_t k, const Polynomial& component) {
  if (k < 1 || k > f.target_dim() + 1) throw DimensionError("component index out of range");
  std::vector<Polynomial> comps = f.components();
  comps.insert(comps.begin() + static_cast<std::ptrdiff_t>(k - 1), component);
  return PolyMap(f.vars(), std::move(comps));
}

// Keeps the listed components (1-based, in the given order).
inline PolyMap select_components(const PolyMap& f, const std::vector<std::size_t>& ks) {
  std::vector<Polynomial> comps;
  for (std::size_t k : ks) {
    if (k < 1 || k > f.target_dim()) throw DimensionError("component index out of range");
    comps.push_back(f[k - 1]);
  }
  return PolyMap(f.vars(), std::move(comps));
}

// f o g.  The result lives in g's source variables.
inline PolyMap compose_maps(const PolyMap& f, const PolyMap& g) {
  if (g.target_dim() != f.source_dim()) throw DimensionError("composition dimension mismatch");
  std::vector<Polynomial> comps;
  for (const Polynomial& p : f.components()) comps.push_back(compose(p, g.components(), g.vars()));
  return PolyMap(g.vars(), std::move(comps));
}

inline bool is_identity(const PolyMap& f) {
  return f.is_square() && f == PolyMap::identity(f.vars());
}

// True iff f o g and g o f are both the identity, by exact expansion.
inline bool verify_inverse(const PolyMap& f, const PolyMap& g) {
  if (!f.is_square() || !g.is_square() || f.source_dim() != g.source_dim())
    throw DimensionError("inverse verification needs square maps of equal dimension");
  return is_identity(compose_maps(f, g)) && is_identity(compose_maps(g, f));
}

}  // namespace jacmap
