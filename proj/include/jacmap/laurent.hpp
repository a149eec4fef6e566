#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jacmap/error.hpp"
#include "jacmap/ipow.hpp"
#include "jacmap/polynomial.hpp"
#include "jacmap/scalar.hpp"

namespace jacmap {

// Univariate Laurent polynomial in the path parameter t.
class LaurentPoly {
 public:
  using TermMap = std::map<int, Scalar>;

  LaurentPoly() = default;
  static LaurentPoly constant(const Scalar& c) {
    LaurentPoly p;
    p.add_term(0, c);
    return p;
  }
  static LaurentPoly monomial(int exponent, const Scalar& c = Scalar(1)) {
    LaurentPoly p;
    p.add_term(exponent, c);
    return p;
  }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }

  int degree() const {
    if (is_zero()) throw DomainError("degree of the zero Laurent polynomial is undefined");
    return terms_.rbegin()->first;
  }
  int order() const {
    if (is_zero()) throw DomainError("order of the zero Laurent polynomial is undefined");
    return terms_.begin()->first;
  }
  Scalar coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(int exponent, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  LaurentPoly operator-() const {
    LaurentPoly r(*this);
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
  }
  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add_term(ka + kb, ca * cb);
    return r;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  // Negative powers are allowed only for single-term Laurent polynomials,
  // which are exactly the units of the ring.
  LaurentPoly pow(int e) const {
    if (e < 0) {
      if (!is_monomial()) throw DomainError("only single-term Laurent polynomials are invertible");
      auto [k, c] = *terms_.begin();
      return monomial(k * e, (Scalar(1) / c).pow(static_cast<unsigned>(-e)));
    }
    LaurentPoly result = constant(Scalar(1)), base(*this);
    auto u = static_cast<unsigned>(e);
    while (u != 0) {
      if (u & 1U) result *= base;
      u >>= 1U;
      if (u != 0) base *= base;
    }
    return result;
  }

  LaurentPoly conj() const {
    LaurentPoly r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.conj());
    return r;
  }

  std::complex<double> evaluate(std::complex<double> t) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [k, c] : terms_) acc += c.to_complex() * ipow(t, k);
    return acc;
  }
  double evaluate_real(double t) const {
    return evaluate(std::complex<double>(t, 0.0)).real();
  }

 private:
  TermMap terms_;
};

inline std::string format(const LaurentPoly& p, const std::string& var = "t") {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    std::string mono;
    if (it->first == 1)
      mono = var;
    else if (it->first != 0)
      mono = var + "^" + std::to_string(it->first);
    terms.emplace_back(it->second, mono);
  }
  return format_terms(terms);
}

// Curve t -> (x_1(t), ..., x_n(t)) with Laurent-polynomial coordinates.
struct LaurentPath {
  std::vector<LaurentPoly> coords;

  std::size_t size() const noexcept { return coords.size(); }
  std::vector<std::complex<double>> at(double t) const {
    std::vector<std::complex<double>> out;
    out.reserve(coords.size());
    for (const LaurentPoly& c : coords) out.push_back(c.evaluate({t, 0.0}));
    return out;
  }
};

inline std::string format(const LaurentPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.coords.size(); ++i) {
    if (i) out += ", ";
    out += format(path.coords[i]);
  }
  return out;
}

// p(x(t)) as an exact Laurent polynomial.
inline LaurentPoly laurent_substitute(const Polynomial& p, const LaurentPath& path) {
  if (path.size() != p.nvars()) throw DimensionError("path dimension differs from variable count");
  std::vector<std::vector<LaurentPoly>> powers(p.nvars());
  auto power = [&](std::size_t v, int k) -> const LaurentPoly& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(LaurentPoly::constant(Scalar(1)));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * path.coords[v]);
    return cache[static_cast<std::size_t>(k)];
  };
  LaurentPoly result;
  for (const auto& [e, c] : p.terms()) {
    LaurentPoly term = LaurentPoly::constant(c);
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v] != 0) term *= power(v, e[v]);
    result += term;
  }
  return result;
}

}  // namespace jacmap
