#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jacmap/error.hpp"
#include "jacmap/scalar.hpp"

namespace jacmap {

// Ordered list of variable names shared by a family of polynomials.
class Vars {
 public:
  Vars() : names_(std::make_shared<const std::vector<std::string>>()) {}
  Vars(std::vector<std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j]) throw DimensionError("duplicate variable name '" + names[i] + "'");
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }
  Vars(std::initializer_list<std::string> names) : Vars(std::vector<std::string>(names)) {}

  std::size_t size() const noexcept { return names_->size(); }
  const std::string& operator[](std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const noexcept { return *names_; }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = std::find(names_->begin(), names_->end(), name);
    if (it == names_->end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_->begin());
  }
  std::size_t index_of(const std::string& name) const {
    auto idx = find(name);
    if (!idx) throw DimensionError("unknown variable '" + name + "'");
    return *idx;
  }

  friend bool operator==(const Vars& a, const Vars& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }
  friend bool operator!=(const Vars& a, const Vars& b) { return !(a == b); }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

// Graded lexicographic order, greatest first: higher total degree wins, then
// the larger exponent of the earliest declared variable.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

class Polynomial {
 public:
  using TermMap = std::map<Exponents, Scalar, GrlexGreater>;

  Polynomial() = default;
  explicit Polynomial(Vars vars) : vars_(std::move(vars)) {}

  static Polynomial constant(Vars vars, const Scalar& c) {
    Polynomial p(std::move(vars));
    p.add_term(Exponents(p.nvars(), 0), c);
    return p;
  }
  static Polynomial variable(Vars vars, std::size_t index, int power = 1) {
    if (index >= vars.size()) throw DimensionError("variable index out of range");
    Polynomial p(std::move(vars));
    Exponents e(p.nvars(), 0);
    e[index] = power;
    p.add_term(std::move(e), Scalar(1));
    return p;
  }
  static Polynomial variable(const Vars& vars, const std::string& name) {
    return variable(vars, vars.index_of(name));
  }
  static Polynomial monomial(Vars vars, Exponents e, const Scalar& c) {
    if (e.size() != vars.size()) throw DimensionError("monomial length differs from variable count");
    Polynomial p(std::move(vars));
    p.add_term(std::move(e), c);
    return p;
  }

  const Vars& vars() const noexcept { return vars_; }
  std::size_t nvars() const noexcept { return vars_.size(); }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && jacmap::total_degree(terms_.begin()->first) == 0);
  }
  Scalar constant_term() const {
    auto it = terms_.find(Exponents(nvars(), 0));
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  int total_degree() const {
    if (is_zero()) throw DomainError("degree of the zero polynomial is undefined");
    return jacmap::total_degree(terms_.begin()->first);
  }
  int degree_in(std::size_t var) const {
    if (is_zero()) throw DomainError("degree of the zero polynomial is undefined");
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
  }
  bool involves(std::size_t var) const {
    for (const auto& [e, c] : terms_)
      if (e[var] != 0) return true;
    return false;
  }
  // Indices of variables with a positive exponent in some term.
  std::vector<std::size_t> occurring_vars() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < nvars(); ++v)
      if (involves(v)) out.push_back(v);
    return out;
  }

  const Exponents& leading_monomial() const {
    if (is_zero()) throw DomainError("zero polynomial has no leading term");
    return terms_.begin()->first;
  }
  const Scalar& leading_coefficient() const {
    if (is_zero()) throw DomainError("zero polynomial has no leading term");
    return terms_.begin()->second;
  }

  void add_term(Exponents e, const Scalar& c) {
    if (e.size() != nvars()) throw DimensionError("monomial length differs from variable count");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    require_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    require_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.require_same(b);
    Polynomial r(a.vars_);
    if (a.is_zero() || b.is_zero()) return r;
    const std::size_t n = a.nvars();
    Exponents e(n);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t k = 0; k < n; ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(vars_, Scalar(1));
    Polynomial base(*this);
    while (e != 0) {
      if (e & 1U) result *= base;
      e >>= 1U;
      if (e != 0) base *= base;
    }
    return result;
  }

  void require_same(const Polynomial& o) const {
    if (vars_ != o.vars_) throw DimensionError("polynomials live in different variable contexts");
  }

 private:
  Vars vars_;
  TermMap terms_;
};

// ---- structural helpers -----------------------------------------------------

inline Polynomial differentiate(const Polynomial& p, std::size_t var) {
  if (var >= p.nvars()) throw DimensionError("unknown variable index for differentiation");
  Polynomial r(p.vars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(std::move(d), c * Scalar(e[var]));
  }
  return r;
}
inline Polynomial differentiate(const Polynomial& p, const std::string& var) {
  return differentiate(p, p.vars().index_of(var));
}

// Coefficients of p viewed as a univariate polynomial in `var`; entry k is the
// coefficient of var^k and lives in the same context (free of var).
inline std::vector<Polynomial> coefficients_in(const Polynomial& p, std::size_t var) {
  std::vector<Polynomial> out;
  for (const auto& [e, c] : p.terms()) {
    std::size_t k = static_cast<std::size_t>(e[var]);
    if (out.size() <= k) out.resize(k + 1, Polynomial(p.vars()));
    Exponents f = e;
    f[var] = 0;
    out[k].add_term(std::move(f), c);
  }
  return out;
}

inline Polynomial from_coefficients(const std::vector<Polynomial>& coeffs, const Vars& vars, std::size_t var) {
  Polynomial r(vars);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    for (const auto& [e, c] : coeffs[k].terms()) {
      Exponents f = e;
      f[var] += static_cast<int>(k);
      r.add_term(std::move(f), c);
    }
  return r;
}

inline Polynomial leading_coefficient_in(const Polynomial& p, std::size_t var) {
  if (p.is_zero()) throw DomainError("zero polynomial has no leading coefficient");
  return coefficients_in(p, var).back();
}

// Re-expresses p in another context by variable name.  Every variable that
// occurs in p must exist in `target`.
inline Polynomial change_context(const Polynomial& p, const Vars& target) {
  std::vector<std::size_t> map(p.nvars());
  std::vector<bool> used(p.nvars(), false);
  for (const auto& [e, c] : p.terms())
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v] != 0) used[v] = true;
  for (std::size_t v = 0; v < p.nvars(); ++v) {
    auto idx = target.find(p.vars()[v]);
    if (!idx) {
      if (used[v]) throw DimensionError("variable '" + p.vars()[v] + "' missing from target context");
      map[v] = target.size();
    } else {
      map[v] = *idx;
    }
  }
  Polynomial r(target);
  for (const auto& [e, c] : p.terms()) {
    Exponents f(target.size(), 0);
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v] != 0) f[map[v]] = e[v];
    r.add_term(std::move(f), c);
  }
  return r;
}

// Substitutes images[v] for variable v; all images share one context.
inline Polynomial compose(const Polynomial& p, std::span<const Polynomial> images, const Vars& target) {
  if (images.size() != p.nvars()) throw DimensionError("substitution needs one image per variable");
  for (const Polynomial& q : images)
    if (q.vars() != target) throw DimensionError("substitution images must share the target context");
  Polynomial result(target);
  if (p.is_zero()) return result;
  // powers[v][k] = images[v]^k, built lazily.
  std::vector<std::vector<Polynomial>> powers(p.nvars());
  auto power = [&](std::size_t v, int k) -> const Polynomial& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, Scalar(1)));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * images[v]);
    return cache[static_cast<std::size_t>(k)];
  };
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(target, c);
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v] != 0) term *= power(v, e[v]);
    result += term;
  }
  return result;
}

// Substitution by name.  An unassigned variable stays itself when the target
// context has it; otherwise it must not occur in p.
inline Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& assignment) {
  if (assignment.empty()) {
    if (!p.is_constant()) throw DimensionError("substitution is missing assignments");
    return p;
  }
  const Vars target = assignment.begin()->second.vars();
  std::vector<Polynomial> images;
  images.reserve(p.nvars());
  for (std::size_t v = 0; v < p.nvars(); ++v) {
    auto it = assignment.find(p.vars()[v]);
    if (it == assignment.end()) {
      if (auto same = target.find(p.vars()[v])) {
        images.push_back(Polynomial::variable(target, *same));
        continue;
      }
      if (p.involves(v)) throw DimensionError("no assignment for variable '" + p.vars()[v] + "'");
      images.emplace_back(target);
    } else {
      images.push_back(it->second);
    }
  }
  return compose(p, images, target);
}

// Exact quotient a / b; throws DomainError if b does not divide a.
inline Polynomial divide_exact(Polynomial a, const Polynomial& b) {
  a.require_same(b);
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  Polynomial q(a.vars());
  const Exponents& lb = b.leading_monomial();
  const Scalar& cb = b.leading_coefficient();
  const std::size_t n = a.nvars();
  while (!a.is_zero()) {
    const Exponents& la = a.leading_monomial();
    Exponents d(n);
    for (std::size_t k = 0; k < n; ++k) {
      d[k] = la[k] - lb[k];
      if (d[k] < 0) throw DomainError("polynomial division is not exact");
    }
    Polynomial t = Polynomial::monomial(a.vars(), d, a.leading_coefficient() / cb);
    a -= t * b;
    q += t;
  }
  return q;
}

// Scales p so its leading (grlex) coefficient is 1.
inline Polynomial monic(Polynomial p) {
  if (p.is_zero()) return p;
  Scalar inv = Scalar(1) / p.leading_coefficient();
  return p *= inv;
}

// Scales p by a rational so that all parts are coprime integers.  Keeps
// coefficient growth in check during elimination without changing the zero set.
inline Polynomial primitive_integer(Polynomial p) {
  if (p.is_zero()) return p;
  mpz_class den_lcm(1), num_gcd(0);
  for (const auto& [e, c] : p.terms()) {
    for (const Rational* q : {&c.re(), &c.im()}) {
      if (sgn(*q) == 0) continue;
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q->get_den_mpz_t());
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q->get_num_mpz_t());
    }
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  // Keep the leading real part (or imaginary part) positive.
  const Scalar& lc = p.leading_coefficient();
  if (sgn(lc.re()) < 0 || (sgn(lc.re()) == 0 && sgn(lc.im()) < 0)) scale = -scale;
  return p *= Scalar(scale);
}

// ---- evaluation -----------------------------------------------------------

namespace detail {

// Horner evaluation over the variables in declared order: the polynomial is
// treated as a polynomial in the first variable whose coefficients are
// evaluated recursively.
template <class T, class Convert>
T horner(const Polynomial::TermMap& terms, std::span<const T> point, Convert convert) {
  if (terms.empty()) return T(0);
  const std::size_t n = point.size();
  std::vector<std::pair<const Exponents*, const Scalar*>> items;
  items.reserve(terms.size());
  for (const auto& [e, c] : terms) items.emplace_back(&e, &c);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return *a.first > *b.first; });

  std::function<T(std::size_t, std::size_t, std::size_t)> rec = [&](std::size_t lo, std::size_t hi,
                                                                 std::size_t var) -> T {
    if (var == n) return convert(*items[lo].second);
    // items[lo, hi) share exponents for variables < var and are sorted
    // descending in exponent of var.
    T acc(0);
    int prev = (*items[lo].first)[var];
    std::size_t i = lo;
    while (i < hi) {
      int k = (*items[i].first)[var];
      std::size_t j = i;
      while (j < hi && (*items[j].first)[var] == k) ++j;
      for (int s = prev; s > k; --s) acc *= point[var];
      acc += rec(i, j, var + 1);
      prev = k;
      i = j;
    }
    for (int s = prev; s > 0; --s) acc *= point[var];
    return acc;
  };
  return rec(0, items.size(), 0);
}

}  // namespace detail

inline std::complex<double> evaluate(const Polynomial& p, std::span<const std::complex<double>> point) {
  if (point.size() != p.nvars()) throw DimensionError("evaluation point has wrong dimension");
  return detail::horner<std::complex<double>>(p.terms(), point, [](const Scalar& s) { return s.to_complex(); });
}

inline Scalar evaluate_exact(const Polynomial& p, std::span<const Scalar> point) {
  if (point.size() != p.nvars()) throw DimensionError("evaluation point has wrong dimension");
  return detail::horner<Scalar>(p.terms(), point, [](const Scalar& s) { return s; });
}

// Converts exact coefficients to doubles after dividing by the largest
// component, so huge resultant coefficients do not overflow.
inline std::vector<std::complex<double>> scaled_complex(const std::vector<Scalar>& coeffs) {
  Rational m = max_component_magnitude(coeffs);
  std::vector<std::complex<double>> out;
  out.reserve(coeffs.size());
  for (const Scalar& s : coeffs) {
    if (sgn(m) == 0 || s.is_zero()) {
      out.emplace_back(0.0, 0.0);
      continue;
    }
    out.emplace_back(Rational(s.re() / m).get_d(), Rational(s.im() / m).get_d());
  }
  return out;
}

// Same polynomial with all coefficients rescaled and converted to doubles.
struct FloatPolynomial {
  std::vector<Exponents> exponents;
  std::vector<std::complex<double>> coeffs;
};

inline FloatPolynomial to_float(const Polynomial& p, bool rescale) {
  FloatPolynomial out;
  std::vector<Scalar> cs;
  for (const auto& [e, c] : p.terms()) {
    out.exponents.push_back(e);
    cs.push_back(c);
  }
  if (rescale) {
    out.coeffs = scaled_complex(cs);
  } else {
    for (const Scalar& s : cs) out.coeffs.push_back(s.to_complex());
  }
  return out;
}

// ---- printing ---------------------------------------------------------------

inline std::string format_monomial(const Exponents& e, const Vars& vars) {
  std::string out;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars[v];
    if (e[v] != 1) out += "^" + std::to_string(e[v]);
  }
  return out;
}

// Joins (coefficient, monomial text) pairs into canonical "a - b + c" form.
inline std::string format_terms(const std::vector<std::pair<Scalar, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [c, mono] : terms) {
    bool negative = c.is_real() ? sgn(c.re()) < 0 : (sgn(c.re()) == 0 && sgn(c.im()) < 0);
    Scalar mag = negative ? -c : c;
    std::string body;
    if (mono.empty())
      body = mag.str();
    else if (mag.is_one())
      body = mono;
    else
      body = mag.str() + "*" + mono;
    if (first)
      out = negative ? "-" + body : body;
    else
      out += (negative ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

inline std::string format(const Polynomial& p) {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (const auto& [e, c] : p.terms()) terms.emplace_back(c, format_monomial(e, p.vars()));
  return format_terms(terms);
}

inline std::size_t hash_value(const Polynomial& p) { return std::hash<std::string>{}(format(p)); }

}  // namespace jacmap
