#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "jacmap/gcd.hpp"
#include "jacmap/polymap.hpp"
#include "jacmap/polynomial.hpp"

namespace jacmap {

inline PolyMatrix sylvester_matrix(const Polynomial& a, const Polynomial& b, std::size_t var) {
  auto ca = coefficients_in(a, var), cb = coefficients_in(b, var);
  const std::size_t da = ca.size() - 1, db = cb.size() - 1, n = da + db;
  PolyMatrix m(n, std::vector<Polynomial>(n, Polynomial(a.vars())));
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t k = 0; k <= da; ++k) m[i][i + k] = ca[da - k];
  for (std::size_t j = 0; j < da; ++j)
    for (std::size_t k = 0; k <= db; ++k) m[db + j][j + k] = cb[db - k];
  return m;
}

// Res_var(a, b) = lc(a)^deg(b) prod_{a(r)=0} b(r), i.e. the Sylvester
// determinant with a's rows first.  Degree-one operands use the closed form.
inline Polynomial resultant(const Polynomial& a, const Polynomial& b, std::size_t var) {
  a.require_same(b);
  const Vars& vars = a.vars();
  if (a.is_zero() || b.is_zero()) return Polynomial(vars);
  const int da = a.degree_in(var), db = b.degree_in(var);
  if (da == 0) return a.pow(static_cast<unsigned>(db));
  if (db == 0) return b.pow(static_cast<unsigned>(da));
  auto linear_form = [&](const Polynomial& lin, const Polynomial& other, int d_other) {
    auto cl = coefficients_in(lin, var);
    auto co = coefficients_in(other, var);
    Polynomial minus_a0 = -cl[0];
    Polynomial acc(vars);
    // Horner in (-a0) with a1 weights: sum_k co[k] (-a0)^k a1^(d-k).
    std::vector<Polynomial> a1pow{Polynomial::constant(vars, Scalar(1))};
    for (int k = 1; k <= d_other; ++k) a1pow.push_back(a1pow.back() * cl[1]);
    Polynomial mpow = Polynomial::constant(vars, Scalar(1));
    for (int k = 0; k <= d_other; ++k) {
      if (!co[static_cast<std::size_t>(k)].is_zero())
        acc += co[static_cast<std::size_t>(k)] * mpow * a1pow[static_cast<std::size_t>(d_other - k)];
      if (k < d_other) mpow *= minus_a0;
    }
    return acc;
  };
  if (da == 1) return linear_form(a, b, db);
  if (db == 1) {
    Polynomial r = linear_form(b, a, da);
    return (da % 2 == 1) ? -r : r;
  }
  return bareiss_determinant(sylvester_matrix(a, b, var), vars);
}

// Record of one elimination step: `var` was removed using `involved`, the
// equations that contained it at that point.
struct EliminationStep {
  std::size_t var;
  std::vector<Polynomial> involved;
};

struct EliminationResult {
  bool inconsistent = false;  // a nonzero constant was derived
  bool degenerate = false;    // every pivot gave a vanishing resultant
  std::vector<EliminationStep> steps;
  std::vector<Polynomial> remaining;
};

enum class EliminationMode {
  // Sylvester resultants; the zero set of the system is preserved under
  // projection.  Used for fibers f(x) = y with numeric y.
  Resultant,
  // Remainder sequences inside the prime ideal (y_j - f_j(x)).  Factors that
  // are not in the ideal may be divided out; membership is decided by
  // substituting y = f(x).
  GraphIdeal,
};

struct EliminationOptions {
  EliminationMode mode = EliminationMode::Resultant;
  std::vector<std::size_t> eliminable;        // variables that may be removed
  std::vector<bool> is_parameter;             // GraphIdeal: target variables
  std::function<bool(const Polynomial&)> in_ideal;  // GraphIdeal membership
  bool stop_at_univariate = false;            // leave the last variable in place
};

namespace detail {

struct PivotKey {
  int degree;
  int lc_nonconstant;
  int total;
  std::size_t terms;
  std::size_t index;
  auto tie() const { return std::tie(degree, lc_nonconstant, total, terms, index); }
  bool operator<(const PivotKey& o) const { return tie() < o.tie(); }
};

inline PivotKey pivot_key(const Polynomial& p, std::size_t var, std::size_t index) {
  return {p.degree_in(var), leading_coefficient_in(p, var).is_constant() ? 0 : 1, p.total_degree(), p.term_count(),
          index};
}

// gcd of the coefficients of p grouped by the exponents of non-parameter
// variables; a polynomial in the parameters only.
inline Polynomial parameter_content(const Polynomial& p, const std::vector<bool>& is_param) {
  std::map<Exponents, Polynomial> groups;
  for (const auto& [e, c] : p.terms()) {
    Exponents key = e, rest(e.size(), 0);
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (is_param[v]) {
        key[v] = 0;
        rest[v] = e[v];
      }
    }
    auto [it, ins] = groups.try_emplace(key, Polynomial(p.vars()));
    it->second.add_term(rest, c);
  }
  Polynomial g(p.vars());
  for (const auto& [k, c] : groups) {
    g = g.is_zero() ? monic(c) : poly_gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

class Eliminator {
 public:
  explicit Eliminator(const EliminationOptions& opt) : opt_(opt) {}

  // Normalizes an element of the ideal; GraphIdeal mode strips factors that
  // are provably outside the ideal.
  Polynomial clean(Polynomial p, std::optional<std::size_t> var) const {
    p = primitive_integer(std::move(p));
    if (opt_.mode != EliminationMode::GraphIdeal || p.is_constant()) return p;
    Polynomial pc = parameter_content(p, opt_.is_parameter);
    if (!pc.is_constant()) p = primitive_integer(divide_exact(p, pc));
    if (var && p.involves(*var)) {
      Polynomial c = content_in(p, *var);
      if (!c.is_constant()) {
        if (opt_.in_ideal && opt_.in_ideal(c)) return clean(c, std::nullopt);
        p = primitive_integer(divide_exact(p, c));
      }
    }
    return p;
  }

  // Eliminates var from the pair; empty result means the pair degenerates.
  std::optional<Polynomial> combine(const Polynomial& pivot, const Polynomial& other, std::size_t var) const {
    if (opt_.mode == EliminationMode::Resultant) {
      Polynomial r = resultant(pivot, other, var);
      if (r.is_zero()) return std::nullopt;
      return clean(std::move(r), std::nullopt);
    }
    Polynomial a = other, b = pivot;
    if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);
    while (true) {
      Polynomial r = pseudo_remainder(a, b, var);
      if (r.is_zero()) return std::nullopt;
      r = clean(std::move(r), var);
      if (!r.involves(var)) return r;
      a = std::move(b);
      b = std::move(r);
    }
  }

 private:
  const EliminationOptions& opt_;
};

}  // namespace detail

inline EliminationResult eliminate(std::vector<Polynomial> eqs, const EliminationOptions& opt) {
  EliminationResult out;
  detail::Eliminator elim(opt);
  std::vector<bool> done(eqs.empty() ? 0 : eqs.front().nvars(), false);

  auto tidy = [&](std::vector<Polynomial>& list) {
    std::vector<Polynomial> kept;
    for (Polynomial& p : list) {
      if (p.is_zero()) continue;
      if (p.is_constant()) {
        out.inconsistent = true;
        continue;
      }
      p = elim.clean(std::move(p), std::nullopt);
      if (std::find(kept.begin(), kept.end(), p) == kept.end()) kept.push_back(std::move(p));
    }
    list = std::move(kept);
  };
  tidy(eqs);

  while (!out.inconsistent) {
    if (opt.stop_at_univariate) {
      std::size_t occurring = 0;
      for (std::size_t v = 0; v < done.size(); ++v) {
        bool any = false;
        for (const Polynomial& p : eqs) any = any || p.involves(v);
        if (any) ++occurring;
      }
      if (occurring <= 1) break;
    }
    // Choose the next variable: one that sits in a single equation is free to
    // drop; otherwise the smallest pivot degree, ties by declared order.
    std::optional<std::size_t> best;
    std::tuple<int, int, int, std::size_t> best_key{};
    for (std::size_t v : opt.eliminable) {
      if (done[v]) continue;
      std::size_t count = 0;
      std::optional<detail::PivotKey> pk;
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (!eqs[i].involves(v)) continue;
        ++count;
        auto k = detail::pivot_key(eqs[i], v, i);
        if (!pk || k < *pk) pk = k;
      }
      if (count == 0) continue;
      std::tuple<int, int, int, std::size_t> key{count == 1 ? 0 : 1, pk->degree, pk->lc_nonconstant, v};
      if (!best || key < best_key) {
        best = v;
        best_key = key;
      }
    }
    if (!best) break;
    const std::size_t v = *best;
    done[v] = true;

    std::vector<Polynomial> with, without;
    for (Polynomial& p : eqs) (p.involves(v) ? with : without).push_back(std::move(p));
    out.steps.push_back({v, with});
    if (with.size() >= 2) {
      std::vector<std::size_t> order(with.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return detail::pivot_key(with[x], v, x) < detail::pivot_key(with[y], v, y);
      });
      // Try pivots in preference order until one combines with every other
      // equation without degenerating.
      bool ok = false;
      for (std::size_t pi : order) {
        std::vector<Polynomial> produced;
        bool failed = false;
        for (std::size_t j = 0; j < with.size() && !failed; ++j) {
          if (j == pi) continue;
          auto r = elim.combine(with[pi], with[j], v);
          if (!r)
            failed = true;
          else
            produced.push_back(std::move(*r));
        }
        if (failed) continue;
        for (Polynomial& p : produced) without.push_back(std::move(p));
        ok = true;
        break;
      }
      if (!ok) {
        out.degenerate = true;
        out.remaining = std::move(without);
        return out;
      }
    }
    eqs = std::move(without);
    tidy(eqs);
  }
  out.remaining = std::move(eqs);
  return out;
}

}  // namespace jacmap
