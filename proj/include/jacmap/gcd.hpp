#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "jacmap/polynomial.hpp"

namespace jacmap {

// Pseudo-remainder of a by b with respect to `var`:
// lc(b)^k a - q b with deg_var < deg_var(b).
inline Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, std::size_t var) {
  if (b.is_zero()) throw DomainError("pseudo-remainder by zero");
  const int db = b.degree_in(var);
  const Polynomial lb = leading_coefficient_in(b, var);
  while (!a.is_zero() && a.degree_in(var) >= db) {
    const int da = a.degree_in(var);
    Polynomial la = leading_coefficient_in(a, var);
    a = lb * a - la * Polynomial::variable(a.vars(), var, da - db) * b;
  }
  return a;
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

// gcd of the coefficients of p viewed as a polynomial in `var`.
inline Polynomial content_in(const Polynomial& p, std::size_t var) {
  Polynomial g(p.vars());
  for (const Polynomial& c : coefficients_in(p, var)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? monic(c) : poly_gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

// Monic greatest common divisor over Q(i), by recursive primitive remainder
// sequences in the first occurring variable.
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  a.require_same(b);
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(a.vars(), Scalar(1));
  std::size_t var = a.nvars();
  for (std::size_t v = 0; v < a.nvars(); ++v)
    if (a.involves(v) || b.involves(v)) {
      var = v;
      break;
    }
  if (!a.involves(var)) return poly_gcd(a, content_in(b, var));
  if (!b.involves(var)) return poly_gcd(content_in(a, var), b);

  Polynomial ca = content_in(a, var), cb = content_in(b, var);
  Polynomial pa = divide_exact(a, ca), pb = divide_exact(b, cb);
  Polynomial c = poly_gcd(ca, cb);
  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    Polynomial r = pseudo_remainder(pa, pb, var);
    pa = std::move(pb);
    if (r.is_zero()) {
      pb = Polynomial(a.vars());
      break;
    }
    if (!r.involves(var)) {
      // Primitive inputs whose remainder sequence hits a var-free element
      // are coprime in var.
      return monic(c);
    }
    pb = divide_exact(r, content_in(r, var));
  }
  return monic(c * divide_exact(pa, content_in(pa, var)));
}

// Squarefree part: p / gcd(p, dp/dv_1, ..., dp/dv_n), monic.
inline Polynomial squarefree_part(const Polynomial& p) {
  if (p.is_zero()) throw DomainError("squarefree part of the zero polynomial");
  if (p.is_constant()) return Polynomial::constant(p.vars(), Scalar(1));
  Polynomial g = p;
  for (std::size_t v : p.occurring_vars()) {
    g = poly_gcd(g, differentiate(p, v));
    if (g.is_constant()) break;
  }
  return monic(divide_exact(p, g));
}

// Pairwise coprime nonconstant monic factors whose product has the same zero
// set as the product of the inputs.  Variables dividing an input are split
// off as separate factors.
inline std::vector<Polynomial> coprime_basis(const std::vector<Polynomial>& inputs) {
  std::vector<Polynomial> work;
  for (const Polynomial& q : inputs) {
    if (q.is_zero()) throw DomainError("coprime basis of a zero polynomial");
    if (q.is_constant()) continue;
    Polynomial rest = squarefree_part(q);
    // Monomial content.
    for (std::size_t v = 0; v < rest.nvars(); ++v) {
      bool divisible = !rest.is_zero();
      for (const auto& [e, c] : rest.terms())
        if (e[v] == 0) divisible = false;
      if (divisible) {
        Polynomial x = Polynomial::variable(rest.vars(), v);
        rest = divide_exact(rest, x);
        work.push_back(x);
      }
    }
    if (!rest.is_constant()) work.push_back(monic(rest));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < work.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < work.size() && !changed; ++j) {
        if (work[i] == work[j]) {
          work.erase(work.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
          break;
        }
        Polynomial g = poly_gcd(work[i], work[j]);
        if (g.is_constant()) continue;
        Polynomial a = divide_exact(work[i], g), b = divide_exact(work[j], g);
        std::vector<Polynomial> next;
        for (std::size_t k = 0; k < work.size(); ++k)
          if (k != i && k != j) next.push_back(work[k]);
        for (Polynomial* q : {&g, &a, &b})
          if (!q->is_constant()) next.push_back(monic(*q));
        work = std::move(next);
        changed = true;
      }
  }
  std::sort(work.begin(), work.end(), [](const Polynomial& x, const Polynomial& y) { return format(x) < format(y); });
  return work;
}

}  // namespace jacmap
