#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>

#include "jacmap/error.hpp"

namespace jacmap {

using Rational = mpq_class;

// Gaussian rational re + im*i.  GMP keeps both parts in lowest terms with a
// positive denominator, so equality is exact structural equality.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : re_(v) {}
  Scalar(long v) : re_(v) {}
  Scalar(Rational re) : re_(std::move(re)) {}
  Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static Scalar i() { return Scalar(Rational(0), Rational(1)); }

  // Exact conversion: every finite double is a dyadic rational.
  static Scalar from_double(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw DomainError("non-finite value cannot be converted to an exact scalar");
    return Scalar(Rational(z.real()), Rational(z.imag()));
  }

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  Scalar operator-() const { return Scalar(-re_, -im_); }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (o.is_real()) {
      re_ *= o.re_;
      im_ *= o.re_;
      return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw DomainError("division by zero scalar");
    if (o.is_real()) {
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    Rational d = o.norm();
    Scalar q = *this * o.conj();
    re_ = q.re_ / d;
    im_ = q.im_ / d;
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar pow(unsigned e) const {
    Scalar result(1), base(*this);
    while (e != 0) {
      if (e & 1U) result *= base;
      e >>= 1U;
      if (e != 0) base *= base;
    }
    return result;
  }

  // Canonical text: "3/4", "-2", "i", "-5/2*i", "(1 - 2*i)".
  std::string str() const {
    if (is_real()) return re_.get_str();
    auto imag_part = [](const Rational& q) {
      if (q == 1) return std::string("i");
      if (q == -1) return std::string("-i");
      return q.get_str() + "*i";
    };
    if (sgn(re_) == 0) return imag_part(im_);
    std::string out = "(" + re_.get_str();
    if (sgn(im_) < 0)
      out += " - " + imag_part(-im_);
    else
      out += " + " + imag_part(im_);
    return out + ")";
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

// Largest of |re|, |im| over a set of scalars; used to rescale huge exact
// coefficients before converting to floating point.
template <class Range>
Rational max_component_magnitude(const Range& scalars) {
  Rational best(0);
  for (const Scalar& s : scalars) {
    Rational a = abs(s.re()), b = abs(s.im());
    if (a > best) best = a;
    if (b > best) best = b;
  }
  return best;
}

}  // namespace jacmap
