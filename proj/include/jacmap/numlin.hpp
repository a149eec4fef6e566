#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "jacmap/error.hpp"
#include "jacmap/ipow.hpp"

namespace jacmap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;


namespace detail {
inline void require_finite(const ComplexMatrix& a) {
  if (a.size() == 0) throw DimensionError("empty matrix");
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        throw DomainError("matrix has a non-finite entry");
}
}  // namespace detail

// nu(A) = inf_{|phi|=1} |A^* phi|, the m-th singular value of the m x n
// matrix A.  For m > n the adjoint has a kernel and nu is 0.
inline double nu(const ComplexMatrix& a) {
  detail::require_finite(a);
  if (a.rows() > a.cols()) return 0.0;
  if (a.rows() == 1) return a.row(0).norm();
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(a.rows() - 1);
}

// Same quantity with the product of all squared singular values supplied
// from an exact computation (det(A A^*)).  The larger singular values come
// from the SVD, where they are accurate relative to |A|; the smallest one is
// recovered as sqrt(det / prod(larger^2)), which keeps full relative accuracy
// when it is many orders below |A|.
inline double nu_with_gram_determinant(const ComplexMatrix& a, double gram_det) {
  detail::require_finite(a);
  if (a.rows() > a.cols()) return 0.0;
  if (a.rows() == 1) return a.row(0).norm();
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  const Eigen::Index m = a.rows();
  // The recovery divides by the second-smallest singular value; when that one
  // is itself at noise level the plain SVD value is the better estimate.
  if (!(gram_det >= 0.0) || !std::isfinite(gram_det) || s(m - 2) <= 1e-6 * s(0)) return s(m - 1);
  double denom = 1.0;
  for (Eigen::Index i = 0; i + 1 < m; ++i) denom *= s(i) * s(i);
  if (denom <= 0.0 || !std::isfinite(denom)) return s(m - 1);
  return std::sqrt(gram_det / denom);
}

// Least eigenvalue of A A^*; an independent route to nu(A)^2.
inline double gram_least_eigenvalue(const ComplexMatrix& a) {
  detail::require_finite(a);
  ComplexMatrix g = a * a.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  return es.eigenvalues()(0);
}

struct Root {
  Complex value;
  int multiplicity = 1;
  double residual = 0.0;           // |p(root)|
  double relative_residual = 0.0;  // |p(root)| / (|p|_2 max(1,|root|)^deg)
};

using RootSet = std::vector<Root>;

struct RootOptions {
  double tol = 1e-8;
  double cluster_radius = 1e-6;
  int newton_iterations = 60;
};

namespace detail {

// Value and derivative by Horner; coefficients ascending.
inline void horner_with_derivative(const std::vector<Complex>& c, Complex z, Complex& p, Complex& dp) {
  p = 0.0;
  dp = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
}

inline Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex p = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) p = p * z + c[k];
  return p;
}

inline bool root_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace detail

// All complex roots of sum_k coeffs[k] z^k.
// Companion-matrix eigenvalues, clustering into multiplicities, then Newton
// polishing (multiplicity-aware step, accepted only while the residual drops).
inline RootSet univariate_roots(std::vector<Complex> coeffs, const RootOptions& opt = {}) {
  while (!coeffs.empty() && coeffs.back() == Complex(0.0)) coeffs.pop_back();
  if (coeffs.empty()) throw DomainError("root finding on the zero polynomial");
  if (coeffs.size() == 1) throw DomainError("root finding on a constant polynomial");
  for (const Complex& c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("non-finite coefficient");

  const int degree = static_cast<int>(coeffs.size()) - 1;
  double pnorm = 0.0;
  for (const Complex& c : coeffs) pnorm += std::norm(c);
  pnorm = std::sqrt(pnorm);

  // Exact zero roots first.
  std::size_t zeros = 0;
  while (coeffs[zeros] == Complex(0.0)) ++zeros;
  std::vector<Complex> reduced(coeffs.begin() + static_cast<std::ptrdiff_t>(zeros), coeffs.end());

  std::vector<Complex> raw;
  const int d = static_cast<int>(reduced.size()) - 1;
  if (d == 1) {
    raw.push_back(-reduced[0] / reduced[1]);
  } else if (d > 1) {
    ComplexMatrix companion = ComplexMatrix::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -reduced[i] / reduced[d];
    Eigen::ComplexEigenSolver<ComplexMatrix> es(companion, false);
    for (int i = 0; i < d; ++i) raw.push_back(es.eigenvalues()(i));
  }
  std::sort(raw.begin(), raw.end(), detail::root_less);

  std::vector<std::vector<Complex>> clusters;
  for (const Complex& z : raw) {
    bool placed = false;
    for (auto& cl : clusters) {
      Complex center(0.0);
      for (const Complex& w : cl) center += w;
      center /= static_cast<double>(cl.size());
      if (std::abs(center - z) < opt.cluster_radius) {
        cl.push_back(z);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({z});
  }

  RootSet out;
  if (zeros > 0) out.push_back({Complex(0.0), static_cast<int>(zeros), 0.0, 0.0});
  for (const auto& cl : clusters) {
    Complex z(0.0);
    for (const Complex& w : cl) z += w;
    z /= static_cast<double>(cl.size());
    const double mult = static_cast<double>(cl.size());
    Complex p, dp;
    detail::horner_with_derivative(coeffs, z, p, dp);
    double res = std::abs(p);
    for (int it = 0; it < opt.newton_iterations && res > 0.0; ++it) {
      if (dp == Complex(0.0)) break;
      Complex cand = z - mult * p / dp;
      Complex pc, dpc;
      detail::horner_with_derivative(coeffs, cand, pc, dpc);
      if (!(std::abs(pc) < res)) break;
      z = cand;
      p = pc;
      dp = dpc;
      res = std::abs(pc);
    }
    double scale = pnorm * std::pow(std::max(1.0, std::abs(z)), degree);
    out.push_back({z, static_cast<int>(cl.size()), res, scale > 0.0 ? res / scale : res});
  }
  std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) { return detail::root_less(a.value, b.value); });
  return out;
}

}  // namespace jacmap
