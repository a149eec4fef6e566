#pragma once

#include <complex>

namespace jacmap {

using Complex = std::complex<double>;

// Integer power by repeated squaring; negative k inverts.
inline Complex ipow(Complex z, int k) {
  bool invert = k < 0;
  unsigned u = invert ? static_cast<unsigned>(-k) : static_cast<unsigned>(k);
  Complex r(1.0), b = z;
  while (u != 0) {
    if (u & 1U) r *= b;
    u >>= 1U;
    if (u != 0) b *= b;
  }
  return invert ? Complex(1.0) / r : r;
}

}  // namespace jacmap
