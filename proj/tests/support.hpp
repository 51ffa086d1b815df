#pragma once

#include "logahoric/loopconn.hpp"

#include <functional>

namespace testsupport {

using namespace logahoric;

inline MatQ q(std::initializer_list<std::initializer_list<long long>> rows) {
  MatQ m(static_cast<int>(rows.size()), static_cast<int>(rows.begin()->size()));
  int i = 0;
  for (auto r : rows) {
    int j = 0;
    for (auto v : r) m(i, j++) = Rational(v);
    ++i;
  }
  return m;
}

inline Weight w(std::initializer_list<const char*> e) {
  std::vector<std::string> s(e.begin(), e.end());
  return Weight::parse(s);
}

inline MatQ unit(int n, int a, int b) {
  MatQ m = zeros<Rational>(n, n);
  m(a, b) = Rational(1);
  return m;
}

// Laurent coefficients of a matrix function on |z| = radius by a discrete
// Fourier transform with m sample points.
inline std::map<int, MatC> fourier_coeffs(const std::function<MatC(cplx)>& f, int n, int lo, int hi,
                                          double radius = 1.0, int m = 128) {
  std::map<int, MatC> out;
  std::vector<MatC> vals;
  std::vector<cplx> zs;
  for (int s = 0; s < m; ++s) {
    cplx z = std::polar(radius, 2 * kPi * s / m);
    zs.push_back(z);
    vals.push_back(f(z));
  }
  for (int k = lo; k <= hi; ++k) {
    MatC c = MatC::Zero(n, n);
    for (int s = 0; s < m; ++s) c += vals[s] * std::pow(zs[s], -k);
    out[k] = c / static_cast<double>(m);
  }
  return out;
}

}  // namespace testsupport
