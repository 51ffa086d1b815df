#pragma once

#include "logahoric/normalform.hpp"

#include <random>

namespace logahoric::rnd {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}
inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Uniform over {k/q : q <= max_den} within [lo, hi].
inline Rational rational_in(Rng& rng, const Rational& lo, const Rational& hi, int max_den) {
  int q = uniform_int(rng, 1, max_den);
  Rational a = (lo * Rational(q)).ceil(), b = (hi * Rational(q)).floor();
  if (b < a) return lo;
  int k = uniform_int(rng, static_cast<int>(a.to_ll()), static_cast<int>(b.to_ll()));
  return Rational(k, q);
}

inline Weight weight(Rng& rng, int n, const Rational& lo, const Rational& hi, int max_den) {
  Weight w(n);
  for (int i = 0; i < n; ++i) w[i] = rational_in(rng, lo, hi, max_den);
  return w;
}

inline cplx gaussian_c(Rng& rng, double s = 1.0) {
  std::normal_distribution<double> nd(0.0, s);
  double re = nd(rng);
  return {re, nd(rng)};
}

inline MatC complex_matrix(Rng& rng, int n, double s = 1.0) {
  MatC m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = gaussian_c(rng, s);
  return m;
}

// Exact: small integers in [-range, range]; float: complex gaussians.
template <class S>
S entry(Rng& rng, int range = 3) {
  if constexpr (is_exact_v<S>) {
    int v = 0;
    while (v == 0) v = uniform_int(rng, -range, range);
    return S(v);
  } else {
    return gaussian_c(rng);
  }
}

template <class S>
Mat<S> matrix(Rng& rng, int n, int range = 3) {
  Mat<S> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = entry<S>(rng, range);
  return m;
}

// Random invertible matrix supported on an allowed pattern containing the diagonal.
template <class S, class Pred>
Mat<S> invertible_on(Rng& rng, int n, Pred allowed) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat<S> m = zeros<S>(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (allowed(a, b) && (a == b || coin(rng, 0.7))) m(a, b) = entry<S>(rng);
    if (magnitude(determinant(m)) > 1e-3) return m;
  }
  throw postcondition_error("could not sample an invertible matrix");
}

// A in A_theta with entries at indices from lowest to truncation.
template <class S>
LaurentConnection<S> connection_in_A_theta(Rng& rng, const GroupSpec& g, const Weight& theta,
                                           int truncation, double density = 0.4) {
  LaurentConnection<S> a(g, truncation);
  int lowest = -static_cast<int>(theta.spread().ceil().to_ll());
  for (int i = lowest; i <= truncation; ++i)
    for (int x = 0; x < g.n; ++x)
      for (int y = 0; y < g.n; ++y)
        if (component_weight(theta, x, y, i) >= 0 && coin(rng, density)) a.add_entry(i, x, y, entry<S>(rng));
  return a;
}

// One generator of the extended parahoric at theta. kind cycles through
// constant in P_theta, Levi element, root exp of weight >= 0, diagonal series, generic series.
template <class S>
GaugeFactor<S> p_hat_generator(Rng& rng, const Weight& theta, int kind) {
  const int n = theta.size();
  switch (kind % 5) {
    case 0:
      return GaugeFactor<S>::constant(
          invertible_on<S>(rng, n, [&](int a, int b) { return theta[a] >= theta[b]; }));
    case 1:
      return GaugeFactor<S>::levi(
          invertible_on<S>(rng, n, [&](int a, int b) { return (theta[a] - theta[b]).is_integer(); }),
          theta);
    case 2: {
      int a = uniform_int(rng, 0, n - 1), b = uniform_int(rng, 0, n - 2);
      if (b >= a) ++b;
      Rational d = theta[a] - theta[b];
      int lo = static_cast<int>((-d).ceil().to_ll());
      int i = lo + uniform_int(rng, 0, 2);
      Mat<S> x = zeros<S>(n, n);
      x(a, b) = entry<S>(rng);
      return GaugeFactor<S>::exp(x, i);
    }
    case 3: {
      Mat<S> x = zeros<S>(n, n);
      for (int a = 0; a < n; ++a) x(a, a) = entry<S>(rng);
      return GaugeFactor<S>::exp(x, uniform_int(rng, 1, 2));
    }
    default: {
      int i = static_cast<int>(theta.spread().ceil().to_ll()) + uniform_int(rng, 0, 1);
      if (i == 0) i = 1;
      return GaugeFactor<S>::exp(matrix<S>(rng, n), i);
    }
  }
}

// A word of len random generators of the extended parahoric.
template <class S>
GaugeWord<S> p_hat_word(Rng& rng, const Weight& theta, int len) {
  GaugeWord<S> w;
  for (int k = 0; k < len; ++k) w.factors.push_back(p_hat_generator<S>(rng, theta, uniform_int(rng, 0, 4)));
  return w;
}

// A normal-form instance: weights, a compatible nilpotent N and the
// connection (tau + sigma + sum A_i z^i) dz/z that it defines.
template <class S>
struct NormalInstance {
  NormalData data;
  Mat<S> nil;
  LaurentConnection<S> normal;
};

// theta in [0,2), tau in [-1,1] with denominators <= max_den; rejects
// spread(theta) + spread(phi) > max_total so the given truncation is complete.
// Resonances are planted by integer offsets between tau entries.
template <class S>
NormalInstance<S> normal_instance(Rng& rng, int n, int truncation = 4, int max_den = 4, int max_total = 4) {
  NormalInstance<S> out;
  NormalData& d = out.data;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 1000) throw postcondition_error("normal_instance: rejection sampling failed");
    d.theta = weight(rng, n, Rational(0), Rational(2) - Rational(1, max_den), max_den);
    d.tau = Weight(n);
    for (int a = 0; a < n; ++a) {
      if (a > 0 && coin(rng, 0.5)) {
        int b = uniform_int(rng, 0, a - 1);
        Rational t = d.tau[b] + Rational(uniform_int(rng, -1, 1));
        if (t.abs() <= Rational(1)) {
          d.tau[a] = t;
          continue;
        }
      }
      d.tau[a] = rational_in(rng, Rational(-1), Rational(1), max_den);
    }
    if (d.theta.spread() + d.phi().spread() <= Rational(max_total)) break;
  }
  d.sigma.assign(static_cast<std::size_t>(n), 0.0);
  if constexpr (!is_exact_v<S>) {
    double s = uniform_real(rng, -0.3, 0.3);
    for (auto& v : d.sigma) v = coin(rng, 0.6) ? 0.0 : s;
  }
  // nilpotent: only pairs strictly ordered by (phi desc, sigma, index)
  const Weight phi = d.phi();
  auto before = [&](int a, int b) {
    if (phi[a] != phi[b]) return phi[a] > phi[b];
    if (d.sigma[a] != d.sigma[b]) return d.sigma[a] < d.sigma[b];
    return a < b;
  };
  out.nil = zeros<S>(n, n);
  int top = truncation;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !before(a, b)) continue;
      Rational i = d.tau[a] - d.tau[b];
      if (!i.is_integer() || !resonant(d, a, b, static_cast<int>(i.to_ll()))) continue;
      if (coin(rng, 0.6)) {
        out.nil(a, b) = entry<S>(rng);
        top = std::max(top, static_cast<int>(i.to_ll()));
      }
    }
  out.normal = LaurentConnection<S>(GroupSpec{Family::GL, n}, top);
  for (int a = 0; a < n; ++a) out.normal.add_entry(0, a, a, residue_value<S>(d, a));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!is_zero(out.nil(a, b)))
        out.normal.add_entry(static_cast<int>((d.tau[a] - d.tau[b]).to_ll()), a, b, out.nil(a, b));
  out.normal.prune();
  return out;
}

// Adds random components of strictly positive weight (not yet normalized).
template <class S>
LaurentConnection<S> perturb_positive(Rng& rng, const LaurentConnection<S>& a, const Weight& theta,
                                      double density = 0.4) {
  LaurentConnection<S> out = a;
  const int n = a.n();
  int lowest = -static_cast<int>(theta.spread().ceil().to_ll());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int i = lowest; i <= a.known_order()(x, y); ++i)
        if (component_weight(theta, x, y, i) > 0 && coin(rng, density)) out.add_entry(i, x, y, entry<S>(rng));
  out.prune();
  return out;
}

}  // namespace logahoric::rnd
