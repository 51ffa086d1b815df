#pragma once

#include "logahoric/loopconn.hpp"

#include <optional>
#include <string>
#include <vector>

namespace logahoric {

// (w, lambda) in W x| X_*(T) for GL_n. w[j] is the image of j; the action is
// w(theta - lambda) with (w v)_{w(j)} = v_j.
struct AffineWeylElement {
  std::vector<int> w;
  std::vector<long long> lambda;

  static AffineWeylElement identity(int n);
  static AffineWeylElement translation(std::vector<long long> lambda);
  static AffineWeylElement permutation(std::vector<int> w);

  int n() const { return static_cast<int>(w.size()); }
  bool is_identity() const;
  Weight act(const Weight& theta) const;
  AffineWeylElement inverse() const;
  std::string str() const;

  // (w1, l1)(w2, l2) = (w1 w2, w2^-1 l1 + l2)
  friend AffineWeylElement operator*(const AffineWeylElement& x, const AffineWeylElement& y);
  friend bool operator==(const AffineWeylElement&, const AffineWeylElement&) = default;

  // h z^lambda t with h the permutation matrix (h e_j = e_{w(j)}) and t a
  // constant torus element (all ones when omitted).
  template <class S>
  LaurentMatrix<S> monomial(const std::vector<S>& t = {}) const {
    LaurentMatrix<S> m;
    m.n = n();
    for (int j = 0; j < n(); ++j)
      m.add_entry(static_cast<int>(lambda[static_cast<std::size_t>(j)]), w[static_cast<std::size_t>(j)], j,
                  t.empty() ? S(1) : t[static_cast<std::size_t>(j)]);
    return m;
  }
};

// Applies v -> w v (the finite part only).
Weight permute(const std::vector<int>& w, const Weight& v);
std::vector<std::vector<int>> all_permutations(int n);

// ---- invertibility ----

namespace detail {
template <class S>
Mat<S> evaluate_shifted(const LaurentMatrix<S>& g, int shift, const S& z) {
  Mat<S> out = zeros<S>(g.n, g.n);
  for (const auto& [k, m] : g.coeffs) {
    S p(1);
    for (int e = 0; e < k + shift; ++e) p *= z;
    out += Mat<S>(m * p);
  }
  return out;
}
}  // namespace detail

// det(g) is identically zero as a Laurent polynomial. The determinant of
// z^-kmin g is a polynomial of degree <= n (kmax - kmin); it is sampled at one
// more point than that.
template <class S>
bool determinant_vanishes(const LaurentMatrix<S>& g) {
  if (g.coeffs.empty()) return true;
  const int lo = g.coeffs.begin()->first, hi = g.coeffs.rbegin()->first;
  const int samples = g.n * (hi - lo) + 1;
  if constexpr (is_exact_v<S>) {
    for (int s = 1; s <= samples; ++s)
      if (determinant(detail::evaluate_shifted(g, -lo, Rational(s))) != Rational(0)) return false;
    return true;
  } else {
    double scale = 0;
    for (const auto& [k, m] : g.coeffs) scale = std::max(scale, max_abs(m));
    const double floor_value = 1e-12 * std::pow(scale * g.n, g.n);
    for (int s = 0; s < samples; ++s) {
      cplx z = std::polar(1.0, 2 * kPi * (s + 0.37) / samples);
      if (std::abs(detail::evaluate_shifted(g, -lo, z).determinant()) > floor_value) return false;
    }
    return true;
  }
}

// ---- membership in the extended parahoric P-hat_theta ----

struct OrderViolation {
  int row, col;
  int order;        // ord_z of the entry
  Rational excess;  // order + theta_row - theta_col (negative)
};

template <class S>
struct ParahoricCertificate {
  bool member = false;
  bool orders_ok = true;
  bool limit_invertible = false;
  std::vector<OrderViolation> violations;
  Mat<S> limit;  // lim z^theta g z^-theta when orders_ok
};

// Member iff ord(g_jk) + theta_j - theta_k >= 0 for every entry and the limit
// is invertible.
template <class S>
ParahoricCertificate<S> extended_parahoric_membership(const LaurentMatrix<S>& g, const Weight& theta) {
  const int n = g.n;
  if (theta.size() != n) throw precondition_error("theta has the wrong length");
  if (determinant_vanishes(g)) throw precondition_error("g is not invertible");
  ParahoricCertificate<S> out;
  out.limit = zeros<S>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int ord = g.min_order(a, b);
      if (ord == kExactOrder) continue;
      Rational e = component_weight(theta, a, b, ord);
      if (e < 0) {
        out.orders_ok = false;
        out.violations.push_back({a, b, ord, e});
      } else if (e == 0) {
        out.limit(a, b) = g.coeff(ord)(a, b);
      }
    }
  if (out.orders_ok) {
    if constexpr (is_exact_v<S>) out.limit_invertible = determinant(out.limit) != S(0);
    else out.limit_invertible = rank(out.limit, 1e-10) == n;
  }
  out.member = out.orders_ok && out.limit_invertible;
  return out;
}

// ---- group elements with an invertibility certificate ----

template <class S>
struct LaurentGroupElement {
  LaurentMatrix<S> g;
  LaurentMatrix<S> inverse;  // certificate: g * inverse = 1

  static LaurentGroupElement make(LaurentMatrix<S> g, LaurentMatrix<S> inv, double tol = 1e-10) {
    LaurentMatrix<S> prod = g * inv;
    LaurentMatrix<S> d = prod - LaurentMatrix<S>::identity(g.n);
    d.prune(tol);
    if (!d.coeffs.empty()) throw precondition_error("invertibility certificate does not check");
    return {std::move(g), std::move(inv)};
  }
  static LaurentGroupElement identity(int n) {
    return {LaurentMatrix<S>::identity(n), LaurentMatrix<S>::identity(n)};
  }
  static LaurentGroupElement monomial(const AffineWeylElement& x) {
    return {x.monomial<S>(), x.inverse().template monomial<S>()};
  }
  // exp(X z^i) for nilpotent X
  static LaurentGroupElement unipotent(const Mat<S>& x, int i) {
    return {detail::exp_nilpotent_laurent(x, i), detail::exp_nilpotent_laurent(Mat<S>(-x), i)};
  }

  friend LaurentGroupElement operator*(const LaurentGroupElement& x, const LaurentGroupElement& y) {
    return {x.g * y.g, y.inverse * x.inverse};
  }
  LaurentGroupElement inv() const { return {inverse, g}; }
};

// ---- stabilizer check ----

struct StabilizerVerdict {
  bool member = false;  // h z^lambda t in P-hat_theta
  bool fixed = false;   // w_hat . theta == theta
};

// Throws postcondition_error if the two sides disagree.
StabilizerVerdict stabilizer_check(const AffineWeylElement& x, const Weight& theta);

struct StabilizerSweep {
  long long cases = 0;
  long long fixed = 0;
  long long agree = 0;
};
// Every w in S_n and every lambda with |lambda_j| <= bound, for each theta.
StabilizerSweep stabilizer_sweep(int n, int bound, const std::vector<Weight>& thetas);

// ---- equivalence of weighted parahorics ----

enum class Equivalence { Equivalent, NotEquivalent, Inconclusive };
std::string to_string(Equivalence e);

struct EquivalenceResult {
  Equivalence verdict = Equivalence::NotEquivalent;
  std::optional<AffineWeylElement> witness;
  int candidates_tested = 0;
  int candidates_outside_window = 0;
};

// (g, theta) ~ (g', theta') iff theta' = w_hat . theta and g^-1 g' w_hat lies in
// P-hat_theta for some w_hat. For each w the translation is forced, so the
// search runs over W; the window only caps |lambda_j| of a candidate.
template <class S>
EquivalenceResult equivalent_weighted_parahorics(const LaurentGroupElement<S>& g, const Weight& theta,
                                                 const LaurentGroupElement<S>& g2, const Weight& theta2,
                                                 long long window = 8) {
  const int n = theta.size();
  if (theta2.size() != n || g.g.n != n || g2.g.n != n) throw precondition_error("size mismatch");
  EquivalenceResult out;
  const LaurentMatrix<S> rel = g.inverse * g2.g;
  for (const auto& w : all_permutations(n)) {
    std::vector<long long> lambda(static_cast<std::size_t>(n));
    bool integral = true, inside = true;
    for (int j = 0; j < n; ++j) {
      Rational l = theta[j] - theta2[w[static_cast<std::size_t>(j)]];
      if (!l.is_integer()) {
        integral = false;
        break;
      }
      lambda[static_cast<std::size_t>(j)] = l.to_ll();
      if (std::abs(l.to_ll()) > window) inside = false;
    }
    if (!integral) continue;
    if (!inside) {
      ++out.candidates_outside_window;
      continue;
    }
    AffineWeylElement x{w, lambda};
    if (!(x.act(theta) == theta2)) throw postcondition_error("candidate does not move theta to theta'");
    ++out.candidates_tested;
    if (extended_parahoric_membership(LaurentMatrix<S>(rel * x.monomial<S>()), theta).member) {
      out.verdict = Equivalence::Equivalent;
      out.witness = x;
      return out;
    }
  }
  out.verdict = out.candidates_outside_window > 0 ? Equivalence::Inconclusive : Equivalence::NotEquivalent;
  return out;
}

// ---- weights from monodromy ----

// Sorted fractional parts: the representative of theta under W x| Z^n in the
// closed alcove 1 > theta_1 >= ... >= theta_n >= 0, and an element taking theta there.
std::pair<Weight, AffineWeylElement> reduce_to_alcove(const Weight& theta);

struct WeightCandidate {
  Weight tau;                 // one choice modulo X_*(T)
  std::vector<double> sigma;  // -log|e| / 2 pi
  Weight theta;               // phi - tau
  Weight reduced;             // alcove representative of theta
};

// From (M, P_phi): eigenvalues of pi(M) per Levi block give tau, and theta = phi - tau
// is reduced to the alcove.
WeightCandidate corollary_e_invariant(const MatC& M, const Weight& phi, double tol = 1e-9);

}  // namespace logahoric
