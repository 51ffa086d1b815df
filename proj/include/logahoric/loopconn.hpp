#pragma once

#include "logahoric/liecore.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logahoric {

// Sentinel known order for entries that are exact polynomials.
inline constexpr int kExactOrder = std::numeric_limits<int>::max() / 4;

inline int sat_add(int a, int b) {
  if (a >= kExactOrder || b >= kExactOrder) return kExactOrder;
  return a + b;
}

// Finite Laurent polynomial matrix sum_k g_k z^k.
template <class S>
struct LaurentMatrix {
  int n = 0;
  std::map<int, Mat<S>> coeffs;

  static LaurentMatrix identity(int n) { return constant(logahoric::identity<S>(n)); }
  static LaurentMatrix constant(const Mat<S>& m) {
    LaurentMatrix g;
    g.n = static_cast<int>(m.rows());
    g.coeffs[0] = m;
    return g;
  }
  // z^lambda for integral lambda
  static LaurentMatrix torus(const std::vector<long long>& lambda) {
    LaurentMatrix g;
    g.n = static_cast<int>(lambda.size());
    for (int a = 0; a < g.n; ++a) g.add_entry(static_cast<int>(lambda[a]), a, a, S(1));
    return g;
  }

  Mat<S> coeff(int k) const {
    auto it = coeffs.find(k);
    return it == coeffs.end() ? zeros<S>(n, n) : it->second;
  }
  void add(int k, const Mat<S>& m) {
    auto it = coeffs.find(k);
    if (it == coeffs.end()) coeffs.emplace(k, m);
    else it->second += m;
  }
  void add_entry(int k, int a, int b, const S& v) {
    auto it = coeffs.find(k);
    if (it == coeffs.end()) it = coeffs.emplace(k, zeros<S>(n, n)).first;
    it->second(a, b) += v;
  }
  void prune(double tol = 0.0) {
    for (auto it = coeffs.begin(); it != coeffs.end();) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (is_zero(it->second(a, b), tol)) it->second(a, b) = S(0);
      if (max_abs(it->second) == 0.0) it = coeffs.erase(it);
      else ++it;
    }
  }
  // lowest exponent with a nonzero (a,b) entry; kExactOrder for the zero entry
  int min_order(int a, int b) const {
    for (const auto& [k, m] : coeffs)
      if (!is_zero(m(a, b))) return k;
    return kExactOrder;
  }

  friend LaurentMatrix operator*(const LaurentMatrix& x, const LaurentMatrix& y) {
    LaurentMatrix out;
    out.n = x.n;
    for (const auto& [p, a] : x.coeffs)
      for (const auto& [q, b] : y.coeffs) out.add(p + q, Mat<S>(a * b));
    out.prune();
    return out;
  }
  friend LaurentMatrix operator+(LaurentMatrix x, const LaurentMatrix& y) {
    for (const auto& [k, m] : y.coeffs) x.add(k, m);
    x.prune();
    return x;
  }
  friend LaurentMatrix operator-(LaurentMatrix x, const LaurentMatrix& y) {
    for (const auto& [k, m] : y.coeffs) x.add(k, Mat<S>(-m));
    x.prune();
    return x;
  }
  friend bool operator==(const LaurentMatrix& x, const LaurentMatrix& y) {
    LaurentMatrix d = x - y;
    return d.coeffs.empty();
  }

  MatC evaluate(cplx z) const {
    MatC out = MatC::Zero(n, n);
    for (const auto& [k, m] : coeffs) out += to_complex(m) * std::pow(z, k);
    return out;
  }
};

// A = (sum_i A_i z^i) dz/z, with per-entry known orders: coefficient i of
// entry (a,b) is known for i <= known(a,b).
template <class S>
class LaurentConnection {
 public:
  LaurentConnection() = default;
  LaurentConnection(GroupSpec g, int truncation)
      : group_(g), known_(Eigen::MatrixXi::Constant(g.n, g.n, truncation)) {}

  const GroupSpec& group() const { return group_; }
  int n() const { return group_.n; }

  const std::map<int, Mat<S>>& coeffs() const { return coeffs_; }
  Mat<S> coeff(int i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? zeros<S>(n(), n()) : it->second;
  }
  S entry(int i, int a, int b) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? S(0) : it->second(a, b);
  }
  void set_coeff(int i, const Mat<S>& m) {
    if (m.rows() != n() || m.cols() != n()) throw precondition_error("coefficient size mismatch");
    for (int a = 0; a < n(); ++a)
      for (int b = 0; b < n(); ++b)
        if (!is_zero(m(a, b)) && i > known_(a, b))
          throw truncation_overflow("coefficient index " + std::to_string(i) +
                                    " beyond the declared truncation");
    coeffs_[i] = m;
    prune();
  }
  void add_entry(int i, int a, int b, const S& v) {
    if (i > known_(a, b)) throw truncation_overflow("entry beyond the known order");
    auto it = coeffs_.find(i);
    if (it == coeffs_.end()) it = coeffs_.emplace(i, zeros<S>(n(), n())).first;
    it->second(a, b) += v;
  }

  const Eigen::MatrixXi& known_order() const { return known_; }
  void set_known_order(const Eigen::MatrixXi& k) {
    known_ = k;
    prune();
  }
  int truncation() const { return known_.size() ? known_.minCoeff() : 0; }

  // Drop coefficients past the known order and zero matrices.
  void prune(double tol = 0.0) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      for (int a = 0; a < n(); ++a)
        for (int b = 0; b < n(); ++b)
          if (it->first > known_(a, b) || is_zero(it->second(a, b), tol)) it->second(a, b) = S(0);
      if (max_abs(it->second) == 0.0) it = coeffs_.erase(it);
      else ++it;
    }
  }

  int lowest_index() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }

  MatC evaluate(cplx z) const {
    MatC out = MatC::Zero(n(), n());
    for (const auto& [k, m] : coeffs_) out += to_complex(m) * std::pow(z, k);
    return out;
  }

  template <class T>
  LaurentConnection<T> cast() const {
    LaurentConnection<T> out(group_, 0);
    out.set_known_order(known_);
    for (const auto& [k, m] : coeffs_) {
      if constexpr (std::is_same_v<T, S>) {
        out.set_coeff(k, m);
      } else if constexpr (std::is_same_v<T, cplx>) {
        out.set_coeff(k, to_complex(m));
      } else {
        static_assert(std::is_same_v<T, S>, "only exact -> complex casts are supported");
      }
    }
    return out;
  }

 private:
  GroupSpec group_;
  Eigen::MatrixXi known_;
  std::map<int, Mat<S>> coeffs_;
};

template <class S>
double distance(const LaurentConnection<S>& x, const LaurentConnection<S>& y) {
  double d = 0;
  for (const auto& [k, m] : x.coeffs()) d = std::max(d, max_abs(Mat<S>(m - y.coeff(k))));
  for (const auto& [k, m] : y.coeffs()) d = std::max(d, max_abs(Mat<S>(m - x.coeff(k))));
  return d;
}

template <class S>
bool same_coefficients(const LaurentConnection<S>& x, const LaurentConnection<S>& y) {
  if constexpr (is_exact_v<S>) {
    for (const auto& [k, m] : x.coeffs())
      if (m != y.coeff(k)) return false;
    for (const auto& [k, m] : y.coeffs())
      if (m != x.coeff(k)) return false;
    return true;
  } else {
    return distance(x, y) == 0.0;
  }
}

// Largest coefficient gap over indices that both sides know.
template <class S>
double jet_distance(const LaurentConnection<S>& x, const LaurentConnection<S>& y) {
  double d = 0;
  const int n = x.n();
  auto scan = [&](const LaurentConnection<S>& u) {
    for (const auto& [k, m] : u.coeffs())
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          int lim = std::min(x.known_order()(a, b), y.known_order()(a, b));
          if (k <= lim) d = std::max(d, magnitude(S(x.entry(k, a, b) - y.entry(k, a, b))));
        }
  };
  scan(x);
  scan(y);
  return d;
}

// ---- gauge words ----

template <class S>
struct GaugeFactor {
  enum class Kind { Constant, TorusPower, Exp, Levi, Laurent };
  Kind kind = Kind::Constant;
  Mat<S> m;       // Constant: h, Exp: X, Levi: h
  Weight weight;  // TorusPower: lambda (integral), Levi: theta
  int i = 0;      // Exp: power of z
  LaurentMatrix<S> g, ginv;  // Laurent: explicit element and its inverse

  static GaugeFactor constant(const Mat<S>& h) { return {Kind::Constant, h, Weight(), 0, {}, {}}; }
  static GaugeFactor torus(const Weight& lambda) {
    if (!lambda.is_integral()) throw precondition_error("torus power must be integral");
    return {Kind::TorusPower, Mat<S>(), lambda, 0, {}, {}};
  }
  static GaugeFactor exp(const Mat<S>& x, int i) { return {Kind::Exp, x, Weight(), i, {}, {}}; }
  // z^{-theta} h z^{theta}, requires h in H_theta
  static GaugeFactor levi(const Mat<S>& h, const Weight& theta) {
    return {Kind::Levi, h, theta, 0, {}, {}};
  }
  static GaugeFactor laurent(const LaurentMatrix<S>& g, const LaurentMatrix<S>& ginv) {
    if (!(g * ginv == LaurentMatrix<S>::identity(g.n)))
      throw precondition_error("Laurent factor: supplied inverse is wrong");
    return {Kind::Laurent, Mat<S>(), Weight(), 0, g, ginv};
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Constant: return "constant";
      case Kind::TorusPower: return "torus";
      case Kind::Exp: return "exp(z^" + std::to_string(i) + ")";
      case Kind::Levi: return "levi";
      case Kind::Laurent: return "laurent";
    }
    return "?";
  }
};

// g = factors[0] * factors[1] * ... ; the last factor acts first.
template <class S>
struct GaugeWord {
  std::vector<GaugeFactor<S>> factors;

  bool empty() const { return factors.empty(); }
  std::size_t size() const { return factors.size(); }
  friend GaugeWord operator*(const GaugeWord& x, const GaugeWord& y) {
    GaugeWord out = x;
    out.factors.insert(out.factors.end(), y.factors.begin(), y.factors.end());
    return out;
  }
};

namespace detail {

template <class S>
bool is_diagonal(const Mat<S>& x) {
  for (int a = 0; a < x.rows(); ++a)
    for (int b = 0; b < x.cols(); ++b)
      if (a != b && !is_zero(x(a, b))) return false;
  return true;
}

template <class S>
bool is_nilpotent(const Mat<S>& x, double tol = 1e-12) {
  Mat<S> p = identity<S>(static_cast<int>(x.rows()));
  for (int k = 0; k < x.rows(); ++k) p = (p * x).eval();
  if constexpr (is_exact_v<S>) return max_abs(p) == 0.0;
  else return max_abs(p) <= tol * std::max(1.0, std::pow(max_abs(x), static_cast<double>(x.rows())));
}

// exp(X z^i) for nilpotent X as a finite Laurent matrix.
template <class S>
LaurentMatrix<S> exp_nilpotent_laurent(const Mat<S>& x, int i) {
  const int n = static_cast<int>(x.rows());
  LaurentMatrix<S> g = LaurentMatrix<S>::identity(n);
  Mat<S> term = identity<S>(n);
  for (int m = 1; m <= n; ++m) {
    term = (term * x).eval();
    term /= S(m);
    if (max_abs(term) == 0.0) break;
    g.add(i * m, term);
  }
  g.prune();
  return g;
}

template <class S>
LaurentMatrix<S> levi_laurent(const Mat<S>& h, const Weight& theta) {
  const int n = static_cast<int>(h.rows());
  LaurentMatrix<S> g;
  g.n = n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (is_zero(h(a, b))) continue;
      Rational e = theta[b] - theta[a];
      if (!e.is_integer()) throw precondition_error("Levi factor h is not in H_theta");
      g.add_entry(static_cast<int>(e.to_ll()), a, b, h(a, b));
    }
  return g;
}

template <class S>
struct FiniteForm {
  LaurentMatrix<S> g, ginv, mc;  // mc = (z dg/dz) g^{-1}
};

template <class S>
std::optional<FiniteForm<S>> finite_form(const GaugeFactor<S>& f, int n) {
  using K = typename GaugeFactor<S>::Kind;
  FiniteForm<S> out;
  out.mc.n = n;
  switch (f.kind) {
    case K::Constant:
      out.g = LaurentMatrix<S>::constant(f.m);
      out.ginv = LaurentMatrix<S>::constant(inverse(f.m));
      return out;
    case K::TorusPower: {
      auto lam = f.weight.to_integers();
      std::vector<long long> neg;
      for (auto v : lam) neg.push_back(-v);
      out.g = LaurentMatrix<S>::torus(lam);
      out.ginv = LaurentMatrix<S>::torus(neg);
      out.mc = LaurentMatrix<S>::constant(f.weight.template diag<S>());
      out.mc.prune();
      return out;
    }
    case K::Levi: {
      out.g = levi_laurent(f.m, f.weight);
      out.ginv = levi_laurent(Mat<S>(inverse(f.m)), f.weight);
      // (dg)g^{-1} = Ad_g(theta) - theta
      LaurentMatrix<S> th = LaurentMatrix<S>::constant(f.weight.template diag<S>());
      out.mc = out.g * th * out.ginv - th;
      return out;
    }
    case K::Laurent: {
      out.g = f.g;
      out.ginv = f.ginv;
      LaurentMatrix<S> dg;
      dg.n = n;
      for (const auto& [k, m] : f.g.coeffs)
        if (k != 0) dg.add(k, Mat<S>(S(k) * m));
      out.mc = dg * f.ginv;
      return out;
    }
    case K::Exp:
      if (is_nilpotent(f.m)) {
        out.g = exp_nilpotent_laurent(f.m, f.i);
        out.ginv = exp_nilpotent_laurent(Mat<S>(-f.m), f.i);
        out.mc.add(f.i, Mat<S>(S(f.i) * f.m));
        out.mc.prune();
        return out;
      }
      if (f.i == 0) {
        if constexpr (is_exact_v<S>) {
          throw precondition_error("exp of a non-nilpotent constant is not rational; use a constant factor");
        } else {
          out.g = LaurentMatrix<S>::constant(exp_alg(f.m));
          out.ginv = LaurentMatrix<S>::constant(exp_alg(Mat<S>(-f.m)));
          return out;
        }
      }
      if (f.i < 0) throw precondition_error("exp(X z^i) with i < 0 needs nilpotent X");
      return std::nullopt;  // infinite series, handled separately
  }
  return std::nullopt;
}

template <class S>
LaurentConnection<S> apply_finite(const FiniteForm<S>& f, const LaurentConnection<S>& a) {
  const int n = a.n();
  Eigen::MatrixXi og(n, n), oi(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      og(x, y) = f.g.min_order(x, y);
      oi(x, y) = f.ginv.min_order(x, y);
    }
  const Eigen::MatrixXi& known = a.known_order();
  const int low = a.lowest_index();
  Eigen::MatrixXi knew(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int best = kExactOrder, reach = kExactOrder;
      for (int j = 0; j < n; ++j) {
        if (og(x, j) >= kExactOrder) continue;
        for (int k = 0; k < n; ++k) {
          if (oi(k, y) >= kExactOrder) continue;
          best = std::min(best, sat_add(sat_add(og(x, j), known(j, k)), oi(k, y)));
          reach = std::min(reach, og(x, j) + low + oi(k, y));
        }
      }
      if (best < reach && best < kExactOrder && !a.coeffs().empty())
        throw truncation_overflow("gauge transform leaves entry (" + std::to_string(x) + "," +
                                  std::to_string(y) + ") with no known coefficients");
      knew(x, y) = best;
    }
  std::map<int, Mat<S>> acc;
  auto add = [&](int k, const Mat<S>& m) {
    auto it = acc.find(k);
    if (it == acc.end()) acc.emplace(k, m);
    else it->second += m;
  };
  for (const auto& [p, gp] : f.g.coeffs)
    for (const auto& [i, ai] : a.coeffs()) {
      Mat<S> left = gp * ai;
      for (const auto& [q, gq] : f.ginv.coeffs) add(p + i + q, Mat<S>(left * gq));
    }
  for (const auto& [k, m] : f.mc.coeffs) add(k, m);
  LaurentConnection<S> out(a.group(), 0);
  out.set_known_order(knew);
  for (auto& [k, m] : acc) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (k > knew(x, y)) m(x, y) = S(0);
    if (max_abs(m) > 0.0) out.set_coeff(k, m);
  }
  return out;
}

// exp(X z^i), i > 0, X not nilpotent: Ad = sum_m ad_X^m(A) z^{im}/m!.
template <class S>
LaurentConnection<S> apply_series(const Mat<S>& x, int i, const LaurentConnection<S>& a) {
  const int n = a.n();
  const Eigen::MatrixXi& known = a.known_order();
  Eigen::MatrixXi knew = known;
  // Off-diagonal entries of exp(X z^i) vanish to order i; diagonal X keeps
  // every entry's order.
  if (!is_diagonal(x)) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        int best = kExactOrder;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            best = std::min(best, sat_add(sat_add(c == p ? 0 : i, known(c, d)), d == q ? 0 : i));
        knew(p, q) = best;
      }
  }
  int top = 0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) top = std::max(top, std::min(knew(p, q), kExactOrder - 1));
  if (top >= kExactOrder - 1) throw truncation_overflow("series factor applied to an exact connection");
  LaurentConnection<S> out(a.group(), 0);
  out.set_known_order(knew);
  std::map<int, Mat<S>> acc;
  auto add = [&](int k, const Mat<S>& m) {
    if (k > top) return;
    auto it = acc.find(k);
    if (it == acc.end()) acc.emplace(k, m);
    else it->second += m;
  };
  for (const auto& [k, ak] : a.coeffs()) {
    Mat<S> term = ak;
    for (int m = 0; k + i * m <= top; ++m) {
      if (m > 0) term = Mat<S>(commutator(x, term) / S(m));
      if (max_abs(term) == 0.0) break;
      add(k + i * m, term);
    }
  }
  add(i, Mat<S>(S(i) * x));
  for (auto& [k, m] : acc) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (k > knew(p, q)) m(p, q) = S(0);
    if (max_abs(m) > 0.0) out.set_coeff(k, m);
  }
  return out;
}

}  // namespace detail

template <class S>
LaurentConnection<S> gauge_transform(const GaugeFactor<S>& f, const LaurentConnection<S>& a) {
  auto ff = detail::finite_form(f, a.n());
  if (ff) return detail::apply_finite(*ff, a);
  return detail::apply_series(f.m, f.i, a);
}

template <class S>
LaurentConnection<S> gauge_transform(const GaugeWord<S>& w, const LaurentConnection<S>& a) {
  LaurentConnection<S> cur = a;
  for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) cur = gauge_transform(*it, cur);
  return cur;
}

// ---- weights, membership and the weight-zero map ----

inline Rational component_weight(const Weight& theta, int a, int b, int i) {
  return theta[a] - theta[b] + Rational(i);
}

struct AThetaViolation {
  int i;
  Rational lambda;
  int a, b;
};

struct AThetaCertificate {
  bool member = true;
  std::vector<AThetaViolation> violations;
};

template <class S>
AThetaCertificate membership_A_theta(const LaurentConnection<S>& a, const Weight& theta,
                                     double tol = 0.0) {
  AThetaCertificate cert;
  for (const auto& [i, m] : a.coeffs())
    for (int x = 0; x < a.n(); ++x)
      for (int y = 0; y < a.n(); ++y)
        if (!is_zero(m(x, y), tol) && component_weight(theta, x, y, i) < 0) {
          cert.member = false;
          cert.violations.push_back({i, theta[x] - theta[y], x, y});
        }
  return cert;
}

// Zero negative-weight entries up to rel_tol times the largest coefficient
// (float round-off); larger ones are a genuine violation.
template <class S>
LaurentConnection<S> clean_to_A_theta(const LaurentConnection<S>& a, const Weight& theta, double rel_tol = 1e-10) {
  double scale = 1.0;
  for (const auto& [i, m] : a.coeffs()) scale = std::max(scale, max_abs(m));
  auto cert = membership_A_theta(a, theta, rel_tol * scale);
  if (!cert.member) throw precondition_error("connection is not in A_theta");
  LaurentConnection<S> out = a;
  for (const auto& v : membership_A_theta(a, theta).violations) out.add_entry(v.i, v.a, v.b, S(-a.entry(v.i, v.a, v.b)));
  out.prune();
  return out;
}

// Largest realized weight below the first unknown one, so every component of
// weight up to the bound is known. Clipping known orders to this bound leaves
// it unchanged, which keeps normalization idempotent.
template <class S>
Rational known_weight_bound(const LaurentConnection<S>& a, const Weight& theta) {
  std::optional<Rational> unknown;
  for (int x = 0; x < a.n(); ++x)
    for (int y = 0; y < a.n(); ++y) {
      if (a.known_order()(x, y) >= kExactOrder) continue;
      Rational r = component_weight(theta, x, y, a.known_order()(x, y) + 1);
      if (!unknown || r < *unknown) unknown = r;
    }
  if (!unknown) throw precondition_error("connection has no finite truncation");
  std::optional<Rational> best;
  for (int x = 0; x < a.n(); ++x)
    for (int y = 0; y < a.n(); ++y) {
      const Rational delta = theta[x] - theta[y];
      Rational r = delta - (delta - *unknown).floor() - Rational(1);  // delta + ceil(unknown - delta) - 1
      if (!best || r > *best) best = r;
    }
  return *best;
}

template <class S>
struct WeightZeroPart {
  LaurentConnection<S> part;  // components with lambda + i = 0
  Mat<S> b;                   // theta + sum of those components, in h_theta
};

template <class S>
WeightZeroPart<S> weight_zero_part(const LaurentConnection<S>& a, const Weight& theta) {
  if (!membership_A_theta(a, theta).member) throw precondition_error("connection is not in A_theta");
  const int n = a.n();
  WeightZeroPart<S> out{LaurentConnection<S>(a.group(), kExactOrder), theta.template diag<S>()};
  for (const auto& [i, m] : a.coeffs())
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (!is_zero(m(x, y)) && component_weight(theta, x, y, i) == 0) {
          out.part.add_entry(i, x, y, m(x, y));
          out.b(x, y) += m(x, y);
        }
  return out;
}

template <class S>
bool lies_over(const LaurentConnection<S>& a, const Weight& theta, const Mat<S>& orbit_rep,
               double eig_tol = 1e-7) {
  auto h = centralizer_h_theta(theta);
  if (!h.contains(orbit_rep, 1e-12)) throw precondition_error("orbit representative is not in h_theta");
  auto b = weight_zero_part(a, theta).b;
  return same_invariants(blockwise_invariants(to_complex(b), h.classes),
                         blockwise_invariants(to_complex(orbit_rep), h.classes), eig_tol);
}

// L g(r): components E_ab z^i with theta_a - theta_b + i = r.
struct LoopComponent {
  int a, b, i;
};
std::vector<LoopComponent> loop_graded_piece(const Weight& theta, const Rational& r);

// Weights realized by components within [lo, hi].
std::vector<Rational> realized_weights(const Weight& theta, const Rational& lo, const Rational& hi);

// ---- certificates for gauge factors ----

// z^theta g z^{-theta} has a limit (extended parahoric), or a limit equal to 1 (U_theta).
template <class S>
struct LaurentMembership {
  bool member = true;
  bool unipotent = true;  // limit is the identity
  std::vector<std::pair<int, int>> violations;
  bool limit_singular = false;
};

template <class S>
LaurentMembership<S> laurent_membership(const LaurentMatrix<S>& g, const Weight& theta) {
  LaurentMembership<S> out;
  const int n = g.n;
  Mat<S> limit = zeros<S>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (const auto& [k, m] : g.coeffs) {
        if (is_zero(m(a, b))) continue;
        Rational e = component_weight(theta, a, b, k);
        if (e < 0) {
          out.member = false;
          out.violations.emplace_back(a, b);
          break;
        }
        if (e == 0) limit(a, b) += m(a, b);
      }
  if (out.member) {
    if constexpr (is_exact_v<S>) out.limit_singular = determinant(limit) == S(0);
    else out.limit_singular = rank(limit, 1e-10) < n;
    if (out.limit_singular) out.member = false;
  }
  out.unipotent = out.member && max_abs(Mat<S>(limit - identity<S>(n))) == 0.0;
  return out;
}

struct FactorCertificate {
  std::string kind;
  bool in_p_hat;
  bool in_u;
  std::vector<Rational> weights;  // weights of the components of an Exp factor
};

template <class S>
FactorCertificate certify_factor(const GaugeFactor<S>& f, const Weight& theta) {
  using K = typename GaugeFactor<S>::Kind;
  FactorCertificate c{f.describe(), false, false, {}};
  const int n = theta.size();
  if (f.kind == K::Exp) {
    bool nonneg = true, pos = true;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (is_zero(f.m(a, b))) continue;
        Rational r = component_weight(theta, a, b, f.i);
        c.weights.push_back(r);
        nonneg = nonneg && r >= 0;
        pos = pos && r > 0;
      }
    c.in_p_hat = nonneg;
    c.in_u = pos;
    return c;
  }
  auto ff = detail::finite_form(f, n);
  auto lm = laurent_membership(ff->g, theta);
  c.in_p_hat = lm.member;
  c.in_u = lm.member && lm.unipotent;
  return c;
}

struct WordCertificate {
  bool in_p_hat = true;
  bool in_u = true;
  std::vector<FactorCertificate> factors;
};

template <class S>
WordCertificate certify_word(const GaugeWord<S>& w, const Weight& theta) {
  WordCertificate c;
  for (const auto& f : w.factors) {
    c.factors.push_back(certify_factor(f, theta));
    c.in_p_hat = c.in_p_hat && c.factors.back().in_p_hat;
    c.in_u = c.in_u && c.factors.back().in_u;
  }
  return c;
}

}  // namespace logahoric
