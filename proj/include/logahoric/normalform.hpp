#pragma once

#include "logahoric/loopconn.hpp"

#include <optional>
#include <random>
#include <tuple>

namespace logahoric {

// Normal-form parameters: tau rational, sigma pure imaginary (stored as its
// imaginary parts), theta the weight of A_theta.
struct NormalData {
  Weight theta;
  Weight tau;
  std::vector<double> sigma;

  int n() const { return theta.size(); }
  Weight phi() const { return theta + tau; }
  bool sigma_zero() const {
    for (double s : sigma)
      if (s != 0.0) return false;
    return true;
  }
  cplx residue_entry(int a) const { return {tau[a].to_double(), sigma[static_cast<std::size_t>(a)]}; }
};

inline constexpr double kSigmaTol = 1e-9;

// The component E_ab z^i is resonant when its ad_(tau+sigma) eigenvalue
// equals i: tau_a - tau_b = i exactly and sigma_a = sigma_b.
inline bool resonant(const NormalData& d, int a, int b, int i) {
  return d.tau[a] - d.tau[b] == Rational(i) &&
         std::abs(d.sigma[static_cast<std::size_t>(a)] - d.sigma[static_cast<std::size_t>(b)]) <= kSigmaTol;
}

// nu = mu - i on E_ab z^i.
template <class S>
S nu_of(const NormalData& d, int a, int b, int i) {
  Rational re = d.tau[a] - d.tau[b] - Rational(i);
  if constexpr (is_exact_v<S>) {
    return re;
  } else {
    return {re.to_double(), d.sigma[static_cast<std::size_t>(a)] - d.sigma[static_cast<std::size_t>(b)]};
  }
}

template <class S>
S residue_value(const NormalData& d, int a) {
  if constexpr (is_exact_v<S>) return d.tau[a];
  else return d.residue_entry(a);
}

// tau + sigma as a diagonal matrix.
template <class S>
Mat<S> residue_diag(const NormalData& d) {
  Mat<S> m = zeros<S>(d.n(), d.n());
  for (int a = 0; a < d.n(); ++a) m(a, a) = residue_value<S>(d, a);
  return m;
}

struct ComponentRecord {
  int a, b, i;
  Rational level;
  cplx nu;
  cplx value;  // coefficient before elimination, or the retained coefficient
};

template <class S>
struct NormalFormResult {
  LaurentConnection<S> normalized;
  GaugeWord<S> gauge;  // g = ... g2 g1, the last factor acts first
  std::vector<Rational> levels;
  std::vector<ComponentRecord> retained;
  std::vector<ComponentRecord> eliminated;
  Rational weight_bound;  // all components up to this weight are known
  bool complete = false;  // weight_bound >= spread(phi): the normal form is exact
};

namespace detail {

template <class S>
void validate_data(const LaurentConnection<S>& a, const NormalData& d) {
  const int n = a.n();
  if (d.theta.size() != n || d.tau.size() != n || static_cast<int>(d.sigma.size()) != n)
    throw precondition_error("theta, tau and sigma must have size n");
  if constexpr (is_exact_v<S>) {
    if (!d.sigma_zero()) throw precondition_error("the exact path requires sigma = 0");
  }
}

// Weight-zero part must be (tau + sigma + sum a_i z^i) with resonant a_i and
// nilpotent sum a_i.
template <class S>
void check_weight_zero(const LaurentConnection<S>& a, const NormalData& d, double tol) {
  const int n = a.n();
  Mat<S> nil = zeros<S>(n, n);
  for (int x = 0; x < n; ++x) {
    S v = a.entry(0, x, x);
    if (!is_zero(S(v - residue_value<S>(d, x)), tol))
      throw precondition_error("weight-zero part: residue diagonal differs from tau + sigma");
  }
  for (const auto& [i, m] : a.coeffs())
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (x == y && i == 0) continue;
        if (is_zero(m(x, y), tol) || component_weight(d.theta, x, y, i) != 0) continue;
        if (!resonant(d, x, y, i))
          throw precondition_error("weight-zero part has a non-resonant component at (" + std::to_string(x) + "," +
                                   std::to_string(y) + ") z^" + std::to_string(i));
        nil(x, y) += m(x, y);
      }
  if (!is_nilpotent(nil, 1e-10)) throw precondition_error("weight-zero part: nilpotent part is not nilpotent");
}

template <class S>
LaurentMatrix<S> weight_zero_nilpotent(const LaurentConnection<S>& a, const NormalData& d) {
  LaurentMatrix<S> nz;
  nz.n = a.n();
  for (const auto& [i, m] : a.coeffs())
    for (int x = 0; x < a.n(); ++x)
      for (int y = 0; y < a.n(); ++y)
        if (!(x == y && i == 0) && !is_zero(m(x, y)) && component_weight(d.theta, x, y, i) == 0)
          nz.add_entry(i, x, y, m(x, y));
  return nz;
}

}  // namespace detail

template <class S>
NormalFormResult<S> normalize(const LaurentConnection<S>& a, const NormalData& d, double tol = 1e-10) {
  const int n = a.n();
  detail::validate_data(a, d);
  if (!membership_A_theta(a, d.theta).member) throw precondition_error("connection is not in A_theta");
  detail::check_weight_zero(a, d, tol);

  NormalFormResult<S> res;
  res.weight_bound = known_weight_bound(a, d.theta);
  res.complete = res.weight_bound >= d.phi().spread();
  LaurentConnection<S> cur = a;
  const LaurentMatrix<S> nz = detail::weight_zero_nilpotent(a, d);
  const int max_terms = 2 * n * n + 1;

  for (const Rational& r : realized_weights(d.theta, Rational(0), res.weight_bound)) {
    if (r <= 0) continue;
    res.levels.push_back(r);
    const auto comps = loop_graded_piece(d.theta, r);
    const int m = static_cast<int>(comps.size());
    std::map<std::tuple<int, int, int>, int> where;
    std::vector<S> b(m), nu(m);
    std::vector<bool> res_c(m);
    for (int c = 0; c < m; ++c) {
      const auto& k = comps[static_cast<std::size_t>(c)];
      where[{k.a, k.b, k.i}] = c;
      b[c] = cur.entry(k.i, k.a, k.b);
      nu[c] = nu_of<S>(d, k.a, k.b, k.i);
      res_c[c] = resonant(d, k.a, k.b, k.i);
    }
    // ad_n restricted to the non-resonant part of L g(r); it preserves nu.
    auto ad_n = [&](const std::vector<S>& x) {
      LaurentMatrix<S> xm;
      xm.n = n;
      for (int c = 0; c < m; ++c)
        if (!is_zero(x[c])) xm.add_entry(comps[c].i, comps[c].a, comps[c].b, x[c]);
      LaurentMatrix<S> br = nz * xm - xm * nz;
      std::vector<S> out(m, S(0));
      for (const auto& [k, mat] : br.coeffs)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) {
            if (is_zero(mat(p, q))) continue;
            auto it = where.find({p, q, k});
            if (it == where.end() || res_c[it->second])
              throw postcondition_error("ad_n left the non-resonant part of the level");
            out[it->second] = mat(p, q);
          }
      return out;
    };
    // (D + ad_n) x = b on nu != 0, via the terminating Neumann series.
    std::vector<S> x(m, S(0)), term(m, S(0));
    bool any = false;
    for (int c = 0; c < m; ++c)
      if (!res_c[c] && !is_zero(b[c])) {
        term[c] = b[c] / nu[c];
        any = true;
      }
    if (any) {
      for (int c = 0; c < m; ++c) x[c] = term[c];
      bool vanished = false;
      for (int it = 0; it < max_terms; ++it) {
        auto t = ad_n(term);
        double mag = 0;
        for (int c = 0; c < m; ++c) {
          term[c] = res_c[c] ? S(0) : S(-t[c] / nu[c]);
          mag = std::max(mag, magnitude(term[c]));
        }
        if (mag == 0.0 || (!is_exact_v<S> && mag < 1e-300)) {
          vanished = true;
          break;
        }
        for (int c = 0; c < m; ++c) x[c] += term[c];
      }
      if (!vanished && is_exact_v<S>) throw postcondition_error("Neumann series did not terminate");
    }

    GaugeWord<S> level_word;
    for (int c = 0; c < m; ++c) {
      if (is_zero(x[c])) continue;
      Mat<S> xm = zeros<S>(n, n);
      xm(comps[c].a, comps[c].b) = x[c];
      level_word.factors.push_back(GaugeFactor<S>::exp(xm, comps[c].i));
    }
    if (!level_word.empty()) {
      cur = gauge_transform(level_word, cur);
      res.gauge = level_word * res.gauge;
    }

    double scale = 1.0;
    for (int c = 0; c < m; ++c) scale = std::max(scale, magnitude(b[c]));
    for (int c = 0; c < m; ++c) {
      const auto& k = comps[c];
      S now = cur.entry(k.i, k.a, k.b);
      ComponentRecord rec{k.a, k.b, k.i, r, to_complex(nu[c]), to_complex(b[c])};
      if (res_c[c]) {
        if (!is_zero(S(now - b[c]), tol * scale))
          throw postcondition_error("a resonant component changed during elimination");
        if (!is_zero(now)) res.retained.push_back(rec);
      } else {
        if (!is_zero(now, tol * scale)) throw postcondition_error("non-resonant component survived elimination");
        if (!is_zero(now)) cur.add_entry(k.i, k.a, k.b, S(-now));
        if (!is_zero(b[c])) res.eliminated.push_back(rec);
      }
    }
    cur.prune();
  }

  // Only weights up to the bound are meaningful.
  Eigen::MatrixXi k = cur.known_order();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      long long lim = (res.weight_bound - (d.theta[x] - d.theta[y])).floor().to_ll();
      k(x, y) = static_cast<int>(std::min<long long>(k(x, y), lim));
    }
  cur.set_known_order(k);

  for (const auto& [i, mat] : cur.coeffs())
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (is_zero(mat(x, y))) continue;
        if (x == y && i == 0) {
          if (!is_zero(S(mat(x, y) - residue_value<S>(d, x)), tol))
            throw postcondition_error("residue diagonal changed during normalization");
        } else if (!resonant(d, x, y, i)) {
          throw postcondition_error("normalized connection has a non-resonant coefficient");
        }
        if (component_weight(d.theta, x, y, i) == 0 && !(x == y && i == 0)) {
          ComponentRecord rec{x, y, i, Rational(0), to_complex(nu_of<S>(d, x, y, i)), to_complex(mat(x, y))};
          res.retained.push_back(rec);
        }
      }
  res.normalized = cur;
  return res;
}

// ---- weight-zero preparation ----

template <class S>
struct WeightZeroShape {
  Mat<S> target;  // theta + tau + sigma + n, an element of h_theta in Jordan shape
  NormalData data;
};

namespace detail {

struct ClusterShape {
  Rational re;
  double im;
  std::vector<int> blocks;  // Jordan block sizes, decreasing
};

inline std::vector<int> blocks_from_ranks(int mult, const std::vector<int>& ranks) {
  // blocks of size >= k: rho_{k-1} - rho_k
  std::vector<int> ge(static_cast<std::size_t>(mult) + 2, 0);
  int prev = mult;
  for (int k = 1; k <= mult; ++k) {
    int rk = k - 1 < static_cast<int>(ranks.size()) ? ranks[static_cast<std::size_t>(k - 1)] : 0;
    ge[static_cast<std::size_t>(k)] = prev - rk;
    prev = rk;
  }
  std::vector<int> sizes;
  for (int k = mult; k >= 1; --k) {
    int exact = ge[static_cast<std::size_t>(k)] - ge[static_cast<std::size_t>(k) + 1];
    for (int j = 0; j < exact; ++j) sizes.push_back(k);
  }
  return sizes;
}

template <class S>
std::vector<ClusterShape> cluster_shapes(const Mat<S>& sub, long long max_den) {
  const int m = static_cast<int>(sub.rows());
  std::vector<ClusterShape> out;
  const JordanInvariants inv = jordan_invariants(to_complex(sub));
  for (const auto& e : inv.blocks) {
    ClusterShape cs;
    double tol = 1e-6 * std::max(1.0, std::abs(e.eigenvalue));
    cs.re = rationalize(e.eigenvalue.real(), max_den, tol);
    cs.im = e.eigenvalue.imag();
    std::vector<int> ranks = e.ranks;
    if constexpr (is_exact_v<S>) {
      if (std::abs(cs.im) > tol) throw precondition_error("exact path needs real rational eigenvalues");
      cs.im = 0.0;
      Mat<S> shifted = sub - cs.re * identity<S>(m), p = identity<S>(m);
      ranks.clear();
      for (int k = 1; k <= e.multiplicity; ++k) {
        p = (p * shifted).eval();
        ranks.push_back(rank(p) - (m - e.multiplicity));
      }
      if (ranks.back() != 0) throw precondition_error("eigenvalues of the orbit representative are not rational");
    }
    cs.blocks = blocks_from_ranks(e.multiplicity, ranks);
    out.push_back(cs);
  }
  std::sort(out.begin(), out.end(), [](const ClusterShape& x, const ClusterShape& y) {
    if (x.re != y.re) return x.re > y.re;
    return x.im < y.im;
  });
  return out;
}

}  // namespace detail

// Jordan-form representative of the H_theta orbit of B in h_theta: per class
// of indices with equal theta mod Z, eigenvalues by decreasing real part,
// blocks by decreasing size.
template <class S>
WeightZeroShape<S> normal_shape_representative(const Mat<S>& b, const Weight& theta, long long max_den = 1000) {
  const int n = theta.size();
  auto h = centralizer_h_theta(theta);
  if (!h.contains(b, 1e-12)) throw precondition_error("orbit representative is not in h_theta");
  WeightZeroShape<S> out;
  out.target = zeros<S>(n, n);
  out.data.theta = theta;
  out.data.tau = Weight(n);
  out.data.sigma.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& cls : h.classes) {
    Mat<S> sub(cls.size(), cls.size());
    for (std::size_t p = 0; p < cls.size(); ++p)
      for (std::size_t q = 0; q < cls.size(); ++q) sub(p, q) = b(cls[p], cls[q]);
    std::size_t pos = 0;
    for (const auto& cs : detail::cluster_shapes(sub, max_den))
      for (int size : cs.blocks)
        for (int j = 0; j < size; ++j, ++pos) {
          int a = cls[pos];
          out.data.tau[a] = cs.re - theta[a];
          out.data.sigma[static_cast<std::size_t>(a)] = cs.im;
          if constexpr (is_exact_v<S>) out.target(a, a) = cs.re;
          else out.target(a, a) = cplx(cs.re.to_double(), cs.im);
          if (j + 1 < size) out.target(a, cls[pos + 1]) = S(1);
        }
  }
  return out;
}

// B itself when it already has the normal shape: rational real diagonal
// (up to tol), and off-diagonal entries only between indices with equal
// diagonal, forming a nilpotent matrix.
template <class S>
std::optional<WeightZeroShape<S>> admissible_shape(const Mat<S>& b, const Weight& theta, double tol = 1e-9,
                                                   long long max_den = 1000) {
  const int n = theta.size();
  if (!centralizer_h_theta(theta).contains(b, 1e-12)) return std::nullopt;
  WeightZeroShape<S> out;
  out.target = b;
  out.data.theta = theta;
  out.data.tau = Weight(n);
  out.data.sigma.assign(static_cast<std::size_t>(n), 0.0);
  Weight phi(n);
  for (int a = 0; a < n; ++a) {
    if constexpr (is_exact_v<S>) {
      phi[a] = b(a, a);
    } else {
      cplx v = b(a, a);
      try {
        phi[a] = rationalize(v.real(), max_den, tol);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      out.data.sigma[static_cast<std::size_t>(a)] = v.imag();
      out.target(a, a) = cplx(phi[a].to_double(), v.imag());
    }
    out.data.tau[a] = phi[a] - theta[a];
  }
  Mat<S> nil = b;
  for (int a = 0; a < n; ++a) nil(a, a) = S(0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && !is_zero(nil(x, y)) &&
          (phi[x] != phi[y] || std::abs(out.data.sigma[static_cast<std::size_t>(x)] -
                                        out.data.sigma[static_cast<std::size_t>(y)]) > kSigmaTol))
        return std::nullopt;
  if (!detail::is_nilpotent(nil, 1e-10)) return std::nullopt;
  return out;
}

template <class S>
struct PreparedConnection {
  LaurentConnection<S> connection;
  Mat<S> h;  // element of H_theta; the gauge is z^-theta h z^theta
  WeightZeroShape<S> shape;
};

// Solve Ad_h B = T for h in the H_theta pattern.
template <class S>
Mat<S> conjugator_in_h_theta(const Mat<S>& b, const Mat<S>& t, const Weight& theta) {
  const int n = theta.size();
  auto hth = centralizer_h_theta(theta);
  std::vector<std::pair<int, int>> pat;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (hth.contains_entry(x, y)) pat.emplace_back(x, y);
  Mat<S> lin = zeros<S>(n * n, static_cast<int>(pat.size()));
  for (std::size_t c = 0; c < pat.size(); ++c) {
    Mat<S> e = zeros<S>(n, n);
    e(pat[c].first, pat[c].second) = S(1);
    Mat<S> img = t * e - e * b;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) lin(x * n + y, static_cast<int>(c)) = img(x, y);
  }
  Mat<S> ker = kernel_basis(lin, 1e-7);
  if (ker.cols() == 0) throw precondition_error("orbit mismatch: no conjugator in H_theta");
  std::mt19937_64 rng(0x5eedULL);
  for (int attempt = 0; attempt < 20; ++attempt) {
    Mat<S> h = zeros<S>(n, n);
    for (int k = 0; k < ker.cols(); ++k) {
      S coef;
      if constexpr (is_exact_v<S>) coef = S(std::uniform_int_distribution<int>(1, 7)(rng));
      else coef = cplx(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
      for (std::size_t c = 0; c < pat.size(); ++c) h(pat[c].first, pat[c].second) += coef * ker(static_cast<int>(c), k);
    }
    if constexpr (is_exact_v<S>) {
      if (determinant(h) != S(0)) return h;
    } else {
      Eigen::JacobiSVD<MatC> svd(h);
      const auto& s = svd.singularValues();
      if (s(n - 1) > 1e-6 * s(0)) return h;
    }
  }
  throw precondition_error("orbit mismatch: no invertible conjugator in H_theta");
}

template <class S>
PreparedConnection<S> prepare_weight_zero(const LaurentConnection<S>& a, const Weight& theta, const Mat<S>& orbit_rep,
                                          double snap_tol = 1e-6) {
  const int n = a.n();
  if (!lies_over(a, theta, orbit_rep)) throw precondition_error("connection does not lie over the given orbit");
  PreparedConnection<S> out;
  auto direct = admissible_shape(orbit_rep, theta);
  out.shape = direct ? *direct : normal_shape_representative(orbit_rep, theta);
  const Mat<S> b = weight_zero_part(a, theta).b;
  const Mat<S>& t = out.shape.target;
  if constexpr (is_exact_v<S>) {
    out.h = b == t ? identity<S>(n) : conjugator_in_h_theta(b, t, theta);
  } else {
    // rounding in theta + tau must not trigger a spurious conjugation
    const double close = 1e-12 * std::max(1.0, max_abs(t));
    out.h = max_abs(Mat<S>(b - t)) <= close ? identity<S>(n) : conjugator_in_h_theta(b, t, theta);
  }
  LaurentConnection<S> c = gauge_transform(GaugeFactor<S>::levi(out.h, theta), a);
  // Put the weight-zero part exactly on the representative.
  double scale = std::max(1.0, max_abs(t));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Rational di = theta[y] - theta[x];
      if (!di.is_integer()) continue;
      int i = static_cast<int>(di.to_ll());
      S want = t(x, y);
      if (x == y) want -= scalar_from<S>(theta[x]);
      S have = c.entry(i, x, y);
      if (!is_zero(S(have - want), snap_tol * scale))
        throw postcondition_error("weight-zero part does not match the representative after conjugation");
      if (!is_zero(S(have - want))) c.add_entry(i, x, y, S(want - have));
    }
  c.prune();
  out.connection = c;
  return out;
}

// ---- shearing and monodromy ----

template <class S>
struct ShearResult {
  Weight lambda;  // floor(tau)
  LaurentConnection<S> logarithmic;
};

template <class S>
ShearResult<S> shear_to_logarithmic(const NormalFormResult<S>& nf, const NormalData& d) {
  ShearResult<S> out;
  out.lambda = d.tau.floor();
  out.logarithmic = gauge_transform(GaugeFactor<S>::torus(-out.lambda), nf.normalized);
  const int n = d.n();
  for (const auto& [i, m] : out.logarithmic.coeffs()) {
    if (i < 0) throw postcondition_error("sheared connection is not logarithmic");
    if (i > 0) continue;
    for (int a = 0; a < n; ++a) {
      S want = residue_value<S>(d, a) - scalar_from<S>(out.lambda[a]);
      if (!is_zero(S(m(a, a) - want), 1e-12)) throw postcondition_error("sheared residue has the wrong semisimple part");
    }
  }
  return out;
}

struct MonodromyData {
  MatC M;
  MatC R;  // sigma + N
  MatC N;
  MatC t;  // exp(2 pi i tau)
};

MatC exp_two_pi_i_diag(const Weight& tau);
MatC sigma_matrix(const std::vector<double>& sigma);
MonodromyData monodromy_from_parts(const MatC& n_sum, const NormalData& d);

template <class S>
MonodromyData monodromy_of_normal(const NormalFormResult<S>& nf, const NormalData& d) {
  const int n = d.n();
  MatC sum = MatC::Zero(n, n);
  for (const auto& [i, m] : nf.normalized.coeffs()) sum += to_complex(m);
  MatC nil = sum - to_complex(residue_diag<S>(d));
  return monodromy_from_parts(nil, d);
}

struct OdeMonodromy {
  MatC M;
  double error_estimate = 0;
  int steps = 0;
};

// RK4 along z = e^{is}, s in [0, 2 pi], for dPhi/ds = i A(z) Phi with Phi(0) = 1;
// the error estimate compares against the half-step-count run.
OdeMonodromy ode_monodromy_oracle(const LaurentConnection<cplx>& a, int steps = 1 << 14);

template <class S>
OdeMonodromy ode_monodromy(const LaurentConnection<S>& a, int steps = 1 << 14) {
  if constexpr (is_exact_v<S>) return ode_monodromy_oracle(a.template cast<cplx>(), steps);
  else return ode_monodromy_oracle(a, steps);
}

}  // namespace logahoric
