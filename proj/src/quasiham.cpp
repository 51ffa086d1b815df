#include "logahoric/quasiham.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace logahoric {

namespace {

MatC unit_c(int n, int a, int b) {
  MatC e = MatC::Zero(n, n);
  e(a, b) = 1.0;
  return e;
}

// Basis of the entries allowed by pred, traceless for SL.
template <class Pred>
std::vector<MatC> pattern_basis(int n, Family f, Pred allowed) {
  std::vector<MatC> out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && allowed(a, b)) out.push_back(unit_c(n, a, b));
  if (f == Family::GL) {
    for (int a = 0; a < n; ++a) out.push_back(unit_c(n, a, a));
  } else {
    for (int a = 0; a + 1 < n; ++a) out.push_back(unit_c(n, a, a) - unit_c(n, a + 1, a + 1));
  }
  return out;
}

MatC ad(const MatC& g, const MatC& x) { return g * x * g.inverse(); }

// ((e^{ad X} - 1) / ad X) Y, or with -ad X for the left-trivialized variant.
MatC dexp(const MatC& x, const MatC& y, bool left) {
  MatC term = y, out = y;
  double fact = 1.0;
  for (int k = 1; k < 12; ++k) {
    term = left ? MatC(term * x - x * term) : MatC(x * term - term * x);
    fact *= (k + 1);
    out += term / fact;
  }
  return out;
}

MatC det_normalize(const MatC& g) {
  const int n = static_cast<int>(g.rows());
  cplx d = g.determinant();
  return g / std::pow(d, 1.0 / n);
}

double cond(const MatC& g) {
  Eigen::JacobiSVD<MatC> svd(g);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

}  // namespace

QHSpace::QHSpace(GroupSpec g, ParabolicData p, double scale)
    : group(g), p0(std::move(p)), lift(MatC::Identity(g.n, g.n)), form_scale(scale) {
  if (p0.n() != g.n) throw precondition_error("parabolic and group sizes differ");
}

MatC QHSpace::levi_projection(const MatC& x) const {
  MatC li = lift.inverse();
  return lift * p0.levi_projection(MatC(li * x * lift)) * li;
}

std::vector<MatC> QHSpace::g_basis() const {
  return pattern_basis(n(), group.family, [](int, int) { return true; });
}

std::vector<MatC> QHSpace::p_basis() const {
  return pattern_basis(n(), group.family, [&](int a, int b) { return p0.in_parabolic(a, b); });
}

std::vector<MatC> QHSpace::l_basis() const {
  std::vector<MatC> out;
  MatC li = lift.inverse();
  for (const auto& b : pattern_basis(n(), group.family, [&](int a, int c) { return p0.in_levi(a, c); }))
    out.push_back(lift * b * li);
  return out;
}

std::vector<MatC> QHSpace::u_basis() const {
  std::vector<MatC> out;
  for (int a = 0; a < n(); ++a)
    for (int b = 0; b < n(); ++b)
      if (p0.in_unipotent(a, b)) out.push_back(unit_c(n(), a, b));
  return out;
}

cplx two_form(const QHSpace& s, const QHPoint& m, const QHTangent& x, const QHTangent& y) {
  const MatC pi = m.p.inverse();
  auto adp = [&](const MatC& v) { return MatC(m.p * v * pi); };
  cplx first = s.pairing(x.gamma, adp(y.gamma)) - s.pairing(y.gamma, adp(x.gamma));
  cplx second = s.pairing(x.gamma, MatC(y.P + adp(y.P))) - s.pairing(y.gamma, MatC(x.P + adp(x.P)));
  return 0.5 * (first + second);
}

std::pair<MatC, MatC> moment(const QHSpace& s, const QHPoint& m) {
  return {MatC(m.C.inverse() * m.p * m.C), MatC(s.levi_projection(m.p).inverse())};
}

MomentDerivative moment_derivative(const QHSpace& s, const QHPoint& m, const QHTangent& v) {
  const MatC ci = m.C.inverse(), pi = m.p.inverse();
  MomentDerivative d;
  d.theta_g = ci * (-pi * v.gamma * m.p + v.P + v.gamma) * m.C;
  d.theta_bar_g = ci * (-v.gamma + m.p * v.P * pi + m.p * v.gamma * pi) * m.C;
  const MatC h = s.levi_projection(m.p), hdot = s.levi_projection(v.P);
  d.theta_l = -h * hdot * h.inverse();
  d.theta_bar_l = -hdot;
  return d;
}

MomentDerivative moment_derivative_fd(const QHSpace& s, const QHPoint& m, const QHTangent& v, double h) {
  auto at = [&](double e) {
    return moment(s, QHPoint{MatC(exp_alg(MatC(e * v.gamma)) * m.C), MatC(m.p * exp_alg(MatC(e * v.P)))});
  };
  auto [g0, l0] = moment(s, m);
  auto [gp, lp] = at(h);
  auto [gm, lm] = at(-h);
  MatC dg = (gp - gm) / (2 * h), dl = (lp - lm) / (2 * h);
  MomentDerivative d;
  d.theta_g = g0.inverse() * dg;
  d.theta_bar_g = dg * g0.inverse();
  d.theta_l = l0.inverse() * dl;
  d.theta_bar_l = dl * l0.inverse();
  return d;
}

QHTangent fundamental_field(const QHSpace&, const QHPoint& m, const MatC& x_g, const MatC& x_l) {
  // G: C exp(t X) gives gamma = Ad_C X. L: exp(-t Y) (C, p) gives gamma = -Y, P = Y - Ad_{p^-1} Y.
  QHTangent v;
  v.gamma = ad(m.C, x_g) - x_l;
  v.P = x_l - m.p.inverse() * x_l * m.p;
  return v;
}

std::vector<QHTangent> tangent_basis(const QHSpace& s) {
  std::vector<QHTangent> out;
  const MatC z = MatC::Zero(s.n(), s.n());
  for (const auto& e : s.g_basis()) out.push_back({e, z});
  for (const auto& e : s.p_basis()) out.push_back({z, e});
  return out;
}

QHPoint random_point(const QHSpace& s, std::mt19937_64& rng) {
  const int n = s.n();
  std::normal_distribution<double> nd(0.0, 1.0);
  auto gauss = [&](double sc) {
    MatC x(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) x(a, b) = sc * cplx(nd(rng), nd(rng));
    return x;
  };
  QHPoint m;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 100) throw postcondition_error("could not sample a well-conditioned point");
    MatC c = MatC::Identity(n, n) + gauss(0.5);
    MatC h = s.p0.levi_projection(MatC(MatC::Identity(n, n) + gauss(0.5)));
    MatC u = MatC::Identity(n, n);
    MatC r = gauss(0.5);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (s.p0.in_unipotent(a, b)) u(a, b) = r(a, b);
    MatC p = s.lift * h * s.lift.inverse() * u;
    if (s.group.family == Family::SL) {
      c = det_normalize(c);
      p = det_normalize(p);
    }
    if (cond(c) < 20 && cond(p) < 20) {
      m.C = c;
      m.p = p;
      return m;
    }
  }
}

QH2Report check_qh2(const QHSpace& s, const QHPoint& m, const MatC& x_g, const MatC& x_l,
                    const std::vector<QHTangent>& tangents) {
  QH2Report r;
  const QHTangent v = fundamental_field(s, m, x_g, x_l);
  for (const auto& y : tangents) {
    const MomentDerivative d = moment_derivative(s, m, y);
    const MomentDerivative f = moment_derivative_fd(s, m, y);
    for (const auto& [a, b] : {std::pair{&d.theta_g, &f.theta_g}, std::pair{&d.theta_bar_g, &f.theta_bar_g},
                               std::pair{&d.theta_l, &f.theta_l}, std::pair{&d.theta_bar_l, &f.theta_bar_l}})
      r.fd_discrepancy = std::max(r.fd_discrepancy, (*a - *b).cwiseAbs().maxCoeff());
    cplx lhs = two_form(s, m, v, y);
    cplx rhs = 0.5 * (s.pairing(MatC(d.theta_g + d.theta_bar_g), x_g) + s.pairing(MatC(d.theta_l + d.theta_bar_l), x_l));
    r.residual = std::max(r.residual, std::abs(lhs - rhs));
  }
  if (r.fd_discrepancy > 1e-4)
    throw postcondition_error("analytic moment derivative disagrees with finite differences");
  return r;
}

QH3Report check_qh3(const QHSpace& s, const QHPoint& m) {
  const int n = s.n();
  const auto basis = tangent_basis(s);
  const auto gb = s.g_basis(), pb = s.p_basis();
  const int dim = static_cast<int>(basis.size());
  MatC a = MatC::Zero(dim + 2 * n * n, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) a(i, j) = two_form(s, m, basis[i], basis[j]);
    const MomentDerivative d = moment_derivative(s, m, basis[j]);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        a(dim + x * n + y, j) = d.theta_g(x, y);
        a(dim + n * n + x * n + y, j) = d.theta_l(x, y);
      }
  }
  QH3Report r;
  const RankInfo info = rank_info(a, 1e-8);
  r.kernel_dim = dim - info.rank;
  r.grey = info.grey;
  r.smallest_kept = info.smallest_kept;
  r.largest_dropped = info.largest_dropped;

  // U-orbit tangents: gamma = X in u, P = Ad_{p^-1} X - X, in basis coordinates.
  const auto ub = s.u_basis();
  r.u_dim = static_cast<int>(ub.size());
  auto flatten = [&](const std::vector<MatC>& b) {
    MatC out(n * n, static_cast<int>(b.size()));
    for (std::size_t k = 0; k < b.size(); ++k)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out(x * n + y, static_cast<int>(k)) = b[k](x, y);
    return out;
  };
  const MatC fg = flatten(gb), fp = flatten(pb);
  MatC orbit = MatC::Zero(dim, r.u_dim);
  const MatC pi = m.p.inverse();
  for (int k = 0; k < r.u_dim; ++k) {
    const MatC& x = ub[static_cast<std::size_t>(k)];
    MatC pp = pi * x * m.p - x;
    VecC vx = Eigen::Map<const VecC>(MatC(x.transpose()).data(), n * n);
    VecC vp = Eigen::Map<const VecC>(MatC(pp.transpose()).data(), n * n);
    orbit.block(0, k, static_cast<int>(gb.size()), 1) = fg.colPivHouseholderQr().solve(vx);
    orbit.block(static_cast<int>(gb.size()), k, static_cast<int>(pb.size()), 1) = fp.colPivHouseholderQr().solve(vp);
  }
  if (r.u_dim == 0) {
    r.subspace_match = r.kernel_dim == 0;
    return r;
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, orbit.cwiseAbs().maxCoeff());
  const bool in_kernel = (a * orbit).cwiseAbs().maxCoeff() <= 1e-9 * scale;
  Eigen::JacobiSVD<MatC> svd(a, Eigen::ComputeFullV);
  MatC ker = svd.matrixV().rightCols(r.kernel_dim);
  MatC both(dim, r.kernel_dim + r.u_dim);
  both << ker, orbit;
  r.subspace_match = in_kernel && r.kernel_dim == r.u_dim && rank_info(orbit, 1e-8).rank == r.u_dim &&
                     rank_info(both, 1e-8).rank == r.u_dim;
  return r;
}

double qh1_residual(const QHSpace& s, const QHPoint& m, const QHTangent& t1, const QHTangent& t2,
                    const QHTangent& t3, double h) {
  // omega(d_j, d_k) at the chart point exp(e gamma_i) C, p exp(e P_i).
  auto f = [&](const QHTangent& ti, double e, const QHTangent& tj, const QHTangent& tk) {
    const MatC sg = e * ti.gamma, sp = e * ti.P;
    QHPoint q{MatC(exp_alg(sg) * m.C), MatC(m.p * exp_alg(sp))};
    QHTangent vj{dexp(sg, tj.gamma, false), dexp(sp, tj.P, true)};
    QHTangent vk{dexp(sg, tk.gamma, false), dexp(sp, tk.P, true)};
    return two_form(s, q, vj, vk);
  };
  auto deriv = [&](const QHTangent& ti, const QHTangent& tj, const QHTangent& tk) {
    return (f(ti, h, tj, tk) - f(ti, -h, tj, tk)) / (2 * h);
  };
  cplx d_omega = deriv(t1, t2, t3) - deriv(t2, t1, t3) + deriv(t3, t1, t2);

  const MomentDerivative a1 = moment_derivative(s, m, t1), a2 = moment_derivative(s, m, t2),
                         a3 = moment_derivative(s, m, t3);
  auto eta = [&](const MatC& x, const MatC& y, const MatC& z) { return 0.5 * s.pairing(MatC(x * y - y * x), z); };
  cplx pulled = eta(a1.theta_g, a2.theta_g, a3.theta_g) + eta(a1.theta_l, a2.theta_l, a3.theta_l);
  return std::abs(d_omega - pulled);
}

QH1Report check_qh1(const QHSpace& s, const QHPoint& m, const QHTangent& t1, const QHTangent& t2,
                    const QHTangent& t3) {
  QH1Report r;
  r.residual_coarse = qh1_residual(s, m, t1, t2, t3, 1e-3);
  r.residual_fine = qh1_residual(s, m, t1, t2, t3, 1e-4);
  r.monotone = r.residual_fine <= r.residual_coarse;
  return r;
}

CHatMembership c_hat_membership(const QHSpace& s, const MatC& M, const MatC& conjugator, const MatC& class_rep,
                                double tol) {
  CHatMembership r;
  const MatC p = conjugator * M * conjugator.inverse();
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  r.p_in_p0 = s.p0.contains(p, tol * scale);
  if (!r.p_in_p0) return r;
  const MatC levi = s.lift.inverse() * s.levi_projection(p) * s.lift;
  r.class_match = same_invariants(blockwise_invariants(levi, s.p0.levi_blocks()),
                                  blockwise_invariants(class_rep, s.p0.levi_blocks()));
  const MatC mu = moment(s, QHPoint{conjugator, p}).first;
  r.moment_consistent = (mu - M).cwiseAbs().maxCoeff() <= tol * scale;
  r.member = r.class_match && r.moment_consistent;
  return r;
}

}  // namespace logahoric
