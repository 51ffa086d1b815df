#include "logahoric/rhmap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace logahoric {

ClassCertificate class_certificate(const BettiParameters& p) {
  const int n = p.theta.size();
  MatC es = MatC::Zero(n, n);
  for (int a = 0; a < n; ++a) es(a, a) = std::exp(kTwoPiI * cplx(0.0, p.sigma[static_cast<std::size_t>(a)]));
  ClassCertificate c;
  c.representative = exp_two_pi_i_diag(p.tau) * es * exp_nilpotent<cplx>(MatC(kTwoPiI * p.n), 1e-8);
  c.invariants = blockwise_invariants(c.representative, ParabolicData(p.phi()).levi_blocks());
  return c;
}

EnrichedValidation validate_enriched(const EnrichedMonodromyDatum& datum, double tol, double eig_tol) {
  EnrichedValidation v;
  const auto& p = datum.parabolic;
  if (datum.M.rows() != p.n() || datum.M.cols() != p.n()) return v;
  const double scale = std::max(1.0, datum.M.cwiseAbs().maxCoeff());
  v.violations = p.violations(datum.M, tol * scale);
  v.levi_invariants = blockwise_invariants(p.levi_projection(datum.M), p.levi_blocks());
  auto cert = datum.certificate.invariants;
  if (cert.empty() && datum.certificate.representative.size() > 0)
    cert = blockwise_invariants(datum.certificate.representative, p.levi_blocks());
  v.class_match = same_invariants(v.levi_invariants, cert, eig_tol);
  v.ok = v.violations.empty() && v.class_match;
  return v;
}

FromBettiResult from_betti(const MatC& M, const Weight& phi, const Weight& tau, const std::vector<double>& sigma,
                           Family family, double tol) {
  const int n = phi.size();
  if (M.rows() != n || M.cols() != n || tau.size() != n || static_cast<int>(sigma.size()) != n)
    throw precondition_error("M, phi, tau and sigma must have matching sizes");
  const ParabolicData p(phi);
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (!p.contains(M, tol * scale)) throw precondition_error("M is not in P_phi");

  MatC ms = exp_two_pi_i_diag(tau);
  for (int a = 0; a < n; ++a) ms(a, a) *= std::exp(kTwoPiI * cplx(0.0, sigma[static_cast<std::size_t>(a)]));
  if ((ms * M - M * ms).cwiseAbs().maxCoeff() > 1e2 * tol * scale * scale)
    throw precondition_error("M_s mismatch: exp(2 pi i (tau + sigma)) does not commute with M");
  MatC u = ms.inverse() * M;
  MatC log_u;
  try {
    log_u = log_unipotent<cplx>(u, 1e3 * tol);
  } catch (const precondition_error&) {
    throw precondition_error("M_s mismatch: M_s^-1 M is not unipotent");
  }

  FromBettiResult out;
  out.N = log_u / kTwoPiI;
  out.theta = phi - tau;
  const double nscale = std::max(1.0, out.N.cwiseAbs().maxCoeff());
  int top = static_cast<int>((out.theta.spread() + phi.spread()).ceil().to_ll());
  std::vector<std::tuple<int, int, int>> comps;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (std::abs(out.N(a, b)) <= tol * nscale) {
        out.N(a, b) = 0.0;
        continue;
      }
      Rational d = tau[a] - tau[b];
      if (!d.is_integer())
        throw precondition_error("N has a component in a non-integral ad_tau eigenspace at (" + std::to_string(a) +
                                 "," + std::to_string(b) + ")");
      if (std::abs(sigma[static_cast<std::size_t>(a)] - sigma[static_cast<std::size_t>(b)]) > kSigmaTol)
        throw precondition_error("N does not commute with sigma");
      if (phi[a] < phi[b]) throw postcondition_error("N has a component of negative phi-weight");
      comps.emplace_back(a, b, static_cast<int>(d.to_ll()));
      top = std::max(top, static_cast<int>(d.to_ll()));
    }

  out.connection = LaurentConnection<cplx>(GroupSpec{family, n}, std::max(top, 0));
  for (int a = 0; a < n; ++a) out.connection.add_entry(0, a, a, cplx(tau[a].to_double(), sigma[static_cast<std::size_t>(a)]));
  for (const auto& [a, b, i] : comps) out.connection.add_entry(i, a, b, out.N(a, b));
  out.connection.prune();
  if (!membership_A_theta(out.connection, out.theta).member)
    throw postcondition_error("reconstructed connection is not in A_theta");
  return out;
}

std::pair<Weight, std::vector<double>> suggest_tau(const std::vector<cplx>& eigenvalues, long long max_den,
                                                   double tol) {
  const int n = static_cast<int>(eigenvalues.size());
  Weight tau(n);
  std::vector<double> sigma(eigenvalues.size());
  for (int a = 0; a < n; ++a) {
    cplx e = eigenvalues[static_cast<std::size_t>(a)];
    if (std::abs(e) == 0.0) throw precondition_error("monodromy eigenvalue is zero");
    tau[a] = rationalize(std::arg(e) / (2 * kPi), max_den, tol);
    if (tau[a] <= Rational(-1, 2)) tau[a] += Rational(1);
    sigma[static_cast<std::size_t>(a)] = -std::log(std::abs(e)) / (2 * kPi);
  }
  return {tau, sigma};
}

bool same_triple(const OrbitTriple& x, const OrbitTriple& y, double eig_tol) {
  auto sorted = [](const Weight& w) {
    auto e = w.entries();
    std::sort(e.begin(), e.end());
    return e;
  };
  return sorted(x.phi) == sorted(y.phi) &&
         same_invariants(x.certificate.invariants, y.certificate.invariants, eig_tol);
}

int centralizer_dimension(const MatC& M, const ParabolicData& p, Family family, double rel_tol) {
  const int n = p.n();
  std::vector<std::pair<int, int>> pat;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (p.in_parabolic(a, b)) pat.emplace_back(a, b);
  const int rows = n * n + (family == Family::SL ? 1 : 0);
  MatC lin = MatC::Zero(rows, static_cast<int>(pat.size()));
  for (std::size_t c = 0; c < pat.size(); ++c) {
    MatC e = MatC::Zero(n, n);
    e(pat[c].first, pat[c].second) = 1.0;
    MatC img = e * M - M * e;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) lin(x * n + y, static_cast<int>(c)) = img(x, y);
    if (family == Family::SL && pat[c].first == pat[c].second) lin(n * n, static_cast<int>(c)) = 1.0;
  }
  return static_cast<int>(pat.size()) - rank_info(lin, rel_tol).rank;
}

int gauge_stabilizer_dimension(const LaurentConnection<cplx>& a, const Weight& theta, const Rational& window,
                               double rel_tol) {
  const int n = a.n();
  std::vector<std::tuple<int, int, int>> unknowns;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Rational d = theta[x] - theta[y];
      for (long long i = (-d).ceil().to_ll(); i <= (window - d).floor().to_ll(); ++i)
        unknowns.emplace_back(x, y, static_cast<int>(i));
    }
  std::map<std::tuple<int, int, int>, int> row_of;
  std::vector<std::vector<std::pair<int, cplx>>> cols(unknowns.size());
  auto row = [&](int p, int q, int k) {
    auto it = row_of.find({p, q, k});
    if (it == row_of.end()) it = row_of.emplace(std::make_tuple(p, q, k), static_cast<int>(row_of.size())).first;
    return it->second;
  };
  for (std::size_t c = 0; c < unknowns.size(); ++c) {
    const auto [x, y, i] = unknowns[c];
    if (i != 0) cols[c].emplace_back(row(x, y, i), cplx(i));
    for (const auto& [k, m] : a.coeffs())
      for (int q = 0; q < n; ++q) {
        // E_xy A_k - A_k E_xy
        if (m(y, q) != 0.0 && component_weight(theta, x, q, i + k) <= window)
          cols[c].emplace_back(row(x, q, i + k), m(y, q));
        if (m(q, x) != 0.0 && component_weight(theta, q, y, i + k) <= window)
          cols[c].emplace_back(row(q, y, i + k), -m(q, x));
      }
  }
  std::map<int, int> trace_row;
  if (a.group().family == Family::SL)
    for (const auto& [x, y, i] : unknowns)
      if (x == y && !trace_row.count(i)) trace_row.emplace(i, static_cast<int>(row_of.size() + trace_row.size()));
  MatC lin = MatC::Zero(static_cast<int>(row_of.size() + trace_row.size()), static_cast<int>(unknowns.size()));
  for (std::size_t c = 0; c < unknowns.size(); ++c) {
    for (const auto& [r, v] : cols[c]) lin(r, static_cast<int>(c)) += v;
    const auto [x, y, i] = unknowns[c];
    if (x == y && trace_row.count(i)) lin(trace_row[i], static_cast<int>(c)) = 1.0;
  }
  return static_cast<int>(unknowns.size()) - rank_info(lin, rel_tol).rank;
}

StabilizerCheck stabilizer_check_complex(const LaurentConnection<cplx>& normal, const NormalData& d) {
  const int n = d.n();
  MatC sum = MatC::Zero(n, n);
  for (const auto& [i, m] : normal.coeffs()) sum += m;
  const MonodromyData mono = monodromy_from_parts(MatC(sum - to_complex(residue_diag<cplx>(d))), d);
  StabilizerCheck s;
  s.centralizer_dim = centralizer_dimension(mono.M, ParabolicData(d.phi()), normal.group().family);
  // Resonant components have weight at most spread(phi); past it the
  // linearized action is invertible level by level.
  s.window = d.phi().spread().ceil();
  s.gauge_dim = gauge_stabilizer_dimension(normal, d.theta, s.window);
  s.gauge_dim_next = gauge_stabilizer_dimension(normal, d.theta, s.window + Rational(1));
  s.stable = s.gauge_dim == s.gauge_dim_next;
  s.equal = s.stable && s.gauge_dim == s.centralizer_dim;
  return s;
}

HodgeTable hodge_rotation(const Weight& tau, const std::vector<double>& sigma, const Weight& theta) {
  const int n = tau.size();
  if (theta.size() != n || static_cast<int>(sigma.size()) != n)
    throw precondition_error("tau, sigma and theta must have the same size");
  const Weight phi = theta + tau;
  HodgeTable t;
  t.dolbeault.weights = -tau;
  t.dolbeault.eigen_real = Weight(n);
  for (int a = 0; a < n; ++a) t.dolbeault.eigen_real[a] = -phi[a] / Rational(2);
  for (double s : sigma) t.dolbeault.eigen_imag.push_back(-s / 2);
  t.derham.weights = theta;
  t.derham.eigen_real = -tau;
  for (double s : sigma) t.derham.eigen_imag.push_back(-s);
  t.betti_weights = phi;
  for (int a = 0; a < n; ++a)
    t.betti_eigenvalues.push_back(std::exp(kTwoPiI * cplx(tau[a].frac().to_double(), sigma[static_cast<std::size_t>(a)])));
  return t;
}

}  // namespace logahoric
