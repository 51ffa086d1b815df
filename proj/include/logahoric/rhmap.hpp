#pragma once

#include "logahoric/normalform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace logahoric {

// A representative of the Levi class C and the per-block Jordan invariants
// that certify membership.
struct ClassCertificate {
  MatC representative;
  std::vector<JordanInvariants> invariants;
};

struct EnrichedMonodromyDatum {
  MatC M;
  ParabolicData parabolic;  // P_phi
  ClassCertificate certificate;
};

// tau, sigma, theta and the nilpotent n of the weight-zero representative
// theta + tau + sigma + n.
struct BettiParameters {
  Weight theta;
  Weight tau;
  std::vector<double> sigma;
  MatC n;

  Weight phi() const { return theta + tau; }
  NormalData data() const { return {theta, tau, sigma}; }
};

// e^{2 pi i (tau + sigma)} e^{2 pi i n} with its invariants in the Levi of P_phi.
ClassCertificate class_certificate(const BettiParameters& p);

template <class S>
BettiParameters betti_parameters(const WeightZeroShape<S>& shape) {
  const int n = shape.data.n();
  BettiParameters p{shape.data.theta, shape.data.tau, shape.data.sigma, to_complex(shape.target)};
  for (int a = 0; a < n; ++a) p.n(a, a) = 0.0;
  return p;
}

struct EnrichedValidation {
  bool ok = false;
  std::vector<std::pair<int, int>> violations;  // entries of M outside P
  bool class_match = false;
  std::vector<JordanInvariants> levi_invariants;  // of pi(M), per Levi block
};

EnrichedValidation validate_enriched(const EnrichedMonodromyDatum& datum, double tol = 1e-9,
                                     double eig_tol = 1e-7);

template <class S>
struct BettiResult {
  EnrichedMonodromyDatum datum;
  BettiParameters params;
  PreparedConnection<S> prepared;
  NormalFormResult<S> normal;
  MonodromyData monodromy;
};

template <class S>
BettiResult<S> to_betti(const LaurentConnection<S>& a, const Weight& theta, const Mat<S>& orbit_rep) {
  BettiResult<S> out;
  if constexpr (is_exact_v<S>) out.prepared = prepare_weight_zero(a, theta, orbit_rep);
  else out.prepared = prepare_weight_zero(clean_to_A_theta(a, theta), theta, orbit_rep);
  const NormalData& d = out.prepared.shape.data;
  out.normal = normalize(out.prepared.connection, d);
  if (!out.normal.complete)
    throw truncation_overflow("known weights stop at " + out.normal.weight_bound.str() +
                              ", below spread(phi) = " + d.phi().spread().str());
  out.monodromy = monodromy_of_normal(out.normal, d);
  out.params = betti_parameters(out.prepared.shape);
  out.datum.M = out.monodromy.M;
  out.datum.parabolic = ParabolicData(d.phi());
  out.datum.certificate = class_certificate(out.params);
  if (!validate_enriched(out.datum).ok) throw postcondition_error("pi(M) is not in the certified Levi class");
  return out;
}

struct FromBettiResult {
  LaurentConnection<cplx> connection;
  Weight theta;
  MatC N;
};

// Inverse direction. M_s must equal e^{2 pi i (tau + sigma)} (diagonal).
FromBettiResult from_betti(const MatC& M, const Weight& phi, const Weight& tau, const std::vector<double>& sigma,
                           Family family = Family::GL, double tol = 1e-9);

// tau_j in (-1/2, 1/2] and sigma_j from diagonal semisimple eigenvalues.
std::pair<Weight, std::vector<double>> suggest_tau(const std::vector<cplx>& eigenvalues, long long max_den = 1000,
                                                   double tol = 1e-9);

struct OrbitTriple {
  Weight phi;
  ParabolicData parabolic;
  ClassCertificate certificate;
  BettiParameters params;
};

template <class S>
OrbitTriple orbit_to_triple(const Weight& theta, const Mat<S>& orbit_rep) {
  auto shape = normal_shape_representative(orbit_rep, theta);
  OrbitTriple t;
  t.params = betti_parameters(shape);
  t.phi = t.params.phi();
  t.parabolic = ParabolicData(t.phi);
  t.certificate = class_certificate(t.params);
  return t;
}

// phi up to permutation and matching Levi-block invariants.
bool same_triple(const OrbitTriple& x, const OrbitTriple& y, double eig_tol = 1e-7);

// ---- stabilizer dimensions ----

int centralizer_dimension(const MatC& M, const ParabolicData& p, Family family, double rel_tol = 1e-9);

// Kernel of X -> [X, A] + z X' on components of weight in [0, window].
int gauge_stabilizer_dimension(const LaurentConnection<cplx>& a, const Weight& theta, const Rational& window,
                               double rel_tol = 1e-9);

struct StabilizerCheck {
  int centralizer_dim = 0;
  int gauge_dim = 0;
  int gauge_dim_next = 0;  // with the window raised by one
  Rational window;
  bool stable = false;
  bool equal = false;
};

StabilizerCheck stabilizer_check_complex(const LaurentConnection<cplx>& normal, const NormalData& d);

template <class S>
StabilizerCheck stabilizer_correspondence(const NormalFormResult<S>& nf, const NormalData& d) {
  if (!nf.complete) throw truncation_overflow("normal form is incomplete; the stabilizer window is not covered");
  if constexpr (is_exact_v<S>) return stabilizer_check_complex(nf.normalized.template cast<cplx>(), d);
  else return stabilizer_check_complex(nf.normalized, d);
}

// ---- the three-column parameter table ----

struct HodgeColumn {
  Weight weights;
  Weight eigen_real;
  std::vector<double> eigen_imag;
};

struct HodgeTable {
  HodgeColumn dolbeault;
  HodgeColumn derham;
  Weight betti_weights;
  std::vector<cplx> betti_eigenvalues;  // exp(2 pi i (tau + sigma))
};

HodgeTable hodge_rotation(const Weight& tau, const std::vector<double>& sigma, const Weight& theta);

// ---- z^tau C z^-tau ----

// The Laurent element z^tau C z^-tau, or nothing when some exponent is not integral.
template <class S>
std::optional<LaurentMatrix<S>> tau_conjugate(const Mat<S>& c, const Weight& tau) {
  const int n = tau.size();
  LaurentMatrix<S> g;
  g.n = n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (is_zero(c(a, b))) continue;
      Rational e = tau[a] - tau[b];
      if (!e.is_integer()) return std::nullopt;
      g.add_entry(static_cast<int>(e.to_ll()), a, b, c(a, b));
    }
  return g;
}

}  // namespace logahoric
