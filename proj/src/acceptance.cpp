#include "logahoric/acceptance.hpp"

#include "logahoric/quasiham.hpp"
#include "logahoric/random.hpp"
#include "logahoric/rootcomb.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

namespace logahoric::accept {

namespace {

using io::Json;
using Clock = std::chrono::steady_clock;
using namespace rootcomb;

double dist(const MatC& a, const MatC& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::uint64_t mix(std::uint64_t seed, int id) {
  // splitmix64 step so neighbouring seeds give unrelated streams
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Any component other than the residue diagonal must be resonant.
template <class S>
bool normal_shape_ok(const LaurentConnection<S>& a, const NormalData& d) {
  for (const auto& [i, m] : a.coeffs())
    for (int x = 0; x < a.n(); ++x)
      for (int y = 0; y < a.n(); ++y) {
        if (is_zero(m(x, y)) || (x == y && i == 0)) continue;
        if (!resonant(d, x, y, i)) return false;
      }
  return true;
}

// ---- 1, 2: root combinatorics ----

void counts_e8(CriterionResult& r, rnd::Rng&) {
  auto e8 = make_root_datum('E', 8);
  long long parahoric = parahoric_class_count(e8), parabolic = parabolic_class_count(e8);
  r.details["parahoric_classes"] = parahoric;
  r.details["parabolic_classes"] = parabolic;
  r.pass = parahoric == 511 && parabolic == 256;
}

void g2_levi(CriterionResult& r, rnd::Rng&) {
  auto g2 = make_root_datum('G', 2);
  Json found = Json::array();
  for (unsigned m : proper_affine_subsets(g2)) {
    auto nodes = nodes_of_mask(m, g2.rank + 1);
    auto lt = levi_type_of_affine_subset(g2, nodes);
    if (lt.str() == "A2") found.push_back(nodes);
  }
  r.details["a2_subsets"] = found;
  r.pass = !found.empty();
}

// ---- 3: round trips ----

template <class S>
void round_trip_instance(rnd::Rng& rng, int n, double& worst_m, double& worst_a, int& parabolic_mismatch,
                         int& theta_mismatch) {
  auto inst = rnd::normal_instance<S>(rng, n);
  const NormalData& d = inst.data;

  // Betti -> de Rham -> Betti
  MatC M = monodromy_from_parts(to_complex(inst.nil), d).M;
  auto fb = from_betti(M, d.phi(), d.tau, d.sigma);
  if (!(fb.theta == d.theta)) ++theta_mismatch;
  auto back = to_betti(fb.connection, fb.theta, weight_zero_part(fb.connection, fb.theta).b);
  worst_m = std::max(worst_m, dist(back.datum.M, M));
  if (!(back.datum.parabolic == ParabolicData(d.phi()))) ++parabolic_mismatch;

  // de Rham -> Betti -> de Rham
  const Weight& theta = d.theta;
  auto A = gauge_transform(rnd::p_hat_word<S>(rng, theta, 3), rnd::perturb_positive(rng, inst.normal, theta));
  LaurentConnection<S> clean = A;
  if constexpr (!is_exact_v<S>) clean = clean_to_A_theta(A, theta);
  auto r = to_betti(A, theta, weight_zero_part(clean, theta).b);
  auto fb2 = from_betti(r.datum.M, r.params.phi(), r.params.tau, r.params.sigma);
  if (!(fb2.theta == theta)) ++theta_mismatch;
  LaurentConnection<cplx> normal;
  if constexpr (is_exact_v<S>) normal = r.normal.normalized.template cast<cplx>();
  else normal = r.normal.normalized;
  worst_a = std::max(worst_a, distance(fb2.connection, normal));
}

void round_trips(CriterionResult& r, rnd::Rng& rng) {
  double worst_m = 0, worst_a = 0;
  int parabolic_mismatch = 0, theta_mismatch = 0;
  const int instances = 200;
  for (int k = 0; k < instances; ++k) {
    const int n = 2 + k % 2;
    if (k % 4 < 2) round_trip_instance<Rational>(rng, n, worst_m, worst_a, parabolic_mismatch, theta_mismatch);
    else round_trip_instance<cplx>(rng, n, worst_m, worst_a, parabolic_mismatch, theta_mismatch);
  }
  r.details["instances"] = instances;
  r.details["max_M_error"] = worst_m;
  r.details["max_normal_form_error"] = worst_a;
  r.details["parabolic_mismatches"] = parabolic_mismatch;
  r.details["theta_mismatches"] = theta_mismatch;
  r.pass = worst_m < 1e-8 && worst_a < 1e-8 && parabolic_mismatch == 0 && theta_mismatch == 0;
}

// ---- 4: ODE oracle ----

void ode_oracle(CriterionResult& r, rnd::Rng& rng) {
  double worst = 0;
  int incomplete = 0;
  for (int k = 0; k < 20; ++k) {
    // default truncation covers the weight spread the generator allows
    auto inst = rnd::normal_instance<cplx>(rng, 2 + k % 2);
    auto nf = normalize(inst.normal, inst.data);
    if (!nf.complete) {
      ++incomplete;
      continue;
    }
    worst = std::max(worst, dist(ode_monodromy(inst.normal).M, monodromy_of_normal(nf, inst.data).M));
  }
  LaurentConnection<Rational> res(GroupSpec{Family::GL, 2}, 2);
  MatQ a0 = zeros<Rational>(2, 2), a1 = zeros<Rational>(2, 2);
  a0(0, 0) = Rational(1);
  a1(0, 1) = Rational(1);
  res.set_coeff(0, a0);
  res.set_coeff(1, a1);
  MatC expect = MatC::Identity(2, 2);
  expect(0, 1) = kTwoPiI;
  const double resonant_error = dist(ode_monodromy(res).M, expect);
  r.details["instances"] = 20;
  r.details["incomplete"] = incomplete;
  r.details["max_error"] = worst;
  r.details["resonant_example_error"] = resonant_error;
  r.pass = incomplete == 0 && worst < 1e-6 && resonant_error < 1e-6;
}

// ---- 5: normalization ----

// Conditioning of Ad_g applied to A: roundoff in the float gauge action scales with |x|^2 |A|.
template <class S>
double gauge_scale(const GaugeWord<S>& w, const LaurentConnection<S>& a) {
  double ma = 0, mg = 0;
  for (const auto& [i, m] : a.coeffs()) ma = std::max(ma, max_abs(m));
  for (const auto& f : w.factors)
    if (f.m.size()) mg = std::max(mg, max_abs(f.m));
  return std::max(1.0, mg * mg * ma);
}

template <class S>
void normalization_instance(rnd::Rng& rng, int n, double& worst_gauge, double& worst_abs, int& bad) {
  auto inst = rnd::normal_instance<S>(rng, n);
  auto A = rnd::perturb_positive(rng, inst.normal, inst.data.theta);
  auto res = normalize(A, inst.data);
  bool ok = res.complete && normal_shape_ok(res.normalized, inst.data);
  for (const auto& c : res.retained) ok = ok && resonant(inst.data, c.a, c.b, c.i);
  for (const auto& c : res.eliminated) ok = ok && !resonant(inst.data, c.a, c.b, c.i);
  const double gap = jet_distance(gauge_transform(res.gauge, A), res.normalized);
  if constexpr (is_exact_v<S>) ok = ok && gap == 0.0;
  if constexpr (!is_exact_v<S>) {
    worst_gauge = std::max(worst_gauge, gap / gauge_scale(res.gauge, A));
    worst_abs = std::max(worst_abs, gap);
  }
  auto again = normalize(res.normalized, inst.data);
  ok = ok && again.gauge.empty();
  if constexpr (is_exact_v<S>) ok = ok && same_coefficients(again.normalized, res.normalized);
  else ok = ok && distance(again.normalized, res.normalized) < 1e-10;
  bad += ok ? 0 : 1;
}

void normalization(CriterionResult& r, rnd::Rng& rng) {
  double worst = 0, worst_abs = 0;
  int bad_exact = 0, bad_float = 0;
  for (int k = 0; k < 50; ++k) normalization_instance<Rational>(rng, 2 + k % 2, worst, worst_abs, bad_exact);
  for (int k = 0; k < 50; ++k) normalization_instance<cplx>(rng, 2 + k % 2, worst, worst_abs, bad_float);
  r.details["exact_instances"] = 50;
  r.details["float_instances"] = 50;
  r.details["exact_failures"] = bad_exact;
  r.details["float_failures"] = bad_float;
  r.details["float_gauge_error_scaled"] = worst;
  r.details["float_gauge_error_absolute"] = worst_abs;
  r.pass = bad_exact == 0 && bad_float == 0 && worst < 1e-10;
}

// ---- 6: gauge invariance ----

void gauge_invariance(CriterionResult& r, rnd::Rng& rng) {
  const int instances = 10, words = 50;
  int mismatches = 0;
  for (int k = 0; k < instances; ++k) {
    const int n = 2 + k % 2;
    auto inst = rnd::normal_instance<Rational>(rng, n);
    const Weight& theta = inst.data.theta;
    auto A = rnd::perturb_positive(rng, inst.normal, theta);
    auto rep = weight_zero_part(A, theta).b;
    auto base = to_betti(A, theta, rep);
    auto inv = jordan_invariants(base.datum.M);
    for (int j = 0; j < words; ++j) {
      auto gA = gauge_transform(rnd::p_hat_word<Rational>(rng, theta, 1 + j % 4), A);
      auto t = to_betti(gA, theta, rep);
      bool same = same_invariants(jordan_invariants(t.datum.M), inv) && t.datum.parabolic == base.datum.parabolic &&
                  same_invariants(t.datum.certificate.invariants, base.datum.certificate.invariants);
      mismatches += same ? 0 : 1;
    }
  }
  r.details["instances"] = instances;
  r.details["words_per_instance"] = words;
  r.details["mismatches"] = mismatches;
  r.pass = mismatches == 0;
}

// ---- 7: quasi-Hamiltonian axioms ----

MatC combo(const std::vector<MatC>& basis, rnd::Rng& rng) {
  MatC out = MatC::Zero(basis[0].rows(), basis[0].cols());
  for (const auto& b : basis) out += rnd::gaussian_c(rng) * b;
  return out;
}

QHTangent random_tangent(const QHSpace& s, rnd::Rng& rng) { return {combo(s.g_basis(), rng), combo(s.p_basis(), rng)}; }

struct QHConfig {
  const char* name;
  GroupSpec group;
  Weight p0;
};

void quasi_hamiltonian(CriterionResult& r, rnd::Rng& rng) {
  const std::vector<QHConfig> configs = {
      {"SL2 Borel", {Family::SL, 2}, Weight::parse({"1", "0"})},
      {"GL2 Borel", {Family::GL, 2}, Weight::parse({"1", "0"})},
      {"GL3 Borel", {Family::GL, 3}, Weight::parse({"2", "1", "0"})},
      {"GL3 (2,1)", {Family::GL, 3}, Weight::parse({"1", "1", "0"})},
      {"GL2 P0=G", {Family::GL, 2}, Weight::parse({"0", "0"})}};
  const int points = 100;
  bool pass = true;
  Json per = Json::array();
  for (const auto& c : configs) {
    QHSpace s(c.group, ParabolicData(c.p0));
    const auto basis = tangent_basis(s);
    double qh2 = 0, qh1 = 0;
    int kernel_bad = 0, nonmonotone = 0, grey = 0;
    for (int k = 0; k < points; ++k) {
      auto m = random_point(s, rng);
      qh2 = std::max(qh2, check_qh2(s, m, combo(s.g_basis(), rng), combo(s.l_basis(), rng), basis).residual);
      auto q3 = check_qh3(s, m);
      kernel_bad += (q3.kernel_dim == q3.u_dim && q3.subspace_match) ? 0 : 1;
      grey += q3.grey ? 1 : 0;
      auto q1 = check_qh1(s, m, random_tangent(s, rng), random_tangent(s, rng), random_tangent(s, rng));
      qh1 = std::max(qh1, q1.residual_fine);
      nonmonotone += q1.monotone ? 0 : 1;
    }
    Json j;
    j["config"] = c.name;
    j["dim_u"] = ParabolicData(c.p0).dim_unipotent();
    j["qh2_max_residual"] = qh2;
    j["qh3_kernel_failures"] = kernel_bad;
    j["qh3_grey_points"] = grey;
    j["qh1_max_residual"] = qh1;
    j["qh1_nonmonotone"] = nonmonotone;
    per.push_back(j);
    pass = pass && qh2 < 1e-8 && kernel_bad == 0 && qh1 < 1e-4 && nonmonotone == 0;
  }
  r.details["points_per_config"] = points;
  r.details["configs"] = per;
  r.pass = pass;
}

// ---- 8: preservation of A_theta and weight-zero equivariance ----

void generator_suites(CriterionResult& r, rnd::Rng& rng) {
  int not_preserved = 0, not_in_p_hat = 0, exact_equivariance = 0;
  double float_equivariance = 0;
  const int cases = 100;
  for (int k = 0; k < cases; ++k) {
    const int n = 2 + k % 2;
    Weight theta = rnd::weight(rng, n, Rational(0), Rational(2), 4);
    auto A = rnd::connection_in_A_theta<Rational>(rng, GroupSpec{Family::GL, n}, theta, 4);
    for (int kind = 0; kind < 5; ++kind) {
      auto f = rnd::p_hat_generator<Rational>(rng, theta, kind);
      not_in_p_hat += certify_factor(f, theta).in_p_hat ? 0 : 1;
      not_preserved += membership_A_theta(gauge_transform(f, A), theta).member ? 0 : 1;
    }
    auto lf = rnd::p_hat_generator<Rational>(rng, theta, 1);
    MatQ lhs = weight_zero_part(gauge_transform(lf, A), theta).b;
    MatQ rhs = lf.m * weight_zero_part(A, theta).b * inverse(lf.m);
    exact_equivariance += lhs == rhs ? 0 : 1;

    auto Ac = rnd::connection_in_A_theta<cplx>(rng, GroupSpec{Family::GL, n}, theta, 3);
    auto lc = rnd::p_hat_generator<cplx>(rng, theta, 1);
    MatC lhs_c = weight_zero_part(gauge_transform(lc, Ac), theta).b;
    MatC rhs_c = lc.m * weight_zero_part(Ac, theta).b * lc.m.inverse();
    float_equivariance = std::max(float_equivariance, dist(lhs_c, rhs_c));
  }
  r.details["cases"] = cases;
  r.details["generators_not_certified"] = not_in_p_hat;
  r.details["a_theta_violations"] = not_preserved;
  r.details["exact_equivariance_failures"] = exact_equivariance;
  r.details["float_equivariance_error"] = float_equivariance;
  r.pass = not_in_p_hat == 0 && not_preserved == 0 && exact_equivariance == 0 && float_equivariance < 1e-10;
}

// ---- 9: stabilizer check vs fixed points ----

void stabilizer_fixed_points(CriterionResult& r, rnd::Rng&) {
  struct Case {
    const char* where;
    Weight theta;
  };
  const std::vector<Case> cases = {{"interior", Weight::parse({"1/3", "1/12", "-1/4"})},
                                   {"wall theta1=theta2", Weight::parse({"1/4", "1/4", "-1/4"})},
                                   {"wall theta2=theta3", Weight::parse({"1/4", "-1/4", "-1/4"})},
                                   {"wall theta1-theta3=1", Weight::parse({"1/2", "0", "-1/2"})}};
  bool pass = true;
  Json per = Json::array();
  for (const auto& c : cases) {
    auto s = stabilizer_sweep(3, 2, {c.theta});
    Json j;
    j["theta"] = io::to_json(c.theta);
    j["where"] = c.where;
    j["cases"] = s.cases;
    j["fixed"] = s.fixed;
    j["agree"] = s.agree;
    per.push_back(j);
    pass = pass && s.agree == s.cases && s.cases == 6 * 125;
  }
  r.details["sweeps"] = per;
  r.pass = pass;
}

// ---- 10: stabilizer dimensions ----

void stabilizer_dimensions(CriterionResult& r, rnd::Rng& rng) {
  int unequal = 0, unstable = 0;
  Json dims = Json::array();
  for (int k = 0; k < 30; ++k) {
    auto inst = rnd::normal_instance<Rational>(rng, 2 + k % 2);
    auto res = normalize(rnd::perturb_positive(rng, inst.normal, inst.data.theta), inst.data);
    auto s = stabilizer_correspondence(res, inst.data);
    unequal += s.centralizer_dim == s.gauge_dim ? 0 : 1;
    unstable += s.stable ? 0 : 1;
    dims.push_back(Json::array({s.centralizer_dim, s.gauge_dim}));
  }
  r.details["instances"] = 30;
  r.details["dimension_pairs"] = dims;
  r.details["unequal"] = unequal;
  r.details["window_unstable"] = unstable;
  r.pass = unequal == 0 && unstable == 0;
}

// ---- 11: parameter table ----

void parameter_table(CriterionResult& r, rnd::Rng& rng) {
  int exact_failures = 0;
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 3;
    Weight tau = rnd::weight(rng, n, Rational(-2), Rational(2), 6), theta = rnd::weight(rng, n, Rational(0), Rational(1), 6);
    std::vector<double> sigma(static_cast<std::size_t>(n));
    for (auto& s : sigma) s = rnd::uniform_real(rng, -1, 1);
    auto t = hodge_rotation(tau, sigma, theta);
    // the table read entrywise: Dolbeault (-tau, -(phi + sigma)/2), de Rham
    // (theta, -(tau + sigma)), Betti (tau + theta, exp 2 pi i (tau + sigma));
    // sigma is the imaginary part of the eigenvalue.
    for (int a = 0; a < n; ++a) {
      const auto sa = static_cast<std::size_t>(a);
      Rational phi = tau[a] + theta[a];
      bool ok = t.dolbeault.weights[a] == -tau[a] && t.dolbeault.eigen_real[a] == -phi / Rational(2) &&
                t.dolbeault.eigen_imag[sa] == -sigma[sa] / 2 && t.derham.weights[a] == theta[a] &&
                t.derham.eigen_real[a] == -tau[a] && t.derham.eigen_imag[sa] == -sigma[sa] &&
                t.betti_weights[a] == phi;
      exact_failures += ok ? 0 : 1;
      cplx e = std::exp(kTwoPiI * cplx(tau[a].to_double(), sigma[sa]));
      worst = std::max(worst, std::abs(t.betti_eigenvalues[sa] - e) / std::max(1.0, std::abs(e)));
    }
  }
  r.details["parameter_sets"] = 20;
  r.details["exact_entry_failures"] = exact_failures;
  r.details["betti_eigenvalue_error"] = worst;
  r.pass = exact_failures == 0 && worst < 1e-12;
}

struct CriterionDef {
  const char* name;
  double budget;
  void (*run)(CriterionResult&, rnd::Rng&);
};

const CriterionDef kDefs[kCriteria] = {
    {"parahoric and parabolic counts for E8", 1.0, counts_e8},
    {"A2 Levi inside G2 from affine nodes", 1.0, g2_levi},
    {"Betti/de Rham round trips", 30.0, round_trips},
    {"ODE monodromy oracle", 0.0, ode_oracle},
    {"normalization correctness", 0.0, normalization},
    {"gauge invariance of the Betti map", 0.0, gauge_invariance},
    {"quasi-Hamiltonian axioms", 120.0, quasi_hamiltonian},
    {"A_theta preservation and weight-zero equivariance", 0.0, generator_suites},
    {"affine Weyl stabilizer check", 0.0, stabilizer_fixed_points},
    {"stabilizer dimensions", 0.0, stabilizer_dimensions},
    {"parameter rotation table", 0.0, parameter_table},
};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriteria) throw precondition_error("no criterion " + std::to_string(id));
  const CriterionDef& s = kDefs[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = s.name;
  r.budget_seconds = s.budget;
  r.details = Json::object();
  rnd::Rng rng(mix(seed, id));
  const auto start = Clock::now();
  try {
    s.run(r, rng);
  } catch (const std::exception& e) {
    r.pass = false;
    r.details["error"] = e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = s.budget <= 0 || r.seconds < s.budget;
  if (s.budget > 0) r.details["within_time_budget"] = in_time;
  r.pass = r.pass && in_time;
  return r;
}

std::vector<CriterionResult> run_suite(std::uint64_t seed, int threads, const std::vector<int>& only) {
  std::vector<int> ids = only;
  if (ids.empty())
    for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
  std::vector<CriterionResult> out(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < ids.size();) out[k] = run_criterion(ids[k], seed);
  };
  threads = std::clamp(threads, 1, static_cast<int>(ids.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

int threads_from_env() {
  const char* v = std::getenv("LOGAHORIC_THREADS");
  if (!v) return 1;
  int t = std::atoi(v);
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::clamp(t, 1, hw);
}

Json report_line(const CriterionResult& r, bool with_timing) {
  Json j;
  j["criterion"] = r.id;
  j["name"] = r.name;
  j["pass"] = r.pass;
  if (with_timing) j["seconds"] = r.seconds;
  j["details"] = r.details;
  return j;
}

}  // namespace logahoric::accept
