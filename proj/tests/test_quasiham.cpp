#include <doctest.h>

#include "logahoric/quasiham.hpp"
#include "support.hpp"

using namespace logahoric;
using namespace testsupport;

namespace {

struct Config {
  const char* name;
  GroupSpec group;
  Weight p0;
  int u_dim;
};

std::vector<Config> configs() {
  return {{"SL2 Borel", {Family::SL, 2}, w({"1", "0"}), 1},
          {"GL2 Borel", {Family::GL, 2}, w({"1", "0"}), 1},
          {"GL3 Borel", {Family::GL, 3}, w({"2", "1", "0"}), 3},
          {"GL3 (2,1)", {Family::GL, 3}, w({"1", "1", "0"}), 2},
          {"GL2 P0=G", {Family::GL, 2}, w({"0", "0"}), 0}};
}

cplx gauss(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  double re = nd(rng);
  return {re, nd(rng)};
}

MatC combo(const std::vector<MatC>& basis, std::mt19937_64& rng) {
  MatC out = MatC::Zero(basis[0].rows(), basis[0].cols());
  for (const auto& b : basis) out += gauss(rng) * b;
  return out;
}

QHTangent random_tangent(const QHSpace& s, std::mt19937_64& rng) {
  return {combo(s.g_basis(), rng), combo(s.p_basis(), rng)};
}

double dist(const MatC& a, const MatC& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("two_form: antisymmetry and the p = 1 reduction") {
  std::mt19937_64 rng(41);
  for (const auto& c : configs()) {
    QHSpace s(c.group, ParabolicData(c.p0));
    auto m = random_point(s, rng);
    auto x = random_tangent(s, rng), y = random_tangent(s, rng);
    CHECK(std::abs(two_form(s, m, x, x)) < 1e-12);
    CHECK(std::abs(two_form(s, m, x, y) + two_form(s, m, y, x)) < 1e-12);
    m.p = MatC::Identity(s.n(), s.n());
    cplx expect = (x.gamma * y.P).trace() - (y.gamma * x.P).trace();
    CHECK(std::abs(two_form(s, m, x, y) - expect) < 1e-12);
  }
}

TEST_CASE("moment map: examples and equivariance") {
  std::mt19937_64 rng(42);
  for (const auto& c : configs()) {
    QHSpace s(c.group, ParabolicData(c.p0));
    auto m = random_point(s, rng);
    const int n = s.n();
    auto [mg, ml] = moment(s, QHPoint{MatC::Identity(n, n), m.p});
    CHECK(dist(mg, m.p) < 1e-14);
    CHECK(dist(ml, s.p0.levi_projection(m.p).inverse()) < 1e-12);
    auto [ig, il] = moment(s, QHPoint{m.C, MatC::Identity(n, n)});
    CHECK(dist(ig, MatC::Identity(n, n)) < 1e-12);
    CHECK(dist(il, MatC::Identity(n, n)) < 1e-14);

    // (g, q) . (C, p) = (q C g^-1, q p q^-1)
    MatC g = random_point(s, rng).C;
    MatC q = s.levi_projection(random_point(s, rng).p);
    QHPoint moved{MatC(q * m.C * g.inverse()), MatC(q * m.p * q.inverse())};
    auto [a, b] = moment(s, m);
    auto [a2, b2] = moment(s, moved);
    CHECK(dist(a2, MatC(g * a * g.inverse())) < 1e-10);
    CHECK(dist(b2, MatC(q * b * q.inverse())) < 1e-10);

    // invariance of the two-form: tangents move by Ad_q
    auto x = random_tangent(s, rng), y = random_tangent(s, rng);
    auto adq = [&](const QHTangent& t) {
      return QHTangent{MatC(q * t.gamma * q.inverse()), MatC(q * t.P * q.inverse())};
    };
    CHECK(std::abs(two_form(s, moved, adq(x), adq(y)) - two_form(s, m, x, y)) < 1e-9);
  }
}

TEST_CASE("analytic moment derivative matches finite differences") {
  std::mt19937_64 rng(43);
  for (const auto& c : configs()) {
    QHSpace s(c.group, ParabolicData(c.p0));
    auto m = random_point(s, rng);
    for (int k = 0; k < 5; ++k) {
      auto t = random_tangent(s, rng);
      auto a = moment_derivative(s, m, t), f = moment_derivative_fd(s, m, t);
      CHECK(dist(a.theta_g, f.theta_g) < 1e-6);
      CHECK(dist(a.theta_bar_g, f.theta_bar_g) < 1e-6);
      CHECK(dist(a.theta_l, f.theta_l) < 1e-6);
      CHECK(dist(a.theta_bar_l, f.theta_bar_l) < 1e-6);
    }
  }
}

TEST_CASE("QH2") {
  std::mt19937_64 rng(44);
  for (const auto& c : configs()) {
    CAPTURE(std::string(c.name));
    QHSpace s(c.group, ParabolicData(c.p0));
    const auto basis = tangent_basis(s);
    auto zero = check_qh2(s, random_point(s, rng), MatC::Zero(s.n(), s.n()), MatC::Zero(s.n(), s.n()), basis);
    CHECK(zero.residual == 0.0);
    for (int k = 0; k < 20; ++k) {
      auto m = random_point(s, rng);
      auto r = check_qh2(s, m, combo(s.g_basis(), rng), combo(s.l_basis(), rng), basis);
      CHECK(r.residual < 1e-8);
    }
  }
}

TEST_CASE("QH3: kernel is the U-orbit tangent space") {
  std::mt19937_64 rng(45);
  for (const auto& c : configs()) {
    CAPTURE(std::string(c.name));
    QHSpace s(c.group, ParabolicData(c.p0));
    for (int k = 0; k < 10; ++k) {
      auto r = check_qh3(s, random_point(s, rng));
      CHECK(r.u_dim == c.u_dim);
      CHECK(r.kernel_dim == c.u_dim);
      CHECK(r.subspace_match);
      CHECK_FALSE(r.grey);
    }
  }
}

TEST_CASE("QH1") {
  std::mt19937_64 rng(46);
  for (const auto& c : configs()) {
    CAPTURE(std::string(c.name));
    QHSpace s(c.group, ParabolicData(c.p0));
    auto m = random_point(s, rng);
    auto t = random_tangent(s, rng);
    CHECK(qh1_residual(s, m, t, t, t, 1e-3) < 1e-12);
    for (int k = 0; k < 5; ++k) {
      auto r = check_qh1(s, m, random_tangent(s, rng), random_tangent(s, rng), random_tangent(s, rng));
      CHECK(r.residual_fine < 1e-4);
      CHECK(r.monotone);
    }
  }
}

TEST_CASE("scaled form and a conjugated Levi lift give the same verdicts") {
  std::mt19937_64 rng(47);
  for (const auto& c : configs()) {
    CAPTURE(std::string(c.name));
    QHSpace s(c.group, ParabolicData(c.p0), 2.0);
    QHSpace lifted(c.group, ParabolicData(c.p0));
    lifted.lift = random_point(lifted, rng).p;
    for (const QHSpace* sp : {&s, &lifted}) {
      auto m = random_point(*sp, rng);
      CHECK(check_qh2(*sp, m, combo(sp->g_basis(), rng), combo(sp->l_basis(), rng), tangent_basis(*sp)).residual < 1e-8);
      auto q3 = check_qh3(*sp, m);
      CHECK(q3.kernel_dim == c.u_dim);
      CHECK(q3.subspace_match);
      auto q1 = check_qh1(*sp, m, random_tangent(*sp, rng), random_tangent(*sp, rng), random_tangent(*sp, rng));
      CHECK(q1.residual_fine < 1e-4);
      CHECK(q1.monotone);
    }
  }
}

TEST_CASE("C-hat membership") {
  QHSpace s({Family::GL, 3}, ParabolicData(w({"1", "1", "0"})));
  std::mt19937_64 rng(48);
  const MatC id = MatC::Identity(3, 3);
  // p in U with trivial class
  MatC p = id;
  p(0, 2) = 2.0;
  p(1, 2) = -1.0;
  MatC C = random_point(s, rng).C;
  MatC M = C.inverse() * p * C;
  CHECK(c_hat_membership(s, M, C, id).member);

  // Levi eigenvalues that differ from the certificate
  MatC p2 = p;
  p2(0, 0) = 2.0;
  CHECK_FALSE(c_hat_membership(s, MatC(C.inverse() * p2 * C), C, id).member);

  // q in P0 acting by (q C, q p q^-1) fixes (M, P) and keeps membership
  MatC cls = s.p0.levi_projection(random_point(s, rng).p);
  MatC p3 = cls;
  p3(1, 2) = 0.7;
  MatC M3 = C.inverse() * p3 * C;
  REQUIRE(c_hat_membership(s, M3, C, cls).member);
  MatC q = random_point(s, rng).p;
  MatC C2 = q * C;
  CHECK(dist(MatC(C2.inverse() * (q * p3 * q.inverse()) * C2), M3) < 1e-10);
  CHECK(c_hat_membership(s, M3, C2, cls).member);
  // and a conjugator outside P0 gives a point outside G x P0
  MatC bad = id;
  bad(2, 0) = 1.0;
  CHECK_FALSE(c_hat_membership(s, M3, MatC(bad * C), cls).p_in_p0);
}
