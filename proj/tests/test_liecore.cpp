#include <doctest.h>

#include "logahoric/liecore.hpp"

#include <random>

using namespace logahoric;

namespace {

MatC random_matrix(std::mt19937_64& rng, int n, double s = 1.0) {
  std::normal_distribution<double> nd(0.0, s);
  MatC m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

MatQ q(std::initializer_list<std::initializer_list<long long>> rows) {
  MatQ m(static_cast<int>(rows.size()), static_cast<int>(rows.begin()->size()));
  int i = 0;
  for (auto r : rows) {
    int j = 0;
    for (auto v : r) m(i, j++) = Rational(v);
    ++i;
  }
  return m;
}

Weight w(std::initializer_list<const char*> e) {
  std::vector<std::string> s(e.begin(), e.end());
  return Weight::parse(s);
}

}  // namespace

TEST_CASE("rational parsing and arithmetic") {
  CHECK(Rational::parse("3/6") == Rational(1, 2));
  CHECK(Rational::parse("-4") == Rational(-4));
  CHECK(Rational::parse(" 7 / -14 ") == Rational(-1, 2));
  CHECK(Rational(-7, 2).floor() == Rational(-4));
  CHECK(Rational(7, 2).floor() == Rational(3));
  CHECK(Rational(-7, 2).frac() == Rational(1, 2));
  CHECK(Rational(5, 3).str() == "5/3");
  CHECK_THROWS_AS(Rational::parse("1/0"), precondition_error);
  CHECK_THROWS_AS(Rational::parse("x"), precondition_error);
  CHECK(rationalize(0.75, 16, 1e-12) == Rational(3, 4));
  CHECK(rationalize(-1.0 / 3.0, 16, 1e-12) == Rational(-1, 3));
}

TEST_CASE("grade_by_weight") {
  MatQ x = q({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  auto g0 = grade_by_weight(x, Weight(3));
  REQUIRE(g0.size() == 1);
  CHECK(g0.begin()->first == Rational(0));

  auto g = grade_by_weight(q({{0, 1}, {0, 0}}), w({"1/2", "0"}));
  REQUIRE(g.size() == 1);
  CHECK(g.begin()->first == Rational(1, 2));

  Weight th = w({"1", "1/3", "0"});
  auto parts = grade_by_weight(x, th);
  std::set<Rational> keys;
  MatQ sum = zeros<Rational>(3, 3);
  MatQ d = th.diag<Rational>();
  for (const auto& [lam, comp] : parts) {
    keys.insert(lam);
    sum += comp;
    // [theta, X_lambda] = lambda X_lambda exactly
    CHECK(commutator(d, comp) == MatQ(lam * comp));
  }
  CHECK(sum == x);
  CHECK(keys == std::set<Rational>{Rational(-1), Rational(-2, 3), Rational(-1, 3), Rational(0),
                                   Rational(1, 3), Rational(2, 3), Rational(1)});
}

TEST_CASE("parabolic_from_weight patterns") {
  auto borel = parabolic_from_weight(w({"1", "0"}));
  CHECK(borel.in_parabolic(0, 1));
  CHECK_FALSE(borel.in_parabolic(1, 0));
  CHECK(borel.dim_unipotent() == 1);
  CHECK(borel.levi_blocks().size() == 2);

  auto whole = parabolic_from_weight(Weight(3));
  CHECK(whole.dim_unipotent() == 0);
  CHECK(whole.dim_parabolic(Family::GL) == 9);

  auto p21 = parabolic_from_weight(w({"1", "1", "0"}));
  CHECK(p21.levi_blocks() == std::vector<std::vector<int>>{{0, 1}, {2}});
  CHECK(p21.dim_unipotent() == 2);
  CHECK(p21.in_opposite(2, 0));
  CHECK(p21.is_closed_under_multiplication());
}

TEST_CASE("property: p_theta closed under bracket and u an ideal") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> den(1, 4), numd(-6, 6);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + trial % 3;
    Weight th(n);
    for (int i = 0; i < n; ++i) th[i] = Rational(numd(rng), den(rng));
    ParabolicData p(th);
    CHECK(p.is_closed_under_multiplication());
    MatC a = p.levi_projection(random_matrix(rng, n)), b = random_matrix(rng, n), u = random_matrix(rng, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (!p.in_parabolic(i, j)) a(i, j) = b(i, j) = 0;
        if (!p.in_unipotent(i, j)) u(i, j) = 0;
      }
    a += b;
    CHECK(p.contains(MatC(commutator(a, b))));
    MatC c = commutator(a, u);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!p.in_unipotent(i, j)) CHECK(std::abs(c(i, j)) == 0.0);
  }
}

TEST_CASE("centralizer_h_theta") {
  CHECK(centralizer_h_theta(Weight(2)).dim() == 4);
  auto half = centralizer_h_theta(w({"1/2", "0"}));
  CHECK(half.dim() == 2);
  CHECK_FALSE(half.contains_entry(0, 1));
  auto one = centralizer_h_theta(w({"1", "0"}));
  CHECK(one.dim() == 4);
  CHECK(one.graded.size() == 3);
  CHECK(one.graded.count(-1) == 1);
  CHECK(one.graded.count(1) == 1);

  // kernel of Ad(exp(2 pi i theta)) - Id as an independent oracle
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> den(1, 4), numd(-5, 5);
  for (int trial = 0; trial < 30; ++trial) {
    Weight th(3);
    for (int i = 0; i < 3; ++i) th[i] = Rational(numd(rng), den(rng));
    MatC t = one_param(th, std::exp(kTwoPiI * 0.0), 1);  // e^{2 pi i theta}
    auto h = centralizer_h_theta(th);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        bool fixed = std::abs(t(a, a) / t(b, b) - 1.0) < 1e-10;
        CHECK(fixed == h.contains_entry(a, b));
      }
  }
}

TEST_CASE("additive and multiplicative Jordan") {
  MatC d = MatC::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = -1;
  auto j1 = additive_jordan(d);
  CHECK((j1.semisimple - d).norm() < 1e-12);
  CHECK(j1.nilpotent.norm() < 1e-12);

  MatC u = MatC::Zero(3, 3);
  u(0, 1) = 1;
  u(1, 2) = 2;
  auto j2 = additive_jordan(u);
  CHECK(j2.semisimple.norm() < 1e-10);
  CHECK((j2.nilpotent - u).norm() < 1e-10);

  MatC x(2, 2);
  x << 2, 1, 0, 2;
  auto j3 = additive_jordan(x);
  CHECK((j3.semisimple - 2.0 * MatC::Identity(2, 2)).norm() < 1e-10);
  MatC e12 = MatC::Zero(2, 2);
  e12(0, 1) = 1;
  CHECK((j3.nilpotent - e12).norm() < 1e-10);

  auto mj = multiplicative_jordan(x);
  MatC gu(2, 2);
  gu << 1, 0.5, 0, 1;
  CHECK((mj.semisimple - 2.0 * MatC::Identity(2, 2)).norm() < 1e-10);
  CHECK((mj.unipotent - gu).norm() < 1e-10);

  // exact path with supplied eigenvalues
  MatQ xq = q({{2, 1, 0}, {0, 2, 0}, {0, 0, 5}});
  auto jq = additive_jordan<Rational>(xq, {Rational(2), Rational(2), Rational(5)});
  CHECK(jq.semisimple == q({{2, 0, 0}, {0, 2, 0}, {0, 0, 5}}));
  MatQ n3 = jq.nilpotent * jq.nilpotent * jq.nilpotent;
  CHECK(n3 == zeros<Rational>(3, 3));
  CHECK_THROWS_AS(additive_jordan<Rational>(xq, {Rational(2), Rational(5), Rational(5)}), numerical_error);
}

TEST_CASE("property: Jordan decomposition of conjugated Jordan forms") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 3;
    MatC j = MatC::Zero(n, n);
    std::uniform_int_distribution<int> pick(0, 1);
    cplx ev[3] = {cplx(0.3, 0.1), cplx(-1.2, 0), cplx(0.3, 0.1)};
    for (int i = 0; i < n; ++i) j(i, i) = ev[i % 2];
    for (int i = 0; i + 2 < n + 1; ++i)
      if (i + 2 < n && pick(rng)) j(i, i + 2) = 1.0;  // couples equal eigenvalues
    MatC g = random_matrix(rng, n) + 2.0 * MatC::Identity(n, n);
    MatC x = g * j * g.inverse();
    auto aj = additive_jordan(x);
    CHECK((aj.semisimple + aj.nilpotent - x).norm() < 1e-10);
    CHECK(commutator(aj.semisimple, aj.nilpotent).norm() < 1e-7);
    MatC p = aj.nilpotent;
    for (int k = 1; k < n; ++k) p = (p * aj.nilpotent).eval();
    CHECK(p.norm() < 1e-7);
  }
}

TEST_CASE("exp and log") {
  CHECK((exp_alg(MatC::Zero(3, 3)) - MatC::Identity(3, 3)).norm() < 1e-14);
  MatC g(2, 2);
  g << 1, 1, 0, 1;
  MatC e12 = MatC::Zero(2, 2);
  e12(0, 1) = 1;
  CHECK((log_unipotent(g) - e12).norm() < 1e-14);
  MatC d = MatC::Zero(2, 2);
  d(0, 0) = kTwoPiI / 3.0;
  MatC e = exp_alg(d);
  CHECK(std::abs(e(0, 0) - std::exp(kTwoPiI / 3.0)) < 1e-12);
  CHECK(std::abs(e(1, 1) - 1.0) < 1e-12);
  CHECK_THROWS_AS(log_unipotent(MatC(2.0 * g)), precondition_error);
  CHECK_THROWS_AS(log_semisimple(MatC::Zero(2, 2)), precondition_error);
  CHECK_THROWS_AS(log_semisimple(g), precondition_error);

  // principal branch: -1 maps to i pi
  MatC m1 = -MatC::Identity(1, 1);
  CHECK(std::abs(log_semisimple(m1)(0, 0) - cplx(0, kPi)) < 1e-12);

  std::mt19937_64 rng(5);
  for (int n = 2; n <= 6; ++n) {
    MatC nil = random_matrix(rng, n).triangularView<Eigen::StrictlyUpper>();
    MatC h = random_matrix(rng, n) + 3.0 * MatC::Identity(n, n);
    MatC uni = h * exp_alg(nil) * h.inverse();
    CHECK((exp_alg(log_unipotent(uni)) - uni).norm() / uni.norm() < 1e-12);
    CHECK((exp_nilpotent(nil) - exp_alg(nil)).norm() < 1e-10);
  }
  MatQ nq = q({{0, 1, 3}, {0, 0, 2}, {0, 0, 0}});
  CHECK(log_unipotent(exp_nilpotent(nq)) == nq);
}

TEST_CASE("one_param") {
  MatC a = one_param(w({"3", "-2", "0"}), cplx(-1, 0));
  CHECK(std::abs(a(0, 0) + 1.0) < 1e-12);
  CHECK(std::abs(a(1, 1) - 1.0) < 1e-12);
  MatC b = one_param(w({"1/2", "0"}), cplx(4, 0));
  CHECK(std::abs(b(0, 0) - 2.0) < 1e-12);
  CHECK(std::abs(b(1, 1) - 1.0) < 1e-12);
  // one turn around the origin multiplies by e^{2 pi i theta}
  Weight th = w({"1/3", "-1/4"});
  MatC turn = one_param(th, cplx(1, 0), 1);
  MatC t = MatC::Zero(2, 2);
  t(0, 0) = std::exp(kTwoPiI / 3.0);
  t(1, 1) = std::exp(-kTwoPiI / 4.0);
  CHECK((turn - t * one_param(th, cplx(1, 0))).norm() < 1e-12);
  CHECK_THROWS_AS(one_param(th, cplx(0, 0)), precondition_error);
}

TEST_CASE("jordan invariants distinguish ranks and ignore order") {
  MatC a = MatC::Zero(2, 2), b = MatC::Zero(2, 2);
  b(0, 1) = 1;
  CHECK_FALSE(same_invariants(jordan_invariants(a), jordan_invariants(b)));
  MatC c = MatC::Zero(3, 3), d = MatC::Zero(3, 3);
  c.diagonal() << 1, 2, 3;
  d.diagonal() << 3, 1, 2;
  CHECK(same_invariants(jordan_invariants(c), jordan_invariants(d)));
  d(1, 1) = 1.5;
  CHECK_FALSE(same_invariants(jordan_invariants(c), jordan_invariants(d)));
}

TEST_CASE("transfer_levi_class is independent of choices") {
  std::mt19937_64 rng(17);
  ParabolicData borel(w({"1", "0"}));
  for (int trial = 0; trial < 20; ++trial) {
    MatC rep = MatC::Zero(2, 2);
    rep.diagonal() << cplx(0.5, 0.2), cplx(-0.7, 1.0);
    MatC g = random_matrix(rng, 2) + 2.0 * MatC::Identity(2, 2);
    ParabolicFrame frame{borel, g};
    MatC t1 = transfer_levi_class(rep, g, borel);
    // another g in the same coset g P0 gives the same conjugated parabolic
    MatC p = MatC::Identity(2, 2);
    p(0, 1) = cplx(0.3, -0.4);
    p(0, 0) = 2.0;
    MatC g2 = g * p;
    ParabolicFrame frame2{borel, g2};
    MatC t2 = transfer_levi_class(rep, g2, borel);
    CHECK(same_invariants(frame.levi_invariants(t1), frame2.levi_invariants(t2)));
    CHECK(same_invariants(frame.levi_invariants(t1),
                          blockwise_invariants(rep, borel.levi_blocks())));
  }
  // (2,1) parabolic: two Levi-conjugate representatives give the same data
  ParabolicData p21(w({"1", "1", "0"}));
  for (int trial = 0; trial < 20; ++trial) {
    MatC rep = MatC::Zero(3, 3);
    rep(0, 0) = rep(1, 1) = cplx(0.5, 0.5);
    rep(0, 1) = 1.0;
    rep(2, 2) = -2.0;
    MatC m = p21.levi_projection(MatC(random_matrix(rng, 3) + 2.0 * MatC::Identity(3, 3)));
    MatC rep2 = m * rep * m.inverse();
    MatC g = random_matrix(rng, 3) + 2.0 * MatC::Identity(3, 3);
    ParabolicFrame frame{p21, g};
    auto a = frame.levi_invariants(transfer_levi_class(rep, g, p21));
    auto b = frame.levi_invariants(transfer_levi_class(rep2, g, p21));
    CHECK(same_invariants(a, b));
    CHECK(a[0].blocks.size() == 1);
    CHECK(a[0].blocks[0].ranks == std::vector<int>{1, 0});
  }
  MatC rep = MatC::Identity(2, 2);
  CHECK((transfer_levi_class(rep, MatC::Identity(2, 2), borel) - rep).norm() < 1e-14);
  MatC bad = MatC::Zero(2, 2);
  bad(1, 0) = 1;
  CHECK_THROWS_AS(transfer_levi_class(bad, MatC::Identity(2, 2), borel), precondition_error);
}
