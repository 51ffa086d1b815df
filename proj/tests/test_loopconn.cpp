#include <doctest.h>

#include "logahoric/random.hpp"
#include "support.hpp"

using namespace logahoric;
using namespace testsupport;

namespace {

LaurentConnection<Rational> conn(int n, int trunc, std::initializer_list<std::pair<int, MatQ>> cs) {
  LaurentConnection<Rational> a(GroupSpec{Family::GL, n}, trunc);
  for (const auto& [i, m] : cs) a.set_coeff(i, m);
  return a;
}

// Independent evaluation of a gauge factor at a point z.
template <class S>
MatC eval_factor(const GaugeFactor<S>& f, cplx z) {
  using K = typename GaugeFactor<S>::Kind;
  switch (f.kind) {
    case K::Constant: return to_complex(f.m);
    case K::TorusPower: return one_param(f.weight, z);
    case K::Exp: return exp_alg(MatC(to_complex(f.m) * std::pow(z, f.i)));
    case K::Levi: return one_param(-f.weight, z) * to_complex(f.m) * one_param(f.weight, z);
    case K::Laurent: return f.g.evaluate(z);
  }
  return {};
}

template <class S>
MatC eval_word(const GaugeWord<S>& w, int n, cplx z) {
  MatC g = MatC::Identity(n, n);
  for (const auto& f : w.factors) g = g * eval_factor(f, z);
  return g;
}

// Oracle for g[A] = g A g^{-1} + z g' g^{-1} from point values, with a
// fourth-order difference for g'.
template <class S>
std::map<int, MatC> gauge_oracle(const GaugeWord<S>& w, const LaurentConnection<S>& a, int lo, int hi) {
  const int n = a.n();
  auto f = [&](cplx z) {
    const double h = 1e-4;
    MatC g = eval_word(w, n, z);
    MatC gi = g.inverse();
    MatC dg = (-eval_word(w, n, z + 2 * h) + 8.0 * eval_word(w, n, z + h) - 8.0 * eval_word(w, n, z - h) +
               eval_word(w, n, z - 2 * h)) /
              (12 * h);
    return MatC(g * a.evaluate(z) * gi + z * dg * gi);
  };
  return fourier_coeffs(f, n, lo, hi);
}

template <class S>
double oracle_gap(const LaurentConnection<S>& got, const std::map<int, MatC>& oracle) {
  double d = 0;
  for (const auto& [k, c] : oracle)
    for (int a = 0; a < got.n(); ++a)
      for (int b = 0; b < got.n(); ++b)
        if (k <= got.known_order()(a, b))
          d = std::max(d, std::abs(to_complex(got.entry(k, a, b)) - c(a, b)));
  return d;
}

}  // namespace

TEST_CASE("membership_A_theta examples") {
  auto log_conn = conn(2, 3, {{0, q({{1, 2}, {3, 4}})}, {2, q({{0, 1}, {1, 0}})}});
  CHECK(membership_A_theta(log_conn, Weight(2)).member);

  auto pole = conn(2, 3, {{-1, unit(2, 0, 1)}});
  auto bad = membership_A_theta(pole, w({"1/2", "0"}));
  CHECK_FALSE(bad.member);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].i == -1);
  CHECK(bad.violations[0].lambda == Rational(1, 2));
  CHECK(bad.violations[0].a == 0);
  CHECK(bad.violations[0].b == 1);

  CHECK(membership_A_theta(pole, w({"3/2", "0"})).member);
}

TEST_CASE("gauge_transform worked examples") {
  const Rational a(3), b(-2);
  MatQ d = zeros<Rational>(2, 2);
  d(0, 0) = a;
  d(1, 1) = b;
  auto A = conn(2, 4, {{0, d}});

  GaugeWord<Rational> id;
  CHECK(same_coefficients(gauge_transform(id, A), A));

  auto shifted = gauge_transform(GaugeFactor<Rational>::torus(w({"2", "-1"})), A);
  MatQ expect = d;
  expect(0, 0) += Rational(2);
  expect(1, 1) -= Rational(1);
  CHECK(shifted.coeff(0) == expect);
  CHECK(shifted.coeffs().size() == 1);

  // exp(E12 z): the z-coefficient is ((b - a) + 1) E12, and nothing else appears.
  auto g = GaugeFactor<Rational>::exp(unit(2, 0, 1), 1);
  auto out = gauge_transform(g, A);
  CHECK(out.coeff(0) == d);
  CHECK(out.coeff(1) == MatQ((b - a + Rational(1)) * unit(2, 0, 1)));
  CHECK(out.coeffs().size() == 2);
  CHECK(oracle_gap(out, gauge_oracle(GaugeWord<Rational>{{g}}, A, -3, 5)) < 1e-8);
}

TEST_CASE("gauge_transform agrees with the point-evaluation oracle") {
  rnd::Rng rng(7);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 2;
    Weight theta = rnd::weight(rng, n, Rational(0), Rational(3, 2), 4);
    auto A = rnd::connection_in_A_theta<cplx>(rng, GroupSpec{Family::GL, n}, theta, 3);
    GaugeWord<cplx> word;
    for (int k = 0; k < 3; ++k) word.factors.push_back(rnd::p_hat_generator<cplx>(rng, theta, rnd::uniform_int(rng, 0, 4)));
    LaurentConnection<cplx> got;
    try {
      got = gauge_transform(word, A);
    } catch (const truncation_overflow&) {
      continue;
    }
    auto oracle = gauge_oracle(word, A, -8, 8);
    CHECK(oracle_gap(got, oracle) < 1e-6);
    ++checked;
  }
  CHECK(checked >= 30);
}

TEST_CASE("gauge action composes like a group action") {
  rnd::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 2;
    Weight theta = rnd::weight(rng, n, Rational(0), Rational(1), 3);
    auto A = rnd::connection_in_A_theta<Rational>(rng, GroupSpec{Family::GL, n}, theta, 4);
    // finite factors only, so the whole word is one Laurent matrix
    GaugeWord<Rational> word;
    LaurentMatrix<Rational> G = LaurentMatrix<Rational>::identity(n), Ginv = G;
    const int len = 1 + trial % 4;
    for (int k = 0; k < len; ++k) {
      int kind = std::array<int, 3>{0, 1, 2}[static_cast<std::size_t>(rnd::uniform_int(rng, 0, 2))];
      auto f = rnd::p_hat_generator<Rational>(rng, theta, kind);
      auto ff = detail::finite_form(f, n);
      REQUIRE(ff.has_value());
      G = G * ff->g;
      Ginv = ff->ginv * Ginv;
      word.factors.push_back(f);
    }
    auto seq = gauge_transform(word, A);
    auto once = gauge_transform(GaugeFactor<Rational>::laurent(G, Ginv), A);
    CHECK(jet_distance(seq, once) == 0.0);

    // gauge(g, gauge(h, A)) == gauge(gh, A)
    GaugeWord<Rational> head{{word.factors.front()}};
    GaugeWord<Rational> tail{{word.factors.begin() + 1, word.factors.end()}};
    CHECK(jet_distance(gauge_transform(head, gauge_transform(tail, A)), seq) == 0.0);
  }
}

TEST_CASE("preservation of A_theta by each generator class") {
  rnd::Rng rng(23);
  int cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 2;
    Weight theta = rnd::weight(rng, n, Rational(0), Rational(2), 4);
    auto A = rnd::connection_in_A_theta<Rational>(rng, GroupSpec{Family::GL, n}, theta, 4);
    REQUIRE(membership_A_theta(A, theta).member);
    for (int kind = 0; kind < 5; ++kind) {
      auto f = rnd::p_hat_generator<Rational>(rng, theta, kind);
      REQUIRE(certify_factor(f, theta).in_p_hat);
      auto B = gauge_transform(f, A);
      auto cert = membership_A_theta(B, theta);
      CHECK(cert.member);
      ++cases;
    }
  }
  CHECK(cases == 500);
}

TEST_CASE("a generator outside the extended parahoric can leave A_theta") {
  Weight theta = w({"1/2", "0"});
  auto A = conn(2, 3, {{0, q({{1, 0}, {0, 0}})}});
  auto f = GaugeFactor<Rational>::exp(unit(2, 1, 0), 0);  // weight -1/2
  CHECK_FALSE(certify_factor(f, theta).in_p_hat);
  CHECK_FALSE(membership_A_theta(gauge_transform(f, A), theta).member);
}

TEST_CASE("weight_zero_part examples and equivariance") {
  auto A = conn(2, 3, {{0, q({{2, 5}, {0, 7}})}});
  auto wz = weight_zero_part(A, Weight(2));
  CHECK(wz.b == q({{2, 5}, {0, 7}}));

  // gl2, theta = (1,0): A_1 = E21 has weight 0, E12 at i = 1 has weight 2
  Weight theta = w({"1", "0"});
  MatQ a0 = q({{3, 0}, {0, 4}});
  auto B = conn(2, 3, {{0, a0}, {1, MatQ(unit(2, 1, 0) + unit(2, 0, 1))}});
  auto wz2 = weight_zero_part(B, theta);
  CHECK(wz2.b == MatQ(theta.diag<Rational>() + a0 + unit(2, 1, 0)));
  CHECK(wz2.part.entry(1, 1, 0) == Rational(1));
  CHECK(wz2.part.entry(1, 0, 1) == Rational(0));

  CHECK_THROWS_AS(weight_zero_part(conn(2, 3, {{-1, unit(2, 0, 1)}}), w({"1/2", "0"})), precondition_error);
}

TEST_CASE("weight-zero equivariance under the Levi factor") {
  rnd::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 2;
    Weight theta = rnd::weight(rng, n, Rational(0), Rational(2), 2);
    if (trial % 2 == 0) {
      auto A = rnd::connection_in_A_theta<Rational>(rng, GroupSpec{Family::GL, n}, theta, 3);
      auto f = rnd::p_hat_generator<Rational>(rng, theta, 1);
      auto lhs = weight_zero_part(gauge_transform(f, A), theta).b;
      auto rhs = MatQ(f.m * weight_zero_part(A, theta).b * inverse(f.m));
      CHECK(lhs == rhs);
    } else {
      auto A = rnd::connection_in_A_theta<cplx>(rng, GroupSpec{Family::GL, n}, theta, 3);
      auto f = rnd::p_hat_generator<cplx>(rng, theta, 1);
      auto lhs = weight_zero_part(gauge_transform(f, A), theta).b;
      MatC rhs = f.m * weight_zero_part(A, theta).b * f.m.inverse();
      CHECK(max_abs(MatC(lhs - rhs)) < 1e-10);
    }
  }
}

TEST_CASE("bracket respects the loop grading") {
  for (auto theta : {w({"1/2", "0"}), w({"1/4", "0"}), w({"1", "1/3", "0"}), w({"3/4", "1/2", "0"})}) {
    const int n = theta.size();
    auto weights = realized_weights(theta, Rational(-2), Rational(2));
    for (const auto& r : weights)
      for (const auto& s : weights) {
        for (const auto& x : loop_graded_piece(theta, r))
          for (const auto& y : loop_graded_piece(theta, s)) {
            LaurentMatrix<Rational> X, Y;
            X.n = Y.n = n;
            X.add_entry(x.i, x.a, x.b, Rational(1));
            Y.add_entry(y.i, y.a, y.b, Rational(1));
            auto br = X * Y - Y * X;
            for (const auto& [k, m] : br.coeffs)
              for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                  if (!is_zero(m(a, b))) CHECK(component_weight(theta, a, b, k) == r + s);
          }
      }
    for (const auto& r : weights)
      for (const auto& c : loop_graded_piece(theta, r)) CHECK(component_weight(theta, c.a, c.b, c.i) == r);
  }
  // (1/2, 0): pieces at integers are diagonal-plus-nothing, at half-integers off-diagonal
  auto p = loop_graded_piece(w({"1/2", "0"}), Rational(1, 2));
  REQUIRE(p.size() == 2);
  CHECK(realized_weights(w({"1/2", "0"}), Rational(0), Rational(1)).size() == 3);
}

TEST_CASE("lies_over") {
  auto A = conn(2, 2, {{0, q({{0, 1}, {0, 0}})}});
  CHECK(lies_over(A, Weight(2), q({{0, 1}, {0, 0}})));
  CHECK_FALSE(lies_over(A, Weight(2), MatQ(zeros<Rational>(2, 2))));
  auto D = conn(2, 2, {{0, q({{1, 0}, {0, 2}})}});
  CHECK(lies_over(D, Weight(2), q({{2, 0}, {0, 1}})));
  CHECK_FALSE(lies_over(D, Weight(2), q({{1, 0}, {0, 3}})));
  CHECK_THROWS_AS(lies_over(D, w({"1/2", "0"}), q({{0, 1}, {0, 0}})), precondition_error);
}

TEST_CASE("truncation overflow is an error") {
  LaurentConnection<Rational> A(GroupSpec{Family::GL, 2}, 2);
  CHECK_THROWS_AS(A.set_coeff(3, unit(2, 0, 1)), truncation_overflow);
  CHECK_THROWS_AS(A.add_entry(5, 0, 0, Rational(1)), truncation_overflow);

  // an entry whose known range lies entirely below the lowest coefficient
  A.set_coeff(0, q({{1, 0}, {0, 1}}));
  Eigen::MatrixXi k(2, 2);
  k << 2, 2, -3, 2;
  A.set_known_order(k);
  auto swap = GaugeFactor<Rational>::constant(q({{0, 1}, {1, 0}}));
  CHECK_THROWS_AS(gauge_transform(swap, A), truncation_overflow);

  auto exact = conn(2, kExactOrder, {{0, q({{1, 0}, {0, 2}})}});
  CHECK_THROWS_AS(gauge_transform(GaugeFactor<Rational>::exp(q({{1, 0}, {0, 0}}), 1), exact),
                  truncation_overflow);
}

TEST_CASE("factor certificates") {
  Weight theta = w({"1/2", "0"});
  auto u = certify_factor(GaugeFactor<Rational>::exp(unit(2, 0, 1), 0), theta);
  CHECK(u.in_p_hat);
  CHECK(u.in_u);
  auto lev = certify_factor(GaugeFactor<Rational>::constant(q({{2, 0}, {0, 1}})), theta);
  CHECK(lev.in_p_hat);
  CHECK_FALSE(lev.in_u);
  auto torus = certify_factor(GaugeFactor<Rational>::torus(w({"1", "0"})), theta);
  CHECK(torus.in_p_hat == false);  // z^(1,0) conjugated has limit diag(0,1): singular
  CHECK_THROWS_AS(GaugeFactor<Rational>::laurent(LaurentMatrix<Rational>::identity(2),
                                                 LaurentMatrix<Rational>::constant(q({{2, 0}, {0, 1}}))),
                  precondition_error);
}

TEST_CASE("known_weight_bound is exact and stable under clipping") {
  rnd::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 2;
    Weight theta = rnd::weight(rng, n, Rational(0), Rational(7, 4), 4);
    LaurentConnection<Rational> a(GroupSpec{Family::GL, n}, rnd::uniform_int(rng, 0, 4));
    Eigen::MatrixXi ko = a.known_order();
    ko(rnd::uniform_int(rng, 0, n - 1), rnd::uniform_int(rng, 0, n - 1)) += rnd::uniform_int(rng, 0, 2);
    a.set_known_order(ko);
    // oracle: scan weights on a 1/144 grid for the first unknown component
    auto known = [&](const Rational& r) {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          Rational i = r - (theta[x] - theta[y]);
          if (i.is_integer() && i.to_ll() > ko(x, y)) return false;
        }
      return true;
    };
    auto realized = [&](const Rational& r) {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if ((r - (theta[x] - theta[y])).is_integer()) return true;
      return false;
    };
    Rational best(-100);
    for (Rational r(-8); known(r); r += Rational(1, 144))
      if (realized(r)) best = r;
    const Rational b = known_weight_bound(a, theta);
    CHECK(b == best);
    Eigen::MatrixXi clip = ko;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) clip(x, y) = static_cast<int>((b - (theta[x] - theta[y])).floor().to_ll());
    LaurentConnection<Rational> c = a;
    c.set_known_order(clip);
    CHECK(known_weight_bound(c, theta) == b);
  }
}
