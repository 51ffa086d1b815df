#pragma once

#include "logahoric/liecore.hpp"

#include <random>
#include <vector>

namespace logahoric {

// G x P0 with a chosen Levi lift. The lift is lift * L * lift^-1 for the
// block-diagonal L, with lift in P0.
struct QHSpace {
  GroupSpec group;
  ParabolicData p0;
  MatC lift;
  double form_scale = 1.0;  // (X, Y) = form_scale * tr(XY)

  QHSpace(GroupSpec g, ParabolicData p, double scale = 1.0);

  int n() const { return group.n; }
  cplx pairing(const MatC& x, const MatC& y) const { return form_scale * (x * y).trace(); }
  // Projection P0 -> L (group) and p0 -> l (algebra); the same formula for both.
  MatC levi_projection(const MatC& x) const;

  std::vector<MatC> g_basis() const;
  std::vector<MatC> p_basis() const;
  std::vector<MatC> l_basis() const;
  std::vector<MatC> u_basis() const;
};

struct QHPoint {
  MatC C;
  MatC p;
};

// gamma = C' C^-1 (right-trivialized), P = p^-1 p' (left-trivialized, in p0).
struct QHTangent {
  MatC gamma;
  MatC P;
};

cplx two_form(const QHSpace& s, const QHPoint& m, const QHTangent& x, const QHTangent& y);

// (C^-1 p C, pi(p)^-1)
std::pair<MatC, MatC> moment(const QHSpace& s, const QHPoint& m);

// Left and right Maurer-Cartan forms of both moment components on a tangent.
struct MomentDerivative {
  MatC theta_g, theta_bar_g;
  MatC theta_l, theta_bar_l;
};
MomentDerivative moment_derivative(const QHSpace& s, const QHPoint& m, const QHTangent& v);
// Central differences along exp charts, same output.
MomentDerivative moment_derivative_fd(const QHSpace& s, const QHPoint& m, const QHTangent& v, double h = 1e-5);

// Generator of exp(-t X) for the action (g, q) . (C, p) = (q C g^-1, q p q^-1).
QHTangent fundamental_field(const QHSpace& s, const QHPoint& m, const MatC& x_g, const MatC& x_l);

std::vector<QHTangent> tangent_basis(const QHSpace& s);

QHPoint random_point(const QHSpace& s, std::mt19937_64& rng);

struct QH2Report {
  double residual = 0;
  double fd_discrepancy = 0;  // analytic vs finite-difference d(mu)
};
// max over tangents Y of |omega(v_X, Y) - 1/2 (mu^*(Theta + Theta_bar), X)|.
QH2Report check_qh2(const QHSpace& s, const QHPoint& m, const MatC& x_g, const MatC& x_l,
                    const std::vector<QHTangent>& tangents);

struct QH3Report {
  int kernel_dim = 0;
  int u_dim = 0;
  bool subspace_match = false;
  bool grey = false;  // singular values in [1e-10, 1e-6] relative
  double smallest_kept = 0;
  double largest_dropped = 0;
};
QH3Report check_qh3(const QHSpace& s, const QHPoint& m);

struct QH1Report {
  double residual_coarse = 0;  // step 1e-3
  double residual_fine = 0;    // step 1e-4
  bool monotone = false;
};
// d(omega)(t1, t2, t3) against mu^* eta with eta(a, b, c) = 1/2 ([a, b], c),
// i.e. (1/6)([Theta, Theta], Theta) with [Theta, Theta](a, b) = [a, b].
double qh1_residual(const QHSpace& s, const QHPoint& m, const QHTangent& t1, const QHTangent& t2,
                    const QHTangent& t3, double h);
QH1Report check_qh1(const QHSpace& s, const QHPoint& m, const QHTangent& t1, const QHTangent& t2,
                    const QHTangent& t3);

// (M, P = C^-1 P0 C) with M = C^-1 p C, p in C U.
struct CHatMembership {
  bool member = false;
  bool p_in_p0 = false;
  bool class_match = false;
  bool moment_consistent = false;
};
CHatMembership c_hat_membership(const QHSpace& s, const MatC& M, const MatC& conjugator,
                                const MatC& class_rep, double tol = 1e-9);

}  // namespace logahoric
