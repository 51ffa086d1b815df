#include "logahoric/normalform.hpp"

namespace logahoric {

MatC exp_two_pi_i_diag(const Weight& tau) {
  MatC t = MatC::Zero(tau.size(), tau.size());
  for (int a = 0; a < tau.size(); ++a) t(a, a) = std::polar(1.0, 2 * kPi * tau[a].frac().to_double());
  return t;
}

MatC sigma_matrix(const std::vector<double>& sigma) {
  const int n = static_cast<int>(sigma.size());
  MatC s = MatC::Zero(n, n);
  for (int a = 0; a < n; ++a) s(a, a) = cplx(0.0, sigma[static_cast<std::size_t>(a)]);
  return s;
}

MonodromyData monodromy_from_parts(const MatC& nil, const NormalData& d) {
  const int n = d.n();
  MonodromyData out;
  out.N = nil;
  MatC sig = sigma_matrix(d.sigma);
  out.R = sig + nil;
  out.t = exp_two_pi_i_diag(d.tau);
  MatC es = MatC::Zero(n, n);
  for (int a = 0; a < n; ++a) es(a, a) = std::exp(kTwoPiI * sig(a, a));
  MatC mu = exp_nilpotent<cplx>(MatC(kTwoPiI * nil), 1e-8);
  out.M = out.t * es * mu;

  const double scale = std::max(1.0, out.M.cwiseAbs().maxCoeff());
  if ((out.t * nil * out.t.inverse() - nil).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, nil.cwiseAbs().maxCoeff()))
    throw postcondition_error("Ad_t N != N");
  if (!ParabolicData(d.phi()).contains(out.M, 1e-10 * scale)) throw postcondition_error("monodromy is not in P_phi");
  MatC ms = out.t * es;
  if ((ms * mu - mu * ms).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw postcondition_error("semisimple and unipotent parts of M do not commute");
  return out;
}

namespace {

MatC rk4(const LaurentConnection<cplx>& a, int steps) {
  const int n = a.n();
  const double h = 2 * kPi / steps;
  auto f = [&](double s, const MatC& phi) { return MatC(cplx(0, 1) * a.evaluate(std::polar(1.0, s)) * phi); };
  MatC phi = MatC::Identity(n, n);
  for (int k = 0; k < steps; ++k) {
    double s = k * h;
    MatC k1 = f(s, phi);
    MatC k2 = f(s + h / 2, phi + (h / 2) * k1);
    MatC k3 = f(s + h / 2, phi + (h / 2) * k2);
    MatC k4 = f(s + h, phi + h * k3);
    phi += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return phi;
}

}  // namespace

OdeMonodromy ode_monodromy_oracle(const LaurentConnection<cplx>& a, int steps) {
  if (steps < 2 || steps % 2 != 0) throw precondition_error("ODE oracle needs an even step count");
  OdeMonodromy out;
  out.steps = steps;
  out.M = rk4(a, steps);
  MatC coarse = rk4(a, steps / 2);
  out.error_estimate = (out.M - coarse).cwiseAbs().maxCoeff() / 15.0;
  return out;
}

}  // namespace logahoric
