#pragma once

#include "logahoric/linalg.hpp"
#include "logahoric/types.hpp"

#include <map>
#include <utility>
#include <vector>

namespace logahoric {

// ---- gradings ----

// Entry (j,k) lives in g_lambda with lambda = theta_j - theta_k.
template <class S>
std::map<Rational, Mat<S>> grade_by_weight(const Mat<S>& x, const Weight& theta) {
  const int n = theta.size();
  if (x.rows() != n || x.cols() != n) throw precondition_error("size mismatch in grade_by_weight");
  std::map<Rational, Mat<S>> out;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (is_zero(x(j, k))) continue;
      Rational lam = theta[j] - theta[k];
      auto it = out.find(lam);
      if (it == out.end()) it = out.emplace(lam, zeros<S>(n, n)).first;
      it->second(j, k) = x(j, k);
    }
  if (out.empty()) out.emplace(Rational(0), zeros<S>(n, n));
  return out;
}

class ParabolicData {
 public:
  ParabolicData() = default;
  explicit ParabolicData(Weight theta);

  const Weight& weight() const { return theta_; }
  int n() const { return theta_.size(); }

  bool in_parabolic(int a, int b) const { return theta_[a] >= theta_[b]; }
  bool in_levi(int a, int b) const { return theta_[a] == theta_[b]; }
  bool in_unipotent(int a, int b) const { return theta_[a] > theta_[b]; }
  bool in_opposite(int a, int b) const { return theta_[a] < theta_[b]; }

  // Index groups of equal weight, ordered by decreasing weight.
  const std::vector<std::vector<int>>& levi_blocks() const { return blocks_; }
  int dim_unipotent() const;
  int dim_parabolic(Family f) const;
  bool is_closed_under_multiplication() const;

  template <class S>
  Mat<S> levi_projection(const Mat<S>& x) const {
    Mat<S> out = zeros<S>(n(), n());
    for (int a = 0; a < n(); ++a)
      for (int b = 0; b < n(); ++b)
        if (in_levi(a, b)) out(a, b) = x(a, b);
    return out;
  }

  template <class S>
  std::vector<std::pair<int, int>> violations(const Mat<S>& x, double tol = 0.0) const {
    std::vector<std::pair<int, int>> v;
    for (int a = 0; a < n(); ++a)
      for (int b = 0; b < n(); ++b)
        if (!in_parabolic(a, b) && !is_zero(x(a, b), tol)) v.emplace_back(a, b);
    return v;
  }

  template <class S>
  bool contains(const Mat<S>& x, double tol = 0.0) const {
    return violations(x, tol).empty();
  }

  friend bool operator==(const ParabolicData& a, const ParabolicData& b) {
    return a.pattern_key() == b.pattern_key();
  }
  // Pattern of P (independent of the weight that induced it).
  std::vector<int> pattern_key() const;

 private:
  Weight theta_;
  std::vector<std::vector<int>> blocks_;
};

inline ParabolicData parabolic_from_weight(const Weight& theta) { return ParabolicData(theta); }

// h_theta: entries with theta_j - theta_k integral, graded by that integer.
struct HTheta {
  Weight theta;
  std::vector<std::vector<int>> classes;  // indices sharing theta mod Z
  std::map<int, std::vector<std::pair<int, int>>> graded;

  bool contains_entry(int a, int b) const { return (theta[a] - theta[b]).is_integer(); }
  template <class S>
  bool contains(const Mat<S>& x, double tol = 0.0) const {
    for (int a = 0; a < theta.size(); ++a)
      for (int b = 0; b < theta.size(); ++b)
        if (!contains_entry(a, b) && !is_zero(x(a, b), tol)) return false;
    return true;
  }
  int dim() const;
};

HTheta centralizer_h_theta(const Weight& theta);

// ---- Jordan decompositions, exp and log ----

struct EigenCluster {
  cplx value;
  int multiplicity;
};

template <class S>
struct AdditiveJordan {
  Mat<S> semisimple;
  Mat<S> nilpotent;
};

struct MultiplicativeJordan {
  MatC semisimple;
  MatC unipotent;
};

// Eigenvalues grouped with relative tolerance; the tolerance is escalated by
// factors of 10 (up to 1e-4) until generalized eigenspace dimensions add up.
struct SpectralData {
  std::vector<EigenCluster> clusters;
  std::vector<MatC> bases;  // orthonormal basis of each generalized eigenspace
  double tolerance_used = 0;
};
SpectralData spectral_decomposition(const MatC& x, double cluster_tol = 1e-8);

AdditiveJordan<cplx> additive_jordan(const MatC& x, double cluster_tol = 1e-8);

// Exact path: the caller supplies all eigenvalues (with multiplicity).
template <class S>
AdditiveJordan<S> additive_jordan(const Mat<S>& x, const std::vector<S>& eigenvalues,
                                  double tol = 1e-9);

MultiplicativeJordan multiplicative_jordan(const MatC& g, double cluster_tol = 1e-8);

MatC exp_alg(const MatC& x);

template <class S>
Mat<S> exp_nilpotent(const Mat<S>& nil, double tol = 1e-9) {
  const int n = static_cast<int>(nil.rows());
  Mat<S> out = identity<S>(n), term = identity<S>(n);
  for (int k = 1; k <= n; ++k) {
    term = (term * nil).eval();
    term /= S(k);
    out += term;
  }
  if (max_abs(Mat<S>(term * nil)) > tol) throw precondition_error("exp_nilpotent: input is not nilpotent");
  return out;
}

template <class S>
Mat<S> log_unipotent(const Mat<S>& g, double tol = 1e-9) {
  const int n = static_cast<int>(g.rows());
  Mat<S> nil = g - identity<S>(n);
  Mat<S> p = identity<S>(n);
  for (int k = 0; k < n; ++k) p = (p * nil).eval();
  if (max_abs(p) > tol * std::max(1.0, std::pow(max_abs(nil), n)))
    throw precondition_error("log_unipotent: input is not unipotent");
  Mat<S> out = zeros<S>(n, n), term = identity<S>(n);
  for (int k = 1; k < n; ++k) {
    term = (term * nil).eval();
    out += (k % 2 == 1 ? S(1) : S(-1)) * term / S(k);
  }
  return out;
}

// Principal branch: eigenvalue arguments in (-pi, pi].
MatC log_semisimple(const MatC& g, double cluster_tol = 1e-8);
cplx principal_log(cplx z);

// diag(z^theta_j) with log z on the given sheet of the principal branch.
MatC one_param(const Weight& theta, cplx z, int sheet = 0);

// ---- Jordan invariants as conjugacy certificates ----

struct EigenInvariant {
  cplx eigenvalue;
  int multiplicity;
  std::vector<int> ranks;  // rank of (x - mu)^k on the generalized eigenspace, k = 1..m
};

struct JordanInvariants {
  std::vector<EigenInvariant> blocks;
};

JordanInvariants jordan_invariants(const MatC& x, double cluster_tol = 1e-8);
std::vector<JordanInvariants> blockwise_invariants(const MatC& x,
                                                   const std::vector<std::vector<int>>& blocks,
                                                   double cluster_tol = 1e-8);

// Unordered comparison: eigenvalues to eig_tol, multiplicities and ranks exact.
bool same_invariants(const JordanInvariants& a, const JordanInvariants& b, double eig_tol = 1e-7);
bool same_invariants(const std::vector<JordanInvariants>& a, const std::vector<JordanInvariants>& b,
                     double eig_tol = 1e-7);

MatC submatrix(const MatC& x, const std::vector<int>& idx);

// A parabolic g P0 g^{-1} described by the standard one and the conjugator.
struct ParabolicFrame {
  ParabolicData standard;
  MatC g;

  bool contains(const MatC& x, double tol = 1e-9) const;
  MatC levi_projection(const MatC& x) const;  // g pi(g^{-1} x g) g^{-1}
  std::vector<JordanInvariants> levi_invariants(const MatC& x) const;
};

// pi of g class_rep g^{-1} inside g P0 g^{-1}, returned as a matrix.
MatC transfer_levi_class(const MatC& class_rep, const MatC& g, const ParabolicData& p0);

// ---- exact additive Jordan ----

template <class S>
AdditiveJordan<S> additive_jordan(const Mat<S>& x, const std::vector<S>& eigenvalues, double tol) {
  const int n = static_cast<int>(x.rows());
  if (static_cast<int>(eigenvalues.size()) != n)
    throw precondition_error("additive_jordan: need n eigenvalues");
  std::vector<std::pair<S, int>> distinct;
  for (const auto& e : eigenvalues) {
    bool found = false;
    for (auto& [v, m] : distinct)
      if (is_zero(S(v - e), tol)) { ++m; found = true; break; }
    if (!found) distinct.emplace_back(e, 1);
  }
  Mat<S> basis(n, n), diag = zeros<S>(n, n);
  int col = 0;
  for (const auto& [mu, m] : distinct) {
    Mat<S> shifted = x - mu * identity<S>(n), p = identity<S>(n);
    for (int k = 0; k < m; ++k) p = (p * shifted).eval();
    Mat<S> ker = kernel_basis(p, tol);
    if (ker.cols() != m)
      throw numerical_error("supplied eigenvalues do not match generalized eigenspaces");
    basis.middleCols(col, m) = ker;
    for (int k = 0; k < m; ++k) diag(col + k, col + k) = mu;
    col += m;
  }
  AdditiveJordan<S> out;
  out.semisimple = basis * diag * inverse(basis);
  out.nilpotent = x - out.semisimple;
  return out;
}

}  // namespace logahoric
