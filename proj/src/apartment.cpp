#include "logahoric/apartment.hpp"

#include "logahoric/liecore.hpp"
#include "logahoric/rhmap.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace logahoric {

namespace {

void check_permutation(const std::vector<int>& w) {
  std::vector<int> s = w;
  std::sort(s.begin(), s.end());
  for (int j = 0; j < static_cast<int>(s.size()); ++j)
    if (s[static_cast<std::size_t>(j)] != j) throw precondition_error("w is not a permutation");
}

}  // namespace

AffineWeylElement AffineWeylElement::identity(int n) {
  AffineWeylElement x;
  x.w.resize(static_cast<std::size_t>(n));
  std::iota(x.w.begin(), x.w.end(), 0);
  x.lambda.assign(static_cast<std::size_t>(n), 0);
  return x;
}

AffineWeylElement AffineWeylElement::translation(std::vector<long long> lambda) {
  AffineWeylElement x = identity(static_cast<int>(lambda.size()));
  x.lambda = std::move(lambda);
  return x;
}

AffineWeylElement AffineWeylElement::permutation(std::vector<int> w) {
  check_permutation(w);
  AffineWeylElement x = identity(static_cast<int>(w.size()));
  x.w = std::move(w);
  return x;
}

bool AffineWeylElement::is_identity() const { return *this == identity(n()); }

Weight permute(const std::vector<int>& w, const Weight& v) {
  Weight out(v.size());
  for (int j = 0; j < v.size(); ++j) out[w[static_cast<std::size_t>(j)]] = v[j];
  return out;
}

Weight AffineWeylElement::act(const Weight& theta) const {
  if (theta.size() != n()) throw precondition_error("theta has the wrong length");
  Weight shifted = theta;
  for (int j = 0; j < n(); ++j) shifted[j] -= Rational(lambda[static_cast<std::size_t>(j)]);
  return permute(w, shifted);
}

AffineWeylElement AffineWeylElement::inverse() const {
  AffineWeylElement x;
  x.w.resize(w.size());
  x.lambda.resize(w.size());
  for (int j = 0; j < n(); ++j) {
    const auto wj = static_cast<std::size_t>(w[static_cast<std::size_t>(j)]);
    x.w[wj] = j;
    x.lambda[wj] = -lambda[static_cast<std::size_t>(j)];
  }
  return x;
}

AffineWeylElement operator*(const AffineWeylElement& x, const AffineWeylElement& y) {
  if (x.n() != y.n()) throw precondition_error("size mismatch");
  AffineWeylElement out;
  out.w.resize(x.w.size());
  out.lambda.resize(x.w.size());
  for (std::size_t j = 0; j < x.w.size(); ++j) {
    const auto yj = static_cast<std::size_t>(y.w[j]);
    out.w[j] = x.w[yj];
    out.lambda[j] = x.lambda[yj] + y.lambda[j];
  }
  return out;
}

std::string AffineWeylElement::str() const {
  std::ostringstream os;
  os << "w=[";
  for (std::size_t j = 0; j < w.size(); ++j) os << (j ? "," : "") << w[j];
  os << "] lambda=[";
  for (std::size_t j = 0; j < lambda.size(); ++j) os << (j ? "," : "") << lambda[j];
  os << "]";
  return os.str();
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  return out;
}

StabilizerVerdict stabilizer_check(const AffineWeylElement& x, const Weight& theta) {
  StabilizerVerdict v;
  v.fixed = x.act(theta) == theta;
  if (v.fixed) {
    // Ad_{h^-1} theta = theta - lambda
    Weight pulled(theta.size());
    for (int j = 0; j < theta.size(); ++j) pulled[j] = theta[x.w[static_cast<std::size_t>(j)]];
    Weight shifted = theta;
    for (int j = 0; j < theta.size(); ++j) shifted[j] -= Rational(x.lambda[static_cast<std::size_t>(j)]);
    if (!(pulled == shifted)) throw postcondition_error("fixed point without Ad_h^-1 theta = theta - lambda");
  }
  v.member = extended_parahoric_membership(x.monomial<Rational>(), theta).member;
  if (v.member != v.fixed)
    throw postcondition_error("stabilizer check disagrees with the fixed-point test for " + x.str());
  return v;
}

StabilizerSweep stabilizer_sweep(int n, int bound, const std::vector<Weight>& thetas) {
  StabilizerSweep s;
  const auto perms = all_permutations(n);
  std::vector<long long> lambda(static_cast<std::size_t>(n), -bound);
  for (;;) {
    for (const auto& w : perms)
      for (const auto& theta : thetas) {
        AffineWeylElement x{w, lambda};
        const bool fixed = x.act(theta) == theta;
        const bool member = extended_parahoric_membership(x.monomial<Rational>(), theta).member;
        ++s.cases;
        s.fixed += fixed;
        s.agree += fixed == member;
      }
    int j = 0;
    while (j < n && lambda[static_cast<std::size_t>(j)] == bound) lambda[static_cast<std::size_t>(j++)] = -bound;
    if (j == n) break;
    ++lambda[static_cast<std::size_t>(j)];
  }
  return s;
}

std::string to_string(Equivalence e) {
  switch (e) {
    case Equivalence::Equivalent: return "equivalent";
    case Equivalence::NotEquivalent: return "not_equivalent";
    case Equivalence::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::pair<Weight, AffineWeylElement> reduce_to_alcove(const Weight& theta) {
  const int n = theta.size();
  AffineWeylElement x = AffineWeylElement::identity(n);
  Weight frac(n);
  for (int j = 0; j < n; ++j) {
    Rational f = theta[j].floor();
    x.lambda[static_cast<std::size_t>(j)] = f.to_ll();
    frac[j] = theta[j] - f;
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  for (int r = 0; r < n; ++r) x.w[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
  Weight reduced = x.act(theta);
  for (int j = 0; j + 1 < n; ++j)
    if (reduced[j] < reduced[j + 1]) throw postcondition_error("alcove reduction is not sorted");
  return {reduced, x};
}

WeightCandidate corollary_e_invariant(const MatC& M, const Weight& phi, double tol) {
  const int n = phi.size();
  if (M.rows() != n || M.cols() != n) throw precondition_error("M and phi differ in size");
  ParabolicData p(phi);
  if (!p.contains(M, tol * std::max(1.0, max_abs(M)))) throw precondition_error("M is not in P_phi");
  std::vector<cplx> eig(static_cast<std::size_t>(n));
  for (const auto& block : p.levi_blocks()) {
    SpectralData sd = spectral_decomposition(submatrix(M, block));
    std::size_t at = 0;
    for (const auto& c : sd.clusters)
      for (int k = 0; k < c.multiplicity; ++k) eig[static_cast<std::size_t>(block[at++])] = c.value;
    if (at != block.size()) throw numerical_error("eigenvalue clusters do not fill a Levi block");
  }
  WeightCandidate out;
  std::tie(out.tau, out.sigma) = suggest_tau(eig, 1000, tol);
  out.theta = phi - out.tau;
  out.reduced = reduce_to_alcove(out.theta).first;
  return out;
}

}  // namespace logahoric
