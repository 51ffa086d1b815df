#include "logahoric/liecore.hpp"

#include <optional>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace logahoric {

ParabolicData::ParabolicData(Weight theta) : theta_(std::move(theta)) {
  std::vector<Rational> vals = theta_.entries();
  std::sort(vals.begin(), vals.end(), std::greater<>());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  for (const auto& v : vals) {
    std::vector<int> idx;
    for (int i = 0; i < n(); ++i)
      if (theta_[i] == v) idx.push_back(i);
    blocks_.push_back(idx);
  }
}

int ParabolicData::dim_unipotent() const {
  int d = 0;
  for (int a = 0; a < n(); ++a)
    for (int b = 0; b < n(); ++b) d += in_unipotent(a, b);
  return d;
}

int ParabolicData::dim_parabolic(Family f) const {
  int d = 0;
  for (int a = 0; a < n(); ++a)
    for (int b = 0; b < n(); ++b) d += in_parabolic(a, b);
  return f == Family::SL ? d - 1 : d;
}

bool ParabolicData::is_closed_under_multiplication() const {
  for (int a = 0; a < n(); ++a)
    for (int b = 0; b < n(); ++b)
      for (int c = 0; c < n(); ++c)
        if (in_parabolic(a, b) && in_parabolic(b, c) && !in_parabolic(a, c)) return false;
  return true;
}

std::vector<int> ParabolicData::pattern_key() const {
  std::vector<int> key;
  for (int a = 0; a < n(); ++a)
    for (int b = 0; b < n(); ++b) key.push_back(in_parabolic(a, b));
  return key;
}

HTheta centralizer_h_theta(const Weight& theta) {
  HTheta h;
  h.theta = theta;
  const int n = theta.size();
  std::vector<bool> done(n, false);
  for (int a = 0; a < n; ++a) {
    if (done[a]) continue;
    std::vector<int> cls;
    for (int b = a; b < n; ++b)
      if (!done[b] && (theta[a] - theta[b]).is_integer()) {
        cls.push_back(b);
        done[b] = true;
      }
    h.classes.push_back(cls);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Rational d = theta[a] - theta[b];
      if (d.is_integer()) h.graded[static_cast<int>(d.to_ll())].emplace_back(a, b);
    }
  return h;
}

int HTheta::dim() const {
  int d = 0;
  for (const auto& [k, e] : graded) d += static_cast<int>(e.size());
  return d;
}

// ---- spectral machinery ----

namespace {

std::vector<EigenCluster> cluster(const VecC& ev, double thresh) {
  const int n = static_cast<int>(ev.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) <= thresh) parent[find(i)] = find(j);
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<EigenCluster> out;
  for (const auto& [r, members] : groups) {
    cplx mean = 0;
    for (int i : members) mean += ev(i);
    out.push_back({mean / static_cast<double>(members.size()), static_cast<int>(members.size())});
  }
  std::sort(out.begin(), out.end(), [](const EigenCluster& a, const EigenCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

MatC mat_power(const MatC& x, int k) {
  MatC p = MatC::Identity(x.rows(), x.cols());
  for (int i = 0; i < k; ++i) p = (p * x).eval();
  return p;
}

}  // namespace

SpectralData spectral_decomposition(const MatC& x, double cluster_tol) {
  const int n = static_cast<int>(x.rows());
  SpectralData sd;
  if (n == 0) return sd;
  Eigen::ComplexEigenSolver<MatC> ces(x, false);
  if (ces.info() != Eigen::Success) throw numerical_error("eigenvalue computation failed");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  // Prefer the first tolerance giving well separated eigenspaces; a split
  // defective eigenvalue gives nearly parallel ones.
  std::optional<SpectralData> fallback;
  for (double tol = cluster_tol; tol <= 1e-4 * 1.0001; tol *= 10) {
    auto clusters = cluster(ces.eigenvalues(), tol * scale);
    std::vector<MatC> bases;
    MatC all(n, n);
    int col = 0;
    for (const auto& c : clusters) {
      MatC p = mat_power(x - c.value * MatC::Identity(n, n), c.multiplicity);
      Eigen::JacobiSVD<MatC> svd(p, Eigen::ComputeFullV);
      MatC basis = svd.matrixV().rightCols(c.multiplicity);
      bases.push_back(basis);
      all.middleCols(col, c.multiplicity) = basis;
      col += c.multiplicity;
    }
    Eigen::JacobiSVD<MatC> cond(all);
    double smin = cond.singularValues()(n - 1);
    if (smin > 1e-6 && !fallback) fallback = SpectralData{clusters, bases, tol};
    if (smin > 1e-3) return SpectralData{clusters, bases, tol};
  }
  if (fallback) return *fallback;
  throw numerical_error("eigenvalue clustering failed: generalized eigenspaces are not independent");
}

AdditiveJordan<cplx> additive_jordan(const MatC& x, double cluster_tol) {
  const int n = static_cast<int>(x.rows());
  auto sd = spectral_decomposition(x, cluster_tol);
  MatC v(n, n), d = MatC::Zero(n, n);
  int col = 0;
  for (std::size_t k = 0; k < sd.clusters.size(); ++k) {
    const int m = sd.clusters[k].multiplicity;
    v.middleCols(col, m) = sd.bases[k];
    for (int i = 0; i < m; ++i) d(col + i, col + i) = sd.clusters[k].value;
    col += m;
  }
  AdditiveJordan<cplx> out;
  out.semisimple = v * d * v.inverse();
  out.nilpotent = x - out.semisimple;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (mat_power(out.nilpotent, n).cwiseAbs().maxCoeff() > 1e-6 * std::pow(scale, n) ||
      commutator(out.semisimple, out.nilpotent).cwiseAbs().maxCoeff() > 1e-6 * scale * scale)
    throw numerical_error("additive Jordan decomposition failed its consistency check");
  return out;
}

MultiplicativeJordan multiplicative_jordan(const MatC& g, double cluster_tol) {
  auto aj = additive_jordan(g, cluster_tol);
  MultiplicativeJordan out;
  out.semisimple = aj.semisimple;
  out.unipotent = inverse(aj.semisimple) * g;
  return out;
}

MatC exp_alg(const MatC& x) { return x.exp(); }

cplx principal_log(cplx z) {
  if (z == cplx(0)) throw precondition_error("logarithm of zero");
  double arg = std::arg(z);
  if (arg <= -kPi) arg = kPi;
  return {std::log(std::abs(z)), arg};
}

MatC log_semisimple(const MatC& g, double cluster_tol) {
  const int n = static_cast<int>(g.rows());
  auto sd = spectral_decomposition(g, cluster_tol);
  MatC v(n, n), d = MatC::Zero(n, n), e = MatC::Zero(n, n);
  int col = 0;
  for (std::size_t k = 0; k < sd.clusters.size(); ++k) {
    const int m = sd.clusters[k].multiplicity;
    if (std::abs(sd.clusters[k].value) < 1e-12) throw precondition_error("log_semisimple: eigenvalue 0");
    v.middleCols(col, m) = sd.bases[k];
    for (int i = 0; i < m; ++i) {
      d(col + i, col + i) = principal_log(sd.clusters[k].value);
      e(col + i, col + i) = sd.clusters[k].value;
    }
    col += m;
  }
  MatC vinv = v.inverse();
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((v * e * vinv - g).cwiseAbs().maxCoeff() > 1e-7 * scale)
    throw precondition_error("log_semisimple: input is not diagonalizable");
  return v * d * vinv;
}

MatC one_param(const Weight& theta, cplx z, int sheet) {
  if (z == cplx(0)) throw precondition_error("one_param at z = 0");
  cplx lz = principal_log(z) + kTwoPiI * static_cast<double>(sheet);
  MatC out = MatC::Zero(theta.size(), theta.size());
  for (int j = 0; j < theta.size(); ++j) out(j, j) = std::exp(theta[j].to_double() * lz);
  return out;
}

// ---- invariants ----

JordanInvariants jordan_invariants(const MatC& x, double cluster_tol) {
  JordanInvariants inv;
  if (x.rows() == 0) return inv;
  auto sd = spectral_decomposition(x, cluster_tol);
  const int n = static_cast<int>(x.rows());
  for (std::size_t k = 0; k < sd.clusters.size(); ++k) {
    const auto& c = sd.clusters[k];
    const MatC& b = sd.bases[k];
    MatC y = b.adjoint() * (x - c.value * MatC::Identity(n, n)) * b;
    EigenInvariant ei{c.value, c.multiplicity, {}};
    MatC p = MatC::Identity(c.multiplicity, c.multiplicity);
    for (int i = 0; i < c.multiplicity; ++i) {
      p = (p * y).eval();
      ei.ranks.push_back(rank_info(p, 1e-7).rank);
    }
    inv.blocks.push_back(ei);
  }
  return inv;
}

MatC submatrix(const MatC& x, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  MatC out(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(i, j) = x(idx[i], idx[j]);
  return out;
}

std::vector<JordanInvariants> blockwise_invariants(const MatC& x,
                                                   const std::vector<std::vector<int>>& blocks,
                                                   double cluster_tol) {
  std::vector<JordanInvariants> out;
  for (const auto& b : blocks) out.push_back(jordan_invariants(submatrix(x, b), cluster_tol));
  return out;
}

bool same_invariants(const JordanInvariants& a, const JordanInvariants& b, double eig_tol) {
  if (a.blocks.size() != b.blocks.size()) return false;
  std::vector<bool> used(b.blocks.size(), false);
  for (const auto& ea : a.blocks) {
    bool matched = false;
    for (std::size_t j = 0; j < b.blocks.size() && !matched; ++j) {
      const auto& eb = b.blocks[j];
      if (used[j] || std::abs(ea.eigenvalue - eb.eigenvalue) > eig_tol) continue;
      if (ea.multiplicity != eb.multiplicity || ea.ranks != eb.ranks) continue;
      used[j] = matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

bool same_invariants(const std::vector<JordanInvariants>& a, const std::vector<JordanInvariants>& b,
                     double eig_tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_invariants(a[i], b[i], eig_tol)) return false;
  return true;
}

bool ParabolicFrame::contains(const MatC& x, double tol) const {
  MatC y = inverse(g) * x * g;
  return standard.contains(y, tol * std::max(1.0, y.cwiseAbs().maxCoeff()));
}

MatC ParabolicFrame::levi_projection(const MatC& x) const {
  MatC gi = inverse(g);
  return g * standard.levi_projection(MatC(gi * x * g)) * gi;
}

std::vector<JordanInvariants> ParabolicFrame::levi_invariants(const MatC& x) const {
  MatC gi = inverse(g);
  return blockwise_invariants(standard.levi_projection(MatC(gi * x * g)), standard.levi_blocks());
}

MatC transfer_levi_class(const MatC& class_rep, const MatC& g, const ParabolicData& p0) {
  if ((p0.levi_projection(class_rep) - class_rep).cwiseAbs().maxCoeff() > 1e-9)
    throw precondition_error("class representative is not in the Levi factor");
  ParabolicFrame frame{p0, g};
  MatC y = g * class_rep * inverse(g);
  if (!frame.contains(y)) throw postcondition_error("conjugated class left the conjugated parabolic");
  return frame.levi_projection(y);
}

}  // namespace logahoric
