#pragma once

#include "logahoric/types.hpp"

#include <Eigen/SVD>

namespace logahoric {

struct RankInfo {
  int rank = 0;
  bool grey = false;  // some singular value in [1e-10, 1e-6] relative
  double smallest_kept = 0;
  double largest_dropped = 0;
};

namespace detail {

// Reduced row echelon form by Gauss-Jordan. Exact over Rational; partial
// pivoting with an absolute threshold over complex.
template <class S>
std::vector<int> rref(Mat<S>& a, double tol) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int best = -1;
    double best_mag = 0;
    for (int i = r; i < a.rows(); ++i) {
      double m = magnitude(a(i, c));
      if (is_exact_v<S>) {
        if (!is_zero(a(i, c))) { best = i; break; }
      } else if (m > tol && m > best_mag) {
        best = i;
        best_mag = m;
      }
    }
    if (best < 0) continue;
    a.row(r).swap(a.row(best));
    S inv = S(1) / a(r, c);
    for (int j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || is_zero(a(i, c))) continue;
      S f = a(i, c);
      for (int j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline RankInfo rank_info(const MatC& a, double rel_tol = 1e-8) {
  RankInfo info;
  if (a.size() == 0) return info;
  Eigen::JacobiSVD<MatC> svd(a);
  const auto& s = svd.singularValues();
  double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  info.smallest_kept = scale;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    double rel = s(i) / scale;
    if (rel > rel_tol) {
      ++info.rank;
      info.smallest_kept = std::min(info.smallest_kept, s(i));
    } else {
      info.largest_dropped = std::max(info.largest_dropped, s(i));
    }
    if (rel >= 1e-10 && rel <= 1e-6) info.grey = true;
  }
  return info;
}

template <class S>
int rank(const Mat<S>& a, double tol = 1e-8) {
  if constexpr (is_exact_v<S>) {
    Mat<S> b = a;
    return static_cast<int>(detail::rref(b, 0.0).size());
  } else {
    return rank_info(a, tol).rank;
  }
}

// Columns span the right kernel.
template <class S>
Mat<S> kernel_basis(const Mat<S>& a, double tol = 1e-8) {
  const int n = static_cast<int>(a.cols());
  if constexpr (is_exact_v<S>) {
    Mat<S> b = a;
    auto piv = detail::rref(b, 0.0);
    std::vector<int> is_piv(n, -1);
    for (std::size_t k = 0; k < piv.size(); ++k) is_piv[piv[k]] = static_cast<int>(k);
    std::vector<int> free;
    for (int c = 0; c < n; ++c)
      if (is_piv[c] < 0) free.push_back(c);
    Mat<S> ker = zeros<S>(n, static_cast<int>(free.size()));
    for (std::size_t f = 0; f < free.size(); ++f) {
      ker(free[f], f) = S(1);
      for (std::size_t k = 0; k < piv.size(); ++k) ker(piv[k], f) = -b(k, free[f]);
    }
    return ker;
  } else {
    if (a.rows() == 0) return identity<S>(n);
    Eigen::JacobiSVD<MatC> svd(a, Eigen::ComputeFullV);
    int r = rank_info(a, tol).rank;
    return svd.matrixV().rightCols(n - r);
  }
}

template <class S>
Mat<S> inverse(const Mat<S>& a, double tol = 1e-12) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw precondition_error("inverse of non-square matrix");
  if constexpr (is_exact_v<S>) {
    Mat<S> aug(n, 2 * n);
    aug.leftCols(n) = a;
    aug.rightCols(n) = identity<S>(n);
    auto piv = detail::rref(aug, 0.0);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1)
      throw precondition_error("matrix is singular");
    return aug.rightCols(n);
  } else {
    Eigen::FullPivLU<MatC> lu(a);
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (lu.rank() < n || std::abs(lu.determinant()) < tol * std::pow(scale, n))
      throw precondition_error("matrix is singular");
    return lu.inverse();
  }
}

template <class S>
S determinant(const Mat<S>& a) {
  if constexpr (is_exact_v<S>) {
    Mat<S> b = a;
    const int n = static_cast<int>(b.rows());
    S det(1);
    for (int c = 0; c < n; ++c) {
      int p = -1;
      for (int i = c; i < n; ++i)
        if (!is_zero(b(i, c))) { p = i; break; }
      if (p < 0) return S(0);
      if (p != c) { b.row(p).swap(b.row(c)); det = -det; }
      det *= b(c, c);
      for (int i = c + 1; i < n; ++i) {
        if (is_zero(b(i, c))) continue;
        S f = b(i, c) / b(c, c);
        for (int j = c; j < n; ++j) b(i, j) -= f * b(c, j);
      }
    }
    return det;
  } else {
    return a.determinant();
  }
}

template <class S>
Mat<S> commutator(const Mat<S>& a, const Mat<S>& b) {
  return a * b - b * a;
}

template <class S>
S trace_form(const Mat<S>& a, const Mat<S>& b) {
  return (a * b).trace();
}

}  // namespace logahoric
