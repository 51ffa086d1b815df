#pragma once

#include "logahoric/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace logahoric {

using cplx = std::complex<double>;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatC = Mat<cplx>;
using MatQ = Mat<Rational>;
using VecC = Vec<cplx>;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kTwoPiI{0.0, 2.0 * kPi};

// A documented contract was broken by the caller (bad input).
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
// An internal postcondition failed; indicates a bug or numerical breakdown.
struct postcondition_error : std::logic_error {
  using std::logic_error::logic_error;
};
// Coefficients would be pushed past the known jet order.
struct truncation_overflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Eigenvalue clustering or rank decisions could not be made reliably.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family { GL, SL };

struct GroupSpec {
  Family family = Family::GL;
  int n = 1;

  static GroupSpec parse(const std::string& s);  // "GL3", "SL2"
  std::string str() const;
  int dim() const { return family == Family::GL ? n * n : n * n - 1; }
  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

// Element of t_R (or X_*(T) when integral) with exact rational entries.
class Weight {
 public:
  Weight() = default;
  explicit Weight(int n) : e_(static_cast<std::size_t>(n), Rational(0)) {}
  Weight(std::vector<Rational> e) : e_(std::move(e)) {}
  Weight(std::initializer_list<Rational> e) : e_(e) {}

  static Weight parse(const std::vector<std::string>& entries);
  static Weight parse_csv(const std::string& csv);  // "1/2,0,-1/2"

  int size() const { return static_cast<int>(e_.size()); }
  const Rational& operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  Rational& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }
  const std::vector<Rational>& entries() const { return e_; }

  Rational sum() const;
  Rational spread() const;  // max - min
  bool is_integral() const;
  Weight floor() const;
  std::vector<long long> to_integers() const;
  std::vector<std::string> strs() const;
  std::vector<double> to_doubles() const;

  template <class S>
  Mat<S> diag() const;

  Weight operator-() const;
  friend Weight operator+(const Weight& a, const Weight& b);
  friend Weight operator-(const Weight& a, const Weight& b);
  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  std::vector<Rational> e_;
};

std::ostream& operator<<(std::ostream& os, const Weight& w);

// Scalar plumbing shared by the exact and float paths.
inline bool is_zero(const Rational& x, double = 0.0) { return x == 0; }
inline bool is_zero(const cplx& x, double tol = 0.0) { return std::abs(x) <= tol; }
inline double magnitude(const Rational& x) { return std::abs(x.to_double()); }
inline double magnitude(const cplx& x) { return std::abs(x); }
inline cplx to_complex(const Rational& x) { return {x.to_double(), 0.0}; }
inline cplx to_complex(const cplx& x) { return x; }

template <class S>
S scalar_from(const Rational& r);
template <>
inline Rational scalar_from<Rational>(const Rational& r) { return r; }
template <>
inline cplx scalar_from<cplx>(const Rational& r) { return {r.to_double(), 0.0}; }

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
MatC to_complex(const Mat<S>& m) {
  MatC out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_complex(m(i, j));
  return out;
}

template <class S>
double max_abs(const Mat<S>& m) {
  double r = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r = std::max(r, magnitude(m(i, j)));
  return r;
}

template <class S>
Mat<S> zeros(int r, int c) {
  return Mat<S>::Constant(r, c, S(0));
}
template <class S>
Mat<S> identity(int n) {
  Mat<S> m = zeros<S>(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = S(1);
  return m;
}

template <class S>
Mat<S> Weight::diag() const {
  Mat<S> m = zeros<S>(size(), size());
  for (int i = 0; i < size(); ++i) m(i, i) = scalar_from<S>((*this)[i]);
  return m;
}

}  // namespace logahoric
