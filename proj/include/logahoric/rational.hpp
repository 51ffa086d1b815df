#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace logahoric {

namespace mp = boost::multiprecision;

// Exact rational usable as an Eigen scalar. Thin wrapper: Boost's expression
// templates and Eigen's scalar promotion do not mix.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : v_(v) {}
  Rational(long v) : v_(v) {}
  Rational(long long v) : v_(v) {}
  Rational(long long p, long long q) {
    if (q == 0) throw std::domain_error("rational with zero denominator");
    v_ = mp::cpp_rational(p) / mp::cpp_rational(q);
  }
  explicit Rational(const mp::cpp_rational& v) : v_(v) {}

  static Rational parse(std::string_view s);

  const mp::cpp_rational& value() const { return v_; }
  mp::cpp_int num() const { return mp::numerator(v_); }
  mp::cpp_int den() const { return mp::denominator(v_); }

  bool is_integer() const { return mp::denominator(v_) == 1; }
  long long to_ll() const;  // throws unless integral and in range
  double to_double() const { return v_.convert_to<double>(); }
  std::string str() const;  // "p/q" or "p"

  Rational floor() const;
  Rational ceil() const { return -(-*this).floor(); }
  Rational frac() const { return *this - floor(); }
  Rational abs() const { return v_ < 0 ? -*this : *this; }
  int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

  Rational operator-() const { return Rational(mp::cpp_rational(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  mp::cpp_rational v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Best rational approximation with bounded denominator (continued fractions).
Rational rationalize(double x, long long max_den, double tol);

// Eigen occasionally asks for these by ADL.
inline Rational abs(const Rational& r) { return r.abs(); }
inline Rational conj(const Rational& r) { return r; }
inline Rational real(const Rational& r) { return r; }
inline Rational imag(const Rational&) { return Rational(0); }
inline Rational abs2(const Rational& r) { return r * r; }

}  // namespace logahoric

template <>
struct std::hash<logahoric::Rational> {
  std::size_t operator()(const logahoric::Rational& r) const {
    return std::hash<std::string>{}(r.str());
  }
};

namespace Eigen {
template <>
struct NumTraits<logahoric::Rational> : GenericNumTraits<logahoric::Rational> {
  typedef logahoric::Rational Real;
  typedef logahoric::Rational NonInteger;
  typedef logahoric::Rational Nested;
  typedef logahoric::Rational Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 50,
    MulCost = 100
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
