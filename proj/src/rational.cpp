#include "logahoric/rational.hpp"
#include "logahoric/types.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace logahoric {

Rational Rational::parse(std::string_view s) {
  auto trim = [](std::string_view t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return t;
  };
  s = trim(s);
  auto as_int = [](std::string_view t) {
    if (t.empty()) throw precondition_error("empty rational component");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw precondition_error("malformed rational '" + std::string(t) + "'");
    for (std::size_t k = i; k < t.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(t[k])))
        throw precondition_error("malformed rational '" + std::string(t) + "'");
    return mp::cpp_int(std::string(t[0] == '+' ? t.substr(1) : t));
  };
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(mp::cpp_rational(as_int(s)));
  mp::cpp_int p = as_int(trim(s.substr(0, slash)));
  mp::cpp_int q = as_int(trim(s.substr(slash + 1)));
  if (q == 0) throw precondition_error("rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return Rational(mp::cpp_rational(p, q));
}

long long Rational::to_ll() const {
  if (!is_integer()) throw precondition_error("rational " + str() + " is not an integer");
  mp::cpp_int n = num();
  if (n > std::numeric_limits<long long>::max() || n < std::numeric_limits<long long>::min())
    throw precondition_error("integer out of range");
  return n.convert_to<long long>();
}

std::string Rational::str() const {
  if (is_integer()) return num().str();
  return num().str() + "/" + den().str();
}

Rational Rational::floor() const {
  mp::cpp_int n = num(), d = den();
  mp::cpp_int q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return Rational(mp::cpp_rational(q));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational rationalize(double x, long long max_den, double tol) {
  if (!std::isfinite(x)) throw precondition_error("cannot rationalize non-finite value");
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    long long ai = static_cast<long long>(a);
    long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) break;
    double f = r - a;
    if (f < 1e-15) break;
    r = 1.0 / f;
  }
  if (q1 == 0 || std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) > tol)
    throw numerical_error("no rational with denominator <= " + std::to_string(max_den) +
                          " within tolerance of " + std::to_string(x));
  return Rational(p1, q1);
}

// ---- GroupSpec / Weight ----

GroupSpec GroupSpec::parse(const std::string& s) {
  if (s.size() < 3) throw precondition_error("malformed group '" + s + "'");
  GroupSpec g;
  std::string fam = s.substr(0, 2);
  if (fam == "GL") g.family = Family::GL;
  else if (fam == "SL") g.family = Family::SL;
  else throw precondition_error("unknown group family '" + fam + "'");
  try {
    std::size_t used = 0;
    g.n = std::stoi(s.substr(2), &used);
    if (used != s.size() - 2) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw precondition_error("malformed group '" + s + "'");
  }
  if (g.n < 1) throw precondition_error("group rank must be positive");
  return g;
}

std::string GroupSpec::str() const {
  return (family == Family::GL ? "GL" : "SL") + std::to_string(n);
}

Weight Weight::parse(const std::vector<std::string>& entries) {
  std::vector<Rational> e;
  for (const auto& s : entries) e.push_back(Rational::parse(s));
  return Weight(std::move(e));
}

Weight Weight::parse_csv(const std::string& csv) {
  std::vector<std::string> parts;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.empty()) throw precondition_error("empty weight");
  return parse(parts);
}

Rational Weight::sum() const {
  Rational s(0);
  for (const auto& x : e_) s += x;
  return s;
}

Rational Weight::spread() const {
  if (e_.empty()) return Rational(0);
  Rational lo = e_[0], hi = e_[0];
  for (const auto& x : e_) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi - lo;
}

bool Weight::is_integral() const {
  for (const auto& x : e_)
    if (!x.is_integer()) return false;
  return true;
}

Weight Weight::floor() const {
  std::vector<Rational> f;
  for (const auto& x : e_) f.push_back(x.floor());
  return Weight(std::move(f));
}

std::vector<long long> Weight::to_integers() const {
  std::vector<long long> v;
  for (const auto& x : e_) v.push_back(x.to_ll());
  return v;
}

std::vector<std::string> Weight::strs() const {
  std::vector<std::string> v;
  for (const auto& x : e_) v.push_back(x.str());
  return v;
}

std::vector<double> Weight::to_doubles() const {
  std::vector<double> v;
  for (const auto& x : e_) v.push_back(x.to_double());
  return v;
}

Weight Weight::operator-() const {
  std::vector<Rational> v;
  for (const auto& x : e_) v.push_back(-x);
  return Weight(std::move(v));
}

Weight operator+(const Weight& a, const Weight& b) {
  if (a.size() != b.size()) throw precondition_error("weight size mismatch");
  Weight r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Weight operator-(const Weight& a, const Weight& b) { return a + (-b); }

std::ostream& operator<<(std::ostream& os, const Weight& w) {
  os << "(";
  for (int i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  return os << ")";
}

}  // namespace logahoric
