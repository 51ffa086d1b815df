#include "logahoric/loopconn.hpp"

#include <set>

namespace logahoric {

std::vector<LoopComponent> loop_graded_piece(const Weight& theta, const Rational& r) {
  std::vector<LoopComponent> out;
  const int n = theta.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Rational i = r - (theta[a] - theta[b]);
      if (i.is_integer()) out.push_back({a, b, static_cast<int>(i.to_ll())});
    }
  return out;
}

std::vector<Rational> realized_weights(const Weight& theta, const Rational& lo, const Rational& hi) {
  std::set<Rational> s;
  const int n = theta.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Rational d = theta[a] - theta[b];
      long long i0 = (lo - d).ceil().to_ll(), i1 = (hi - d).floor().to_ll();
      for (long long i = i0; i <= i1; ++i) s.insert(d + Rational(i));
    }
  return {s.begin(), s.end()};
}

}  // namespace logahoric
