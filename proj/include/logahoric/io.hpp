#pragma once

#include "logahoric/apartment.hpp"
#include "logahoric/rhmap.hpp"

#include <json.hpp>

#include <variant>

namespace logahoric::io {

using Json = nlohmann::ordered_json;

// Malformed or inconsistent JSON input.
struct parse_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Json parse(const std::string& text);
Json read_file(const std::string& path);

// Matrices are row-major arrays. Complex entries are [re, im] pairs; exact
// entries are "p/q" strings or integers.
Json to_json(const MatC& m);
Json to_json(const MatQ& m);
MatC matrix_c(const Json& j);
MatQ matrix_q(const Json& j);
bool is_exact_matrix(const Json& j);

Json to_json(const Weight& w);
Weight weight(const Json& j);
Json to_json(const GroupSpec& g);
GroupSpec group(const Json& j);
Json to_json(cplx z);
std::vector<double> doubles(const Json& j);

// {"group", "theta", "coeffs": {"i": matrix}, "truncation": k}; A = sum A_i z^i dz/z.
// Exact when every coefficient entry is a string or an integer.
struct ConnectionInput {
  std::variant<LaurentConnection<Rational>, LaurentConnection<cplx>> connection;
  Weight theta;
  std::optional<Json> orbit_rep;
  bool exact() const { return connection.index() == 0; }
};
ConnectionInput connection(const Json& j);

template <class S>
Json to_json(const LaurentConnection<S>& a, const Weight& theta) {
  Json j;
  j["group"] = to_json(a.group());
  j["theta"] = to_json(theta);
  Json cs = Json::object();
  for (const auto& [k, m] : a.coeffs()) cs[std::to_string(k)] = to_json(m);
  j["coeffs"] = cs;
  const auto& known = a.known_order();
  if (known.size() && known.minCoeff() == known.maxCoeff()) {
    j["truncation"] = known(0, 0);
  } else {
    Json rows = Json::array();
    for (int x = 0; x < a.n(); ++x) {
      Json row = Json::array();
      for (int y = 0; y < a.n(); ++y) row.push_back(known(x, y));
      rows.push_back(row);
    }
    j["known_order"] = rows;
  }
  return j;
}

template <class S>
Json to_json(const LaurentMatrix<S>& g) {
  Json j;
  j["n"] = g.n;
  Json cs = Json::object();
  for (const auto& [k, m] : g.coeffs) cs[std::to_string(k)] = to_json(m);
  j["coeffs"] = cs;
  return j;
}
LaurentMatrix<Rational> laurent_matrix_q(const Json& j);

template <class S>
Json to_json(const GaugeFactor<S>& f) {
  using K = typename GaugeFactor<S>::Kind;
  Json j;
  j["kind"] = f.describe();
  switch (f.kind) {
    case K::Constant:
    case K::Levi: j["h"] = to_json(f.m); break;
    case K::Exp:
      j["x"] = to_json(f.m);
      j["i"] = f.i;
      break;
    case K::TorusPower: j["lambda"] = to_json(f.weight); break;
    case K::Laurent:
      j["g"] = to_json(f.g);
      j["g_inverse"] = to_json(f.ginv);
      break;
  }
  if (f.kind == K::Levi) j["theta"] = to_json(f.weight);
  return j;
}

Json to_json(const ComponentRecord& r);
Json to_json(const JordanInvariants& inv);
Json to_json(const AffineWeylElement& x);
AffineWeylElement affine_weyl(const Json& j);

template <class S>
Json to_json(const NormalFormResult<S>& r, const Weight& theta) {
  Json j;
  j["complete"] = r.complete;
  j["weight_bound"] = r.weight_bound.str();
  j["normalized"] = to_json(r.normalized, theta);
  Json word = Json::array();
  for (const auto& f : r.gauge.factors) word.push_back(to_json(f));
  j["gauge_word"] = word;
  Json ret = Json::array(), elim = Json::array();
  for (const auto& c : r.retained) ret.push_back(to_json(c));
  for (const auto& c : r.eliminated) elim.push_back(to_json(c));
  j["retained"] = ret;
  j["eliminated"] = elim;
  return j;
}

Json to_json(const EnrichedMonodromyDatum& d);
Json to_json(const BettiParameters& p);
Json to_json(const HodgeTable& t);

// {"M": matrix, "phi": weight, "tau": weight, "sigma": [..], "group": optional}
struct BettiInput {
  MatC M;
  Weight phi, tau;
  std::vector<double> sigma;
  Family family = Family::GL;
};
BettiInput betti(const Json& j);

}  // namespace logahoric::io
