#include "logahoric/io.hpp"

#include <fstream>
#include <sstream>

namespace logahoric::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw parse_error(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

Rational rational_entry(const Json& e) {
  if (e.is_number_integer()) return Rational(e.get<long long>());
  if (e.is_string()) {
    try {
      return Rational::parse(e.get<std::string>());
    } catch (const std::exception& ex) {
      fail("bad rational '" + e.get<std::string>() + "': " + ex.what());
    }
  }
  fail("expected a rational string or an integer, got " + e.dump());
}

cplx complex_entry(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_string()) return {rational_entry(e).to_double(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  fail("expected [re, im], a number or a rational string, got " + e.dump());
}

template <class S, class F>
Mat<S> read_matrix(const Json& j, F entry) {
  if (!j.is_array() || j.empty()) fail("matrix must be a non-empty array of rows");
  const auto rows = static_cast<int>(j.size());
  Mat<S> m(rows, rows);
  for (int r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != rows) fail("matrix must be square");
    for (int c = 0; c < rows; ++c) m(r, c) = entry(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

int index_key(const std::string& k) {
  try {
    std::size_t used = 0;
    int i = std::stoi(k, &used);
    if (used != k.size()) throw std::invalid_argument("trailing");
    return i;
  } catch (const std::exception&) {
    fail("coefficient key '" + k + "' is not an integer");
  }
}

template <class S>
LaurentConnection<S> read_connection(const Json& j, const GroupSpec& g) {
  const Json& cs = field(j, "coeffs");
  if (!cs.is_object()) fail("coeffs must be an object keyed by z-exponent");
  int trunc = 0;
  if (j.contains("truncation")) {
    if (!j["truncation"].is_number_integer()) fail("truncation must be an integer");
    trunc = j["truncation"].get<int>();
  } else {
    for (const auto& [k, v] : cs.items()) trunc = std::max(trunc, index_key(k));
  }
  LaurentConnection<S> a(g, trunc);
  for (const auto& [k, v] : cs.items()) {
    Mat<S> m;
    if constexpr (is_exact_v<S>) m = matrix_q(v);
    else m = matrix_c(v);
    if (m.rows() != g.n) fail("coefficient " + k + " has the wrong size");
    a.set_coeff(index_key(k), m);
  }
  return a;
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("JSON parse error: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const MatC& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const MatQ& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c).str());
    rows.push_back(row);
  }
  return rows;
}

MatC matrix_c(const Json& j) { return read_matrix<cplx>(j, complex_entry); }
MatQ matrix_q(const Json& j) { return read_matrix<Rational>(j, rational_entry); }

bool is_exact_matrix(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& row : j) {
    if (!row.is_array()) return false;
    for (const auto& e : row)
      if (!e.is_string() && !e.is_number_integer()) return false;
  }
  return true;
}

Json to_json(const Weight& w) { return Json(w.strs()); }

Weight weight(const Json& j) {
  if (j.is_string()) {
    try {
      return Weight::parse_csv(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(std::string("bad weight: ") + e.what());
    }
  }
  if (!j.is_array()) fail("weight must be an array of rational strings");
  std::vector<Rational> e;
  for (const auto& x : j) e.push_back(rational_entry(x));
  return Weight(e);
}

Json to_json(const GroupSpec& g) {
  Json j;
  j["family"] = g.family == Family::GL ? "GL" : "SL";
  j["n"] = g.n;
  return j;
}

GroupSpec group(const Json& j) {
  try {
    if (j.is_string()) return GroupSpec::parse(j.get<std::string>());
    const Json& f = field(j, "family");
    const Json& n = field(j, "n");
    if (!f.is_string() || !n.is_number_integer()) fail("group needs a string family and an integer n");
    return GroupSpec::parse(f.get<std::string>() + std::to_string(n.get<int>()));
  } catch (const precondition_error& e) {
    fail(e.what());
  }
}

std::vector<double> doubles(const Json& j) {
  if (!j.is_array()) fail("expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) fail("expected a number, got " + x.dump());
    out.push_back(x.get<double>());
  }
  return out;
}

ConnectionInput connection(const Json& j) {
  GroupSpec g = group(field(j, "group"));
  ConnectionInput in;
  in.theta = j.contains("theta") ? weight(j["theta"]) : Weight(g.n);
  if (in.theta.size() != g.n) fail("theta has the wrong length");
  bool exact = true;
  const Json& cs = field(j, "coeffs");
  if (!cs.is_object()) fail("coeffs must be an object keyed by z-exponent");
  for (const auto& [k, v] : cs.items()) exact = exact && is_exact_matrix(v);
  if (exact) in.connection = read_connection<Rational>(j, g);
  else in.connection = read_connection<cplx>(j, g);
  if (j.contains("orbit_rep")) in.orbit_rep = j["orbit_rep"];
  return in;
}

LaurentMatrix<Rational> laurent_matrix_q(const Json& j) {
  LaurentMatrix<Rational> g;
  const Json& cs = field(j, "coeffs");
  if (!cs.is_object()) fail("coeffs must be an object keyed by z-exponent");
  g.n = j.contains("n") ? j["n"].get<int>() : 0;
  for (const auto& [k, v] : cs.items()) {
    MatQ m = matrix_q(v);
    if (g.n == 0) g.n = static_cast<int>(m.rows());
    if (m.rows() != g.n) fail("Laurent coefficient " + k + " has the wrong size");
    g.add(index_key(k), m);
  }
  if (g.n == 0) fail("empty Laurent matrix needs an explicit n");
  g.prune();
  return g;
}

Json to_json(const ComponentRecord& r) {
  Json j;
  j["row"] = r.a;
  j["col"] = r.b;
  j["i"] = r.i;
  j["level"] = r.level.str();
  j["mu"] = to_json(r.nu);
  j["value"] = to_json(r.value);
  return j;
}

Json to_json(const JordanInvariants& inv) {
  Json out = Json::array();
  for (const auto& b : inv.blocks) {
    Json j;
    j["eigenvalue"] = to_json(b.eigenvalue);
    j["multiplicity"] = b.multiplicity;
    j["ranks"] = b.ranks;
    out.push_back(j);
  }
  return out;
}

Json to_json(const AffineWeylElement& x) {
  Json j;
  j["w"] = x.w;
  j["lambda"] = x.lambda;
  return j;
}

AffineWeylElement affine_weyl(const Json& j) {
  try {
    auto w = field(j, "w").get<std::vector<int>>();
    AffineWeylElement x = AffineWeylElement::permutation(w);
    if (j.contains("lambda")) x.lambda = j["lambda"].get<std::vector<long long>>();
    if (x.lambda.size() != x.w.size()) fail("w and lambda differ in length");
    return x;
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("bad affine Weyl element: ") + e.what());
  } catch (const precondition_error& e) {
    fail(e.what());
  }
}

Json to_json(const EnrichedMonodromyDatum& d) {
  Json j;
  j["M"] = to_json(d.M);
  j["phi"] = to_json(d.parabolic.weight());
  Json blocks = Json::array();
  for (const auto& b : d.parabolic.levi_blocks()) blocks.push_back(b);
  j["levi_blocks"] = blocks;
  j["class_representative"] = to_json(d.certificate.representative);
  Json inv = Json::array();
  for (const auto& i : d.certificate.invariants) inv.push_back(to_json(i));
  j["class_invariants"] = inv;
  return j;
}

Json to_json(const BettiParameters& p) {
  Json j;
  j["theta"] = to_json(p.theta);
  j["tau"] = to_json(p.tau);
  j["sigma"] = p.sigma;
  j["phi"] = to_json(p.phi());
  j["n"] = to_json(p.n);
  return j;
}

Json to_json(const HodgeTable& t) {
  auto column = [](const HodgeColumn& c) {
    Json j;
    j["weights"] = to_json(c.weights);
    j["eigenvalues_real"] = to_json(c.eigen_real);
    std::vector<double> im;
    for (double x : c.eigen_imag) im.push_back(x + 0.0);  // no -0
    j["eigenvalues_imag"] = im;
    return j;
  };
  Json j;
  j["dolbeault"] = column(t.dolbeault);
  j["de_rham"] = column(t.derham);
  Json b;
  b["weights"] = to_json(t.betti_weights);
  Json e = Json::array();
  for (cplx z : t.betti_eigenvalues) e.push_back(to_json(z));
  b["eigenvalues"] = e;
  j["betti"] = b;
  return j;
}

BettiInput betti(const Json& j) {
  BettiInput in;
  in.M = matrix_c(field(j, "M"));
  in.phi = weight(field(j, "phi"));
  in.tau = weight(field(j, "tau"));
  const int n = static_cast<int>(in.M.rows());
  in.sigma = j.contains("sigma") ? doubles(j["sigma"]) : std::vector<double>(static_cast<std::size_t>(n), 0.0);
  if (j.contains("group")) in.family = group(j["group"]).family;
  if (in.phi.size() != n || in.tau.size() != n || static_cast<int>(in.sigma.size()) != n)
    fail("M, phi, tau and sigma differ in size");
  return in;
}

}  // namespace logahoric::io
