#include "logahoric/acceptance.hpp"
#include "logahoric/quasiham.hpp"
#include "logahoric/rootcomb.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace logahoric;
using io::Json;

namespace {

// Failed check inside a command: exit status 1.
struct check_failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw io::parse_error("cannot write '" + path + "'");
    os = &file;
  }
  void line(const Json& j) { *os << j.dump() << '\n'; }
};

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw io::parse_error("bad number '" + item + "'");
    }
  }
  return out;
}

std::vector<long long> parse_integers(const std::string& csv) {
  std::vector<long long> out;
  for (double d : parse_doubles(csv)) {
    if (d != static_cast<double>(static_cast<long long>(d))) throw io::parse_error("expected integers in '" + csv + "'");
    out.push_back(static_cast<long long>(d));
  }
  return out;
}

Weight parse_weight(const std::string& csv) {
  try {
    return Weight::parse_csv(csv);
  } catch (const std::exception& e) {
    throw io::parse_error("bad weight '" + csv + "': " + e.what());
  }
}

std::vector<double> sigma_or_zero(const std::string& csv, int n) {
  if (csv.empty()) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  auto s = parse_doubles(csv);
  if (static_cast<int>(s.size()) != n) throw io::parse_error("sigma has the wrong length");
  return s;
}

Json matrix_json(const MatC& m) { return io::to_json(m); }

// ---- classify ----

void cmd_classify(Output& out, const std::string& type, int rank, bool affine) {
  if (type.size() != 1) throw io::parse_error("type must be a single letter A-G");
  using namespace rootcomb;
  if (!valid_rank(type[0], rank)) throw precondition_error("no root system " + type + std::to_string(rank));
  auto d = make_root_datum(type[0], rank);
  Json j;
  j["type"] = type;
  j["rank"] = rank;
  j["parabolic_classes"] = parabolic_class_count(d);
  j["parahoric_classes"] = parahoric_class_count(d);
  out.line(j);
  if (!affine) return;
  for (unsigned m : proper_affine_subsets(d)) {
    auto nodes = nodes_of_mask(m, rank + 1);
    Json row;
    row["nodes"] = nodes;
    row["levi"] = levi_type_of_affine_subset(d, nodes).str();
    out.line(row);
  }
}

// ---- normalize / monodromy ----

template <class S>
struct Normalized {
  NormalData data;
  LaurentConnection<S> input;
  NormalFormResult<S> result;
  bool prepared = false;
};

template <class S>
Normalized<S> run_normalize(const LaurentConnection<S>& a, const Weight& theta, const std::optional<Json>& orbit,
                            const std::string& tau, const std::string& sigma) {
  Normalized<S> n;
  n.input = a;
  if (!tau.empty()) {
    n.data = NormalData{theta, parse_weight(tau), sigma_or_zero(sigma, a.n())};
    n.result = normalize(a, n.data);
    return n;
  }
  Mat<S> rep;
  if (orbit) {
    if constexpr (is_exact_v<S>) rep = io::matrix_q(*orbit);
    else rep = io::matrix_c(*orbit);
  } else {
    LaurentConnection<S> clean = a;
    if constexpr (!is_exact_v<S>) clean = clean_to_A_theta(a, theta);
    rep = weight_zero_part(clean, theta).b;
  }
  auto p = prepare_weight_zero(a, theta, rep);
  n.data = p.shape.data;
  n.input = p.connection;
  n.result = normalize(p.connection, n.data);
  n.prepared = true;
  return n;
}

template <class F>
void with_connection(const io::ConnectionInput& in, bool force_complex, F&& f) {
  if (in.exact() && !force_complex) f(std::get<0>(in.connection));
  else if (in.exact()) f(std::get<0>(in.connection).template cast<cplx>());
  else f(std::get<1>(in.connection));
}

bool nonzero_sigma(const std::string& csv) {
  if (csv.empty()) return false;
  for (double s : parse_doubles(csv))
    if (s != 0.0) return true;
  return false;
}

Json data_json(const NormalData& d) {
  Json j;
  j["theta"] = io::to_json(d.theta);
  j["tau"] = io::to_json(d.tau);
  j["sigma"] = d.sigma;
  j["phi"] = io::to_json(d.phi());
  return j;
}

void cmd_normalize(Output& out, const std::string& path, const std::string& tau, const std::string& sigma) {
  auto in = io::connection(io::read_file(path));
  with_connection(in, nonzero_sigma(sigma), [&](const auto& a) {
    auto n = run_normalize(a, in.theta, in.orbit_rep, tau, sigma);
    Json j;
    j["data"] = data_json(n.data);
    j["prepared"] = n.prepared;
    j["result"] = io::to_json(n.result, n.data.theta);
    out.line(j);
  });
}

void cmd_monodromy(Output& out, const std::string& path, const std::string& tau, const std::string& sigma,
                   bool oracle, double tol) {
  auto in = io::connection(io::read_file(path));
  with_connection(in, nonzero_sigma(sigma), [&](const auto& a) {
    auto n = run_normalize(a, in.theta, in.orbit_rep, tau, sigma);
    if (!n.result.complete) throw truncation_overflow("normal form incomplete: truncation too small for spread(phi)");
    auto m = monodromy_of_normal(n.result, n.data);
    Json j;
    j["data"] = data_json(n.data);
    j["M"] = matrix_json(m.M);
    j["N"] = matrix_json(m.N);
    j["invariants"] = io::to_json(jordan_invariants(m.M));
    bool ok = true;
    if (oracle) {
      auto ode = ode_monodromy(n.input);
      // the prepared connection is Levi-conjugate to the input; compare classes
      const bool same = same_invariants(jordan_invariants(ode.M), jordan_invariants(m.M), std::max(tol, 1e-6));
      Json o;
      o["M"] = matrix_json(ode.M);
      o["error_estimate"] = ode.error_estimate;
      o["max_entry_gap"] = (ode.M - m.M).cwiseAbs().maxCoeff();
      o["same_jordan_class"] = same;
      j["oracle"] = o;
      ok = same;
    }
    out.line(j);
    if (!ok) throw check_failed("ODE monodromy is not conjugate to t exp(2 pi i R)");
  });
}

// ---- rh ----

template <class S>
BettiResult<S> betti_of(const LaurentConnection<S>& a, const Weight& theta, const std::optional<Json>& orbit) {
  Mat<S> rep;
  if (orbit) {
    if constexpr (is_exact_v<S>) rep = io::matrix_q(*orbit);
    else rep = io::matrix_c(*orbit);
  } else {
    LaurentConnection<S> clean = a;
    if constexpr (!is_exact_v<S>) clean = clean_to_A_theta(a, theta);
    rep = weight_zero_part(clean, theta).b;
  }
  return to_betti(a, theta, rep);
}

template <class S>
Json betti_json(const BettiResult<S>& r) {
  Json j;
  j["datum"] = io::to_json(r.datum);
  j["parameters"] = io::to_json(r.params);
  return j;
}

void cmd_rh(Output& out, const std::string& mode, const std::string& path, double tol) {
  Json file = io::read_file(path);
  if (mode == "from-betti") {
    auto in = io::betti(file);
    auto fb = from_betti(in.M, in.phi, in.tau, in.sigma, in.family, tol);
    Json j;
    j["connection"] = io::to_json(fb.connection, fb.theta);
    j["theta"] = io::to_json(fb.theta);
    j["N"] = matrix_json(fb.N);
    out.line(j);
    return;
  }
  auto in = io::connection(file);
  with_connection(in, false, [&](const auto& a) {
    auto r = betti_of(a, in.theta, in.orbit_rep);
    if (mode == "to-betti") {
      out.line(betti_json(r));
      return;
    }
    // de Rham -> Betti -> de Rham, then Betti -> de Rham -> Betti
    auto fb = from_betti(r.datum.M, r.params.phi(), r.params.tau, r.params.sigma, a.group().family);
    LaurentConnection<cplx> normal;
    if constexpr (is_exact_v<std::decay_t<decltype(r.normal.normalized.entry(0, 0, 0))>>)
      normal = r.normal.normalized.template cast<cplx>();
    else normal = r.normal.normalized;
    const double a_err = distance(fb.connection, normal);
    auto back = to_betti(fb.connection, fb.theta, weight_zero_part(fb.connection, fb.theta).b);
    const double m_err = (back.datum.M - r.datum.M).cwiseAbs().maxCoeff();
    const bool ok = a_err < 1e-8 && m_err < 1e-8 && fb.theta == in.theta &&
                    back.datum.parabolic == r.datum.parabolic;
    Json j = betti_json(r);
    j["normal_form_error"] = a_err;
    j["monodromy_error"] = m_err;
    j["pass"] = ok;
    out.line(j);
    if (!ok) throw check_failed("round trip does not reproduce the normal form and monodromy");
  });
}

void cmd_hodge(Output& out, const std::string& tau, const std::string& theta, const std::string& sigma) {
  Weight t = parse_weight(tau);
  Weight th = theta.empty() ? Weight(t.size()) : parse_weight(theta);
  out.line(io::to_json(hodge_rotation(t, sigma_or_zero(sigma, t.size()), th)));
}

// ---- qh-check ----

Weight parabolic_weight(const std::string& spec, int n) {
  if (spec == "borel") {
    Weight w(n);
    for (int a = 0; a < n; ++a) w[a] = Rational(n - 1 - a);
    return w;
  }
  if (spec == "full" || spec == "G") return Weight(n);
  auto sizes = parse_integers(spec);
  Weight w(n);
  int at = 0, level = static_cast<int>(sizes.size()) - 1;
  for (long long s : sizes) {
    if (s < 1) throw io::parse_error("block sizes must be positive");
    for (long long k = 0; k < s; ++k, ++at) {
      if (at >= n) throw io::parse_error("block sizes exceed the rank");
      w[at] = Rational(level);
    }
    --level;
  }
  if (at != n) throw io::parse_error("block sizes must add up to the rank");
  return w;
}

void cmd_qh(Output& out, const std::string& group, const std::string& parabolic, int points, std::uint64_t seed) {
  GroupSpec g;
  try {
    g = GroupSpec::parse(group);
  } catch (const precondition_error& e) {
    throw io::parse_error(e.what());
  }
  QHSpace s(g, ParabolicData(parabolic_weight(parabolic, g.n)));
  std::mt19937_64 rng(seed);
  auto combo = [&](const std::vector<MatC>& basis) {
    MatC o = MatC::Zero(g.n, g.n);
    std::normal_distribution<double> nd;
    for (const auto& b : basis) {
      double re = nd(rng);
      o += cplx(re, nd(rng)) * b;
    }
    return o;
  };
  auto tangent = [&] { return QHTangent{combo(s.g_basis()), combo(s.p_basis())}; };
  const auto basis = tangent_basis(s);
  double qh2 = 0, qh1 = 0;
  int kernel_min = 1 << 30, kernel_max = -1, mismatches = 0, nonmonotone = 0;
  for (int k = 0; k < points; ++k) {
    auto m = random_point(s, rng);
    qh2 = std::max(qh2, check_qh2(s, m, combo(s.g_basis()), combo(s.l_basis()), basis).residual);
    auto q3 = check_qh3(s, m);
    kernel_min = std::min(kernel_min, q3.kernel_dim);
    kernel_max = std::max(kernel_max, q3.kernel_dim);
    mismatches += (q3.kernel_dim == q3.u_dim && q3.subspace_match) ? 0 : 1;
    auto q1 = check_qh1(s, m, tangent(), tangent(), tangent());
    qh1 = std::max(qh1, q1.residual_fine);
    nonmonotone += q1.monotone ? 0 : 1;
  }
  const bool ok = qh2 < 1e-8 && mismatches == 0 && qh1 < 1e-4 && nonmonotone == 0;
  Json j;
  j["group"] = io::to_json(g);
  j["parabolic_weight"] = io::to_json(s.p0.weight());
  j["points"] = points;
  j["seed"] = seed;
  j["qh2_max_residual"] = qh2;
  j["qh3_dim_u"] = s.p0.dim_unipotent();
  j["qh3_kernel_dim_min"] = points ? kernel_min : 0;
  j["qh3_kernel_dim_max"] = points ? kernel_max : 0;
  j["qh3_mismatches"] = mismatches;
  j["qh1_max_residual"] = qh1;
  j["qh1_nonmonotone"] = nonmonotone;
  j["pass"] = ok;
  out.line(j);
  if (!ok) throw check_failed("quasi-Hamiltonian axiom check failed");
}

// ---- apartment ----

AffineWeylElement affine_from_flags(const std::string& w, const std::string& lambda, int n) {
  std::vector<int> perm;
  if (w.empty()) {
    perm = AffineWeylElement::identity(n).w;
  } else {
    for (long long v : parse_integers(w)) perm.push_back(static_cast<int>(v));
  }
  AffineWeylElement x;
  try {
    x = AffineWeylElement::permutation(perm);
  } catch (const precondition_error& e) {
    throw io::parse_error(e.what());
  }
  if (!lambda.empty()) x.lambda = parse_integers(lambda);
  if (x.n() != n || static_cast<int>(x.lambda.size()) != n) throw io::parse_error("w, lambda and theta differ in length");
  return x;
}

LaurentGroupElement<Rational> group_element(const Json& j, int n) {
  if (j.contains("monomial")) return LaurentGroupElement<Rational>::monomial(io::affine_weyl(j["monomial"]));
  if (!j.contains("g") || !j.contains("inverse"))
    throw io::parse_error("group element needs 'g' and 'inverse', or 'monomial'");
  auto e = LaurentGroupElement<Rational>::make(io::laurent_matrix_q(j["g"]), io::laurent_matrix_q(j["inverse"]));
  if (e.g.n != n) throw io::parse_error("group element has the wrong size");
  return e;
}

Json certificate_json(const ParahoricCertificate<Rational>& c) {
  Json j;
  j["member"] = c.member;
  j["orders_ok"] = c.orders_ok;
  j["limit_invertible"] = c.limit_invertible;
  Json v = Json::array();
  for (const auto& o : c.violations) {
    Json e;
    e["row"] = o.row;
    e["col"] = o.col;
    e["order"] = o.order;
    e["excess"] = o.excess.str();
    v.push_back(e);
  }
  j["violations"] = v;
  if (c.orders_ok) j["limit"] = io::to_json(c.limit);
  return j;
}

void cmd_apartment(Output& out, const std::string& mode, const std::string& theta_s, const std::string& path,
                   const std::string& w, const std::string& lambda, long long window) {
  if (mode == "equiv") {
    Json f = io::read_file(path);
    Weight t1 = io::weight(f.at("theta")), t2 = io::weight(f.at("theta2"));
    const int n = t1.size();
    auto g1 = f.contains("g") ? group_element(f["g"], n) : LaurentGroupElement<Rational>::identity(n);
    auto g2 = f.contains("g2") ? group_element(f["g2"], n) : LaurentGroupElement<Rational>::identity(n);
    if (f.contains("window")) window = f["window"].get<long long>();
    auto r = equivalent_weighted_parahorics(g1, t1, g2, t2, window);
    Json j;
    j["verdict"] = to_string(r.verdict);
    j["witness"] = r.witness ? io::to_json(*r.witness) : Json(nullptr);
    j["candidates_tested"] = r.candidates_tested;
    j["candidates_outside_window"] = r.candidates_outside_window;
    out.line(j);
    return;
  }
  if (theta_s.empty()) throw io::parse_error("--theta is required");
  Weight theta = parse_weight(theta_s);
  Json j;
  if (mode == "act") {
    auto x = affine_from_flags(w, lambda, theta.size());
    j["element"] = io::to_json(x);
    j["theta"] = io::to_json(x.act(theta));
  } else if (mode == "member") {
    LaurentMatrix<Rational> g;
    if (!path.empty()) g = io::laurent_matrix_q(io::read_file(path));
    else g = affine_from_flags(w, lambda, theta.size()).monomial<Rational>();
    if (g.n != theta.size()) throw io::parse_error("g and theta differ in size");
    j = certificate_json(extended_parahoric_membership(g, theta));
  } else if (mode == "stab") {
    auto x = affine_from_flags(w, lambda, theta.size());
    auto v = stabilizer_check(x, theta);
    j["element"] = io::to_json(x);
    j["fixed"] = v.fixed;
    j["member"] = v.member;
  } else {
    throw io::parse_error("unknown apartment mode '" + mode + "'");
  }
  out.line(j);
}

// ---- accept ----

void cmd_accept(Output& out, const std::string& suite, std::uint64_t seed, const std::string& only, bool timings) {
  if (suite != "primary") throw io::parse_error("unknown suite '" + suite + "' (only 'primary')");
  std::vector<int> ids;
  if (!only.empty())
    for (long long v : parse_integers(only)) {
      if (v < 1 || v > accept::kCriteria) throw io::parse_error("no criterion " + std::to_string(v));
      ids.push_back(static_cast<int>(v));
    }
  auto results = accept::run_suite(seed, accept::threads_from_env(), ids);
  int passed = 0;
  for (const auto& r : results) {
    out.line(accept::report_line(r, timings));
    passed += r.pass ? 1 : 0;
  }
  Json s;
  s["suite"] = suite;
  s["seed"] = seed;
  s["passed"] = passed;
  s["failed"] = static_cast<int>(results.size()) - passed;
  out.line(s);
  if (passed != static_cast<int>(results.size())) throw check_failed("acceptance criteria failed");
}

void report_error(const char* kind, const std::string& msg) {
  Json j;
  j["error"] = kind;
  j["message"] = msg;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tame parahoric connections: normal forms, the local Riemann-Hilbert map and checks"};
  app.require_subcommand(1);
  std::string out_path;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  app.add_option("--out", out_path, "write JSON lines here instead of stdout");
  app.add_option("--seed", seed, "seed for all random sampling");
  app.add_option("--tol", tol, "numerical tolerance");

  std::string type = "A", in_path, tau, sigma, theta, group = "GL2", parabolic = "borel", mode, w, lambda;
  std::string suite = "primary", only;
  int rank = 1, points = 100;
  bool affine = false, oracle = false, timings = false;
  long long window = 8;

  auto* classify = app.add_subcommand("classify", "parabolic and parahoric class counts");
  classify->add_option("--type", type)->required();
  classify->add_option("--rank", rank)->required();
  classify->add_flag("--affine", affine, "also list proper affine-node subsets and their Levi types");

  auto* normalize_cmd = app.add_subcommand("normalize", "normal form of a connection");
  normalize_cmd->add_option("--in", in_path)->required();
  normalize_cmd->add_option("--tau", tau, "residue weights; derived from the weight-zero part when omitted");
  normalize_cmd->add_option("--sigma", sigma);

  auto* monodromy = app.add_subcommand("monodromy", "formal monodromy of a connection");
  monodromy->add_option("--in", in_path)->required();
  monodromy->add_option("--tau", tau);
  monodromy->add_option("--sigma", sigma);
  monodromy->add_flag("--oracle", oracle, "cross-check by integrating the ODE around the circle");

  auto* rh = app.add_subcommand("rh", "Riemann-Hilbert map");
  rh->add_option("mode", mode, "to-betti | from-betti | roundtrip")
      ->required()
      ->check(CLI::IsMember({"to-betti", "from-betti", "roundtrip"}));
  rh->add_option("--in", in_path)->required();

  auto* hodge = app.add_subcommand("hodge-table", "Dolbeault, de Rham and Betti parameters");
  hodge->add_option("--tau", tau)->required();
  hodge->add_option("--theta", theta);
  hodge->add_option("--sigma", sigma);

  auto* qh = app.add_subcommand("qh-check", "quasi-Hamiltonian axioms on G x P0");
  qh->add_option("--group", group);
  qh->add_option("--parabolic", parabolic, "block sizes such as 2,1, or borel, or full");
  qh->add_option("--points", points)->check(CLI::NonNegativeNumber);
  qh->add_option("--seed", seed);

  auto* apt = app.add_subcommand("apartment", "affine Weyl action and parahoric membership");
  apt->add_option("mode", mode, "act | member | equiv | stab")
      ->required()
      ->check(CLI::IsMember({"act", "member", "equiv", "stab"}));
  apt->add_option("--theta", theta);
  apt->add_option("--in", in_path);
  apt->add_option("--w", w, "permutation as images of 0..n-1");
  apt->add_option("--lambda", lambda, "integral translation");
  apt->add_option("--window", window);

  auto* acc = app.add_subcommand("accept", "run the acceptance suite");
  acc->add_option("--suite", suite);
  acc->add_option("--seed", seed);
  acc->add_option("--criteria", only, "comma-separated subset, e.g. 1,9");
  acc->add_flag("--timings", timings, "include wall times (not byte-reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Output out;
    out.open(out_path);
    if (*classify) cmd_classify(out, type, rank, affine);
    else if (*normalize_cmd) cmd_normalize(out, in_path, tau, sigma);
    else if (*monodromy) cmd_monodromy(out, in_path, tau, sigma, oracle, tol);
    else if (*rh) cmd_rh(out, mode, in_path, tol);
    else if (*hodge) cmd_hodge(out, tau, theta, sigma);
    else if (*qh) cmd_qh(out, group, parabolic, points, seed);
    else if (*apt) cmd_apartment(out, mode, theta, in_path, w, lambda, window);
    else if (*acc) cmd_accept(out, suite, seed, only, timings);
    return 0;
  } catch (const io::parse_error& e) {
    report_error("malformed_input", e.what());
    return 2;
  } catch (const precondition_error& e) {
    report_error("precondition", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    report_error("malformed_input", e.what());
    return 2;
  } catch (const check_failed& e) {
    report_error("check_failed", e.what());
    return 1;
  } catch (const truncation_overflow& e) {
    report_error("truncation_overflow", e.what());
    return 1;
  } catch (const postcondition_error& e) {
    report_error("postcondition", e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("failure", e.what());
    return 1;
  }
}
