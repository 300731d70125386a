// twometric: command-line harness for the 2-metric library.
//
// Exit codes: 0 success, 1 a checked property failed, 2 bad configuration.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "twometric/audit.hpp"
#include "twometric/certify.hpp"
#include "twometric/dynamics.hpp"
#include "twometric/finite_space.hpp"
#include "twometric/lines.hpp"
#include "twometric/quasi.hpp"
#include "twometric/serialize.hpp"
#include "twometric/spaces.hpp"

#ifndef TWOMETRIC_BASELINE_DIR
#define TWOMETRIC_BASELINE_DIR "baselines"
#endif

namespace tw = twometric;
using nlohmann::json;

namespace {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out = ".";
  double tolerance = 1e-9;
  std::string json_config;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

tw::Point parse_point(const std::string& text, int dim) {
  const auto v = parse_list(text);
  if (static_cast<int>(v.size()) != dim)
    throw ConfigError("expected " + std::to_string(dim) + " coordinates in '" + text + "'");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), dim);
}

// "0.25I" or "a,b,c,d" (row major)
Eigen::Matrix2d parse_matrix2(const std::string& text) {
  if (!text.empty() && text.back() == 'I') {
    const auto s = parse_list(text.substr(0, text.size() - 1));
    if (s.size() != 1) throw ConfigError("bad scaled identity '" + text + "'");
    return s[0] * Eigen::Matrix2d::Identity();
  }
  const auto v = parse_list(text);
  if (v.size() != 4) throw ConfigError("expected 4 matrix entries in '" + text + "'");
  Eigen::Matrix2d A;
  A << v[0], v[1], v[2], v[3];
  return A;
}

json typed(const std::string& s) {
  try {
    json j = json::parse(s);
    if (j.is_number() || j.is_boolean()) return j;
  } catch (const json::parse_error&) {
  }
  return s;
}

json resolved_config(const CLI::App& app, const CLI::App& sub) {
  json cfg;
  cfg["command"] = sub.get_name();
  for (const CLI::App* a : {&app, &sub})
    for (const CLI::Option* opt : a->get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "json-config") continue;
      if (opt->count() > 0) {
        const auto& r = opt->results();
        cfg[name] = r.size() == 1 ? typed(r[0]) : json(r);
      } else if (!opt->get_default_str().empty()) {
        cfg[name] = typed(opt->get_default_str());
      }
    }
  return cfg;
}

void write_json(const Globals& g, const std::string& file, const json& j) {
  std::filesystem::create_directories(g.out);
  const auto path = std::filesystem::path(g.out) / file;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
  std::cout << "wrote " << path.string() << '\n';
}

std::ofstream open_out(const Globals& g, const std::string& file) {
  std::filesystem::create_directories(g.out);
  const auto path = std::filesystem::path(g.out) / file;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  std::cout << "wrote " << path.string() << '\n';
  return os;
}

std::string show(const tw::Point& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) s += (i ? ", " : "") + tw::format_double(p[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------

struct SpaceOptions {
  std::string space = "det-sphere";
  std::string table;
  int dim = 3;
  double diameter = 1.0;
  double r = 0.2;
  std::size_t witness = 256;
  std::string witness_kind = "grid";

  void add(CLI::App* sub) {
    sub->add_option("--space", space, "det-sphere, ball, patch or finite")
        ->check(CLI::IsMember({"det-sphere", "ball", "patch", "finite"}));
    sub->add_option("--table", table, "finite table JSON (with --space finite)");
    sub->add_option("--dim", dim, "ball dimension")->check(CLI::Range(2, 64));
    sub->add_option("--diameter", diameter, "ball diameter, at most 1");
    sub->add_option("--r", r, "patch radius, below 1/4");
    sub->add_option("--witness", witness, "witness set size")->check(CLI::PositiveNumber);
    sub->add_option("--witness-kind", witness_kind)->check(CLI::IsMember({"grid", "sample"}));
  }

  struct Built {
    tw::TwoMetricSpace space;
    std::optional<tw::FiniteTwoMetricSpace> table;
  };

  Built build() const {
    if (space == "det-sphere") return {tw::det_sphere_space(), std::nullopt};
    if (space == "ball") return {tw::ball_space(tw::BallConfig{dim, diameter}), std::nullopt};
    if (space == "patch") return {tw::patch_space(tw::PatchConfig{r}), std::nullopt};
    if (table.empty()) throw ConfigError("--space finite needs --table");
    auto t = tw::load_table(table);
    return {t.as_space(), t};
  }

  tw::WitnessSet witnesses(const tw::TwoMetricSpace& s, std::uint64_t seed) const {
    return tw::WitnessSet::make(s, witness_kind == "grid" ? tw::WitnessKind::Grid : tw::WitnessKind::Sample,
                                witness, seed);
  }
};

// ---------------------------------------------------------------------------

struct AuditCmd {
  SpaceOptions space;
  std::size_t samples = 2000;

  void add(CLI::App* sub) {
    space.add(sub);
    sub->add_option("--samples", samples, "tuples per arity")->check(CLI::PositiveNumber);
  }

  int run(const Globals& g, const json& cfg) {
    auto built = space.build();
    const auto W = space.witnesses(built.space, g.seed);
    tw::AuditConfig ac;
    ac.triples = ac.quadruples = ac.quintuples = samples;
    ac.seed = g.seed;
    ac.tolerance = g.tolerance;
    const auto report = tw::audit(built.space, ac, W);

    // antipodal pairs are identified on the sphere, so (N) is informational there
    const bool n_fatal = space.space != "det-sphere";
    const bool ok = report.all_hold(n_fatal);
    for (const auto& r : report.records) {
      const bool holds = r.max_violation <= report.tolerance;
      std::cout << r.axiom << ": max_violation=" << tw::format_double(r.max_violation)
                << (holds ? " ok" : " VIOLATED");
      if (!holds && !r.witness.empty()) {
        std::cout << " witness";
        for (const auto& p : r.witness) std::cout << ' ' << show(p);
      }
      std::cout << '\n';
    }
    std::cout << "witness_error=" << tw::format_double(report.witness_error) << '\n';

    json result = tw::to_json(report);
    result["pass"] = ok;
    if (built.table && ok) {
      json lines = json::array();
      for (const auto& l : tw::enumerate_lines(*built.table)) {
        lines.push_back(*l.members);
        std::cout << "line " << json(*l.members).dump() << '\n';
      }
      result["lines"] = lines;
    }
    write_json(g, "audit.json", {{"config", cfg}, {"result", result}});
    std::cout << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
};

struct SphereMapOptions {
  double k = 0.1, e = 0.5, theta = std::numbers::pi / 7;
  std::string x0 = "0.8,0,0.6";
  std::size_t steps = 200;

  void add(CLI::App* sub) {
    sub->add_option("--k", k, "vertical contraction");
    sub->add_option("--e", e, "tube parameter");
    sub->add_option("--theta", theta, "rotation angle about the vertical axis");
    sub->add_option("--x0", x0, "start point, comma separated");
    sub->add_option("--steps", steps, "orbit length")->check(CLI::PositiveNumber);
  }

  tw::DDecreasingMap make() const {
    auto map = tw::make_sphere_map({k, e, theta});
    if (!map.certified)
      std::cerr << "warning: k >= e^3, contraction factor " << tw::format_double(map.claimed_k)
                << " is not certified\n";
    return map;
  }

  tw::Point start() const {
    tw::Point p = parse_point(x0, 3);
    if (p.norm() == 0.0) throw ConfigError("x0 must be nonzero");
    return p / p.norm();
  }
};

struct DemoEquatorCmd {
  SphereMapOptions map_opts;
  std::size_t witness = 256;
  double eps_col = 1e-6;
  std::size_t line_samples = 64;

  void add(CLI::App* sub) {
    map_opts.add(sub);
    sub->add_option("--witness", witness, "Fibonacci witness grid size")->check(CLI::PositiveNumber);
    sub->add_option("--eps-col", eps_col, "colinearity tolerance for line checks");
    sub->add_option("--line-samples", line_samples)->check(CLI::PositiveNumber);
  }

  int run(const Globals& g, const json& cfg) {
    const auto map = map_opts.make();
    const auto S = tw::det_sphere_space();
    const auto W = tw::WitnessSet::make(S, tw::WitnessKind::Grid, witness, g.seed);
    const tw::Point x0 = map_opts.start();
    tw::OutcomeThresholds th;
    th.eps_col = eps_col;
    th.line_samples = line_samples;
    th.seed = g.seed;

    const auto trace = tw::orbit(map, S, x0, map_opts.steps, W, g.seed);
    {
      auto os = open_out(g, "orbit.csv");
      tw::write_orbit_csv(os, trace, true);
    }
    const auto outcome = tw::detect_outcome(map, S, x0, map_opts.steps, W, th);

    double max_x3 = 0.0;
    for (const auto& m : outcome.line_members) max_x3 = std::max(max_x3, std::abs(m[2]));
    bool ok;
    if (map_opts.theta == 0.0) {
      ok = outcome.kind == tw::OutcomeKind::FixedPoint;
    } else {
      ok = outcome.kind == tw::OutcomeKind::FixedLine && max_x3 <= 1e-6;
    }
    std::cout << "outcome " << tw::to_string(outcome.kind) << ": " << outcome.evidence << '\n';
    if (outcome.line)
      std::cout << "line max|x3|=" << tw::format_double(max_x3)
                << " invariance_defect=" << tw::format_double(outcome.invariance_defect)
                << " min phi(m,F(m))=" << tw::format_double(outcome.min_member_residual) << '\n';
    if (outcome.point) std::cout << "point " << show(*outcome.point) << " residual=" << tw::format_double(outcome.residual) << '\n';
    if (!trace.points.empty())
      std::cout << "final |x3|=" << tw::format_double(std::abs(trace.points.back()[2])) << '\n';

    json result = tw::to_json(outcome);
    result["line_max_abs_x3"] = max_x3;
    result["claimed_k"] = map.claimed_k;
    result["certified"] = map.certified;
    result["pass"] = ok;
    write_json(g, "outcome.json", {{"config", cfg}, {"result", result}});
    std::cout << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
};

struct IterateCmd {
  std::string map = "sphere";
  SphereMapOptions sphere;
  double angle = 2.0 * std::numbers::pi / 5;
  double diameter = 1.0;
  std::string ball_x0 = "0.3,0.1,-0.2";
  std::size_t samples = 2000;
  std::size_t witness = 256;

  void add(CLI::App* sub) {
    sub->add_option("--map", map, "sphere or linear")->check(CLI::IsMember({"sphere", "linear"}));
    sphere.add(sub);
    sub->add_option("--angle", angle, "linear map: rotation about the third axis");
    sub->add_option("--diameter", diameter, "linear map: ball diameter");
    sub->add_option("--ball-x0", ball_x0, "linear map: start point");
    sub->add_option("--samples", samples, "triples for the measured factor")->check(CLI::PositiveNumber);
    sub->add_option("--witness", witness)->check(CLI::PositiveNumber);
  }

  int run(const Globals& g, const json& cfg) {
    const bool on_sphere = map == "sphere";
    const tw::BallConfig ball{3, diameter};
    const auto S = on_sphere ? tw::det_sphere_space() : tw::ball_space(ball);
    const auto W = tw::WitnessSet::make(S, tw::WitnessKind::Grid, witness, g.seed);
    tw::DDecreasingMap F;
    tw::Point x0;
    if (on_sphere) {
      F = sphere.make();
      x0 = sphere.start();
    } else {
      if (!(sphere.k > 0.0 && sphere.k < 1.0)) throw ConfigError("linear map: k must lie in (0, 1)");
      F = tw::make_linear_map(tw::rotation_z(angle), sphere.k, ball);
      x0 = parse_point(ball_x0, 3);
    }
    const auto measured = tw::measured_contraction_factor(F, S, samples, g.seed);
    const auto trace = tw::orbit(F, S, x0, sphere.steps, W, g.seed);
    {
      auto os = open_out(g, "iterate.csv");
      tw::write_orbit_csv(os, trace, on_sphere);
    }
    const bool factor_ok = !F.certified || !measured || *measured <= F.claimed_k + 1e-9;
    const bool ok = !trace.truncated && (!F.certified || trace.decay_ok) && factor_ok;
    std::cout << "claimed_k=" << tw::format_double(F.claimed_k)
              << " measured_k=" << (measured ? tw::format_double(*measured) : "undefined")
              << " decay_excess=" << tw::format_double(trace.max_decay_excess) << " iterates=" << trace.points.size()
              << '\n';
    if (trace.truncated) std::cout << trace.diagnostic << '\n';
    json result{{"claimed_k", F.claimed_k},
                {"certified", F.certified},
                {"measured_k", measured ? json(*measured) : json(nullptr)},
                {"iterates", trace.points.size()},
                {"truncated", trace.truncated},
                {"diagnostic", trace.diagnostic},
                {"decay_triples", trace.decay_triples},
                {"max_decay_excess", trace.max_decay_excess},
                {"final", trace.points.empty() ? json(nullptr) : tw::to_json(trace.points.back())},
                {"pass", ok}};
    write_json(g, "iterate.json", {{"config", cfg}, {"result", result}});
    std::cout << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
};

struct ClassifyCmd {
  SpaceOptions space;
  std::string sequence = "alternating";
  std::string input;
  std::size_t length = 100;
  tw::Thresholds th;

  void add(CLI::App* sub) {
    space.add(sub);
    sub->add_option("--sequence", sequence, "alternating (e1, e2, e1, ...) or file")
        ->check(CLI::IsMember({"alternating", "file"}));
    sub->add_option("--input", input, "CSV of points, one per row (with --sequence file)");
    sub->add_option("--length", length, "length of the generated sequence")->check(CLI::PositiveNumber);
    sub->add_option("--eps-lim", th.eps_lim);
    sub->add_option("--eps-cauchy", th.eps_cauchy);
    sub->add_option("--eps-tri", th.eps_tri);
    sub->add_option("--delta", th.delta);
    sub->add_option("--tail-fraction", th.tail_fraction)->check(CLI::Range(0.0, 1.0));
    sub->add_option("--min-length", th.min_length);
  }

  std::vector<tw::Point> read_points(int dim) const {
    std::ifstream in(input);
    if (!in) throw ConfigError("cannot open input " + input);
    std::vector<tw::Point> pts;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      pts.push_back(parse_point(line, dim));
    }
    return pts;
  }

  int run(const Globals& g, const json& cfg) {
    auto built = space.build();
    const auto W = space.witnesses(built.space, g.seed);
    std::vector<tw::Point> seq;
    if (sequence == "alternating") {
      if (space.space != "det-sphere") throw ConfigError("the alternating sequence lives on det-sphere");
      for (std::size_t i = 0; i < length; ++i)
        seq.push_back(i % 2 == 0 ? tw::Point(Eigen::Vector3d::UnitX()) : tw::Point(Eigen::Vector3d::UnitY()));
    } else {
      if (input.empty()) throw ConfigError("--sequence file needs --input");
      seq = read_points(built.space.domain().dimension);
    }
    const auto cls = tw::classify(built.space, seq, W, th);
    std::cout << "class " << tw::to_string(cls.tag) << " cauchy_modulus=" << tw::format_double(cls.cauchy_modulus)
              << " tri_cauchy_modulus=" << tw::format_double(cls.tri_cauchy_modulus)
              << " passers=" << cls.passers.size() << (cls.low_confidence ? " (low confidence)" : "") << '\n';
    if (cls.line) std::cout << "line through " << show(cls.line->g1) << " and " << show(cls.line->g2) << '\n';
    if (cls.point) std::cout << "point " << show(*cls.point) << '\n';
    write_json(g, "classify.json", {{"config", cfg}, {"result", tw::to_json(cls)}});
    return 0;
  }
};

struct CertifyCmd {
  std::string A = "0.25I";
  std::optional<double> C_A, c_prime, C_prime, inner;
  double r = 0.2;
  std::string map = "linear";
  double mu = 0.0;
  std::size_t samples = 2000;
  std::string baseline = std::string(TWOMETRIC_BASELINE_DIR) + "/c_prime.json";

  void add(CLI::App* sub) {
    sub->add_option("--A", A, "reference matrix: sI or a,b,c,d");
    sub->add_option("--C-A", C_A, "norm bound on A (default |A|)");
    sub->add_option("--c-prime", c_prime, "proximity budget (default 0.01 |det A| / C_A)");
    sub->add_option("--C-prime", C_prime, "conclusion constant (default from the baseline)");
    sub->add_option("--r", r, "patch radius");
    sub->add_option("--inner", inner, "radius of the inner disc V'");
    sub->add_option("--map", map, "linear (F = A), quadratic (A x + mu (x1^2, x1 x2)) or planted")
        ->check(CLI::IsMember({"linear", "quadratic", "planted"}));
    sub->add_option("--mu", mu, "quadratic coefficient");
    sub->add_option("--samples", samples)->check(CLI::PositiveNumber);
    sub->add_option("--baseline", baseline, "calibrated C' baseline JSON");
  }

  double resolve_C_prime() const {
    if (C_prime) return *C_prime;
    std::ifstream in(baseline);
    if (!in) throw ConfigError("no --C-prime given and baseline " + baseline + " is unreadable");
    const json b = json::parse(in);
    if (std::abs(b.at("r").get<double>() - r) > 1e-12)
      throw ConfigError("baseline was calibrated for a different patch radius; pass --C-prime");
    const double cap = b.at("C_A").get<double>();
    if (C_A.value_or(0.0) > cap) throw ConfigError("baseline covers C_A <= " + tw::format_double(cap));
    return b.at("C_prime").get<double>();
  }

  int run(const Globals& g, const json& cfg) {
    tw::CertInput in;
    in.A = parse_matrix2(A);
    const double normA = Eigen::JacobiSVD<Eigen::Matrix2d>(in.A).singularValues()(0);
    in.C_A = C_A.value_or(normA);
    in.c_prime = c_prime;
    in.patch = tw::PatchConfig{r};
    in.inner_radius = inner;
    in.C_prime = resolve_C_prime();
    const Eigen::Matrix2d Am = in.A;
    const double cp = in.c_prime_value();
    if (map == "linear") {
      in.F = [Am](const Eigen::Vector2d& x) -> Eigen::Vector2d { return Am * x; };
    } else if (map == "quadratic") {
      const double m = mu;
      in.F = [Am, m](const Eigen::Vector2d& x) -> Eigen::Vector2d {
        return Am * x + m * Eigen::Vector2d(x[0] * x[0], x[0] * x[1]);
      };
    } else {
      const Eigen::Matrix2d P = Am + 10.0 * cp * Eigen::Vector2d(1.0, -1.0).asDiagonal().toDenseMatrix();
      in.F = [P](const Eigen::Vector2d& x) -> Eigen::Vector2d { return P * x; };
    }
    const auto res = tw::certify(in, samples, g.seed, g.tolerance);
    std::cout << "max |J - A|=" << tw::format_double(res.max_jac_dev) << " max |dJ|=" << tw::format_double(res.max_hessian)
              << " c'=" << tw::format_double(res.c_prime) << '\n';
    for (const auto& f : res.failures)
      std::cout << "hypothesis " << f.hypothesis << " fails at (" << tw::format_double(f.point[0]) << ", "
                << tw::format_double(f.point[1]) << "): " << tw::format_double(f.value) << " > "
                << tw::format_double(f.limit) << '\n';
    if (res.conclusion_checked)
      std::cout << "worst ratio=" << tw::format_double(res.worst_ratio) << " bound C'|det A|=" << tw::format_double(res.bound)
                << '\n';
    write_json(g, "certify.json", {{"config", cfg}, {"result", tw::to_json(res)}});
    const bool ok = res.pass && res.conclusion_holds;
    std::cout << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
};

struct BanachCmd {
  std::string space = "interval";
  std::string solver = "direct";
  std::optional<double> C, factor;
  double k = 0.4;
  double x0 = 1.0;
  std::size_t steps = 200;
  double psi_scale = 0.0;
  std::size_t samples = 500;

  void add(CLI::App* sub) {
    sub->add_option("--space", space, "interval or finite-scaling")->check(CLI::IsMember({"interval", "finite-scaling"}));
    sub->add_option("--solver", solver)->check(CLI::IsMember({"direct", "power", "multcost"}));
    sub->add_option("--C", C, "asymmetric triangle constant (default: the space's own)");
    sub->add_option("--k", k, "claimed contraction factor");
    sub->add_option("--factor", factor, "interval map x -> factor x (default k)");
    sub->add_option("--x0", x0, "interval start point");
    sub->add_option("--steps", steps);
    sub->add_option("--psi-scale", psi_scale, "multcost: psi(x, y, z) = scale |z|");
    sub->add_option("--samples", samples, "pairs for the measured factor")->check(CLI::PositiveNumber);
  }

  int run(const Globals& g, const json& cfg) {
    tw::QuasiSpace qs;
    tw::SelfMap F;
    tw::Point start;
    if (space == "interval") {
      qs = tw::interval_space(0.0, 1.0);
      if (x0 < 0.0 || x0 > 1.0) throw ConfigError("x0 must lie in [0, 1]");
      const double f = factor.value_or(k);
      if (f < 0.0 || f > 1.0) throw ConfigError("factor must lie in [0, 1]");
      F = [f](const tw::Point& x) { return tw::Point(f * x); };
      start = tw::Point::Constant(1, x0);
      if (psi_scale != 0.0) {
        const double s = psi_scale;
        qs.psi = [s](const tw::Point&, const tw::Point&, const tw::Point& z) { return s * std::abs(z[0]); };
        qs.M = std::abs(s);
      }
    } else {
      auto ex = tw::finite_scaling_example();
      qs = tw::associated_quasi_space(ex.space);
      auto table = std::make_shared<std::vector<std::size_t>>(ex.map);
      F = [table](const tw::Point& x) { return tw::index_point((*table)[tw::point_index(x)]); };
      start = tw::index_point(0);
    }
    if (C) {
      if (*C < qs.C) throw ConfigError("--C is below the space's triangle constant");
      qs.C = *C;
    }
    if (solver == "multcost" && !qs.psi) qs.psi = [](const tw::Point&, const tw::Point&, const tw::Point&) { return 0.0; };

    tw::BanachOptions opt;
    opt.seed = g.seed;
    opt.contraction_samples = samples;
    tw::BanachRun run;
    try {
      if (solver == "direct") run = tw::banach_direct(qs, F, start, k, steps, opt);
      else if (solver == "power") run = tw::banach_power(qs, F, start, k, steps, opt);
      else run = tw::banach_multcost(qs, F, start, k, steps, opt);
    } catch (const tw::ContractionViolation& e) {
      std::cout << e.what() << " ratio=" << tw::format_double(e.ratio) << " witness";
      for (const auto& p : e.witness) std::cout << ' ' << show(p);
      std::cout << "\nFAIL\n";
      return 1;
    }
    const bool ok = run.converged && run.tail_bound_ok && (solver != "power" || run.f_residual <= 1e-10);
    std::cout << "fixed point " << show(run.fixed_point) << " residual=" << tw::format_double(run.residual)
              << " steps=" << run.steps << " power=" << run.power
              << " k_measured=" << (run.k_measured ? tw::format_double(*run.k_measured) : "undefined")
              << " tail_bound_ok=" << (run.tail_bound_ok ? "true" : "false") << '\n';
    json result = tw::to_json(run);
    result["pass"] = ok;
    write_json(g, "banach.json", {{"config", cfg}, {"result", result}});
    std::cout << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
};

struct ConvexityCmd {
  double r = 0.2;
  std::size_t samples = 10000;
  std::string baseline;
  double regression = 0.05;

  void add(CLI::App* sub) {
    sub->add_option("--r", r, "patch radius");
    sub->add_option("--samples", samples)->check(CLI::PositiveNumber);
    sub->add_option("--baseline", baseline, "compare C against this baseline JSON");
    sub->add_option("--regression", regression, "allowed relative drift from the baseline");
  }

  int run(const Globals& g, const json& cfg) {
    const auto rep = tw::convexity_bound(tw::PatchConfig{r}, samples, g.seed);
    bool ok = std::isfinite(rep.C) && rep.C >= 1.0;
    std::cout << "C=" << tw::format_double(rep.C) << " upper=" << tw::format_double(rep.upper_ratio)
              << " lower=" << tw::format_double(rep.lower_ratio) << " skipped=" << rep.skipped << '\n';
    json result = tw::to_json(rep);
    if (!baseline.empty()) {
      std::ifstream in(baseline);
      if (!in) throw ConfigError("cannot open baseline " + baseline);
      const double base = json::parse(in).at("C").get<double>();
      const double drift = std::abs(rep.C - base) / base;
      result["baseline_C"] = base;
      result["drift"] = drift;
      std::cout << "baseline C=" << tw::format_double(base) << " drift=" << tw::format_double(drift) << '\n';
      ok = ok && drift <= regression;
    }
    result["pass"] = ok;
    write_json(g, "convexity.json", {{"config", cfg}, {"result", result}});
    std::cout << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
};

struct EnumerateLinesCmd {
  std::string table;
  double eps_col = 0.0;

  void add(CLI::App* sub) {
    sub->add_option("--table", table, "finite table JSON")->required();
    sub->add_option("--eps-col", eps_col, "colinearity tolerance");
  }

  int run(const Globals& g, const json& cfg) {
    const auto space = tw::load_table(table);
    json lines = json::array();
    for (const auto& l : tw::enumerate_lines(space, eps_col)) {
      lines.push_back(*l.members);
      std::cout << json(*l.members).dump() << '\n';
    }
    write_json(g, "lines.json", {{"config", cfg}, {"result", {{"n", space.size()}, {"lines", lines}}}});
    return 0;
  }
};

// Applies a JSON config file as option defaults, so explicit flags still win.
void apply_json_config(const std::string& path, CLI::App& app, std::vector<std::string>& args,
                       const std::vector<CLI::App*>& subs) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  CLI::App* sub = nullptr;
  for (const auto& a : args)
    for (CLI::App* s : subs)
      if (a == s->get_name()) sub = sub ? sub : s;
  if (j.contains("command")) {
    const auto name = j.at("command").get<std::string>();
    CLI::App* named = nullptr;
    for (CLI::App* s : subs)
      if (s->get_name() == name) named = s;
    if (!named) throw ConfigError("config names unknown command '" + name + "'");
    if (sub && sub != named) throw ConfigError("config command differs from the command line");
    if (!sub) args.insert(args.begin(), name);
    sub = named;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    CLI::Option* opt = sub ? sub->get_option_no_throw("--" + key) : nullptr;
    if (!opt) opt = app.get_option_no_throw("--" + key);
    if (!opt || key == "json-config" || key == "help") throw ConfigError("unknown config field '" + key + "'");
    std::string text;
    if (value.is_string()) text = value.get<std::string>();
    else if (value.is_number_float()) text = tw::format_double(value.get<double>());
    else if (value.is_number() || value.is_boolean()) text = value.dump();
    else throw ConfigError("config field '" + key + "' must be a string, number or boolean");
    opt->default_val(text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twometric: experiments with 2-metrics, lines and contractive maps"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--tolerance", g.tolerance, "violation tolerance");
  app.add_option("--json-config", g.json_config, "JSON file of option defaults");

  AuditCmd audit;
  DemoEquatorCmd demo;
  IterateCmd iterate;
  ClassifyCmd classify;
  CertifyCmd certify;
  BanachCmd banach;
  ConvexityCmd convexity;
  EnumerateLinesCmd lines;

  std::vector<CLI::App*> subs;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    cmd.add(sub);
    subs.push_back(sub);
    return sub;
  };
  add("audit", "audit the axioms on a space", audit);
  add("demo-equator", "rotated vertical squeeze on the sphere: fixed line or fixed point", demo);
  add("iterate", "orbit of a contractive map, with measured factor and decay check", iterate);
  add("classify", "classify a sequence as Cauchy, line, point or none", classify);
  add("certify", "certify contractivity of a planar map on the patch metric", certify);
  add("banach", "fixed-point solvers for asymmetric triangle spaces", banach);
  add("convexity", "empirical convexity constant of the patch metric", convexity);
  add("enumerate-lines", "all lines of a finite space", lines);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--json-config") apply_json_config(args[i + 1], app, args, subs);
      else if (args[i].rfind("--json-config=", 0) == 0) apply_json_config(args[i].substr(14), app, args, subs);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const json cfg = resolved_config(app, *sub);
  try {
    const std::string name = sub->get_name();
    if (name == "audit") return audit.run(g, cfg);
    if (name == "demo-equator") return demo.run(g, cfg);
    if (name == "iterate") return iterate.run(g, cfg);
    if (name == "classify") return classify.run(g, cfg);
    if (name == "certify") return certify.run(g, cfg);
    if (name == "banach") return banach.run(g, cfg);
    if (name == "convexity") return convexity.run(g, cfg);
    return lines.run(g, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
