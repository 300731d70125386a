#include "twometric/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace twometric {

namespace {

// JSON has no infinities; they are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

json vec2(const Eigen::Vector2d& v) { return json::array({num(v[0]), num(v[1])}); }

json points_json(const std::vector<Point>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(to_json(p));
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json to_json(const Point& p) {
  json out = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(num(p[i]));
  return out;
}

json to_json(const AxiomReport& report) {
  json axioms = json::array();
  for (const auto& r : report.records) {
    axioms.push_back({{"axiom", r.axiom},
                      {"max_violation", num(r.max_violation)},
                      {"holds", r.max_violation <= report.tolerance},
                      {"samples", r.samples},
                      {"exact", r.exact},
                      {"witness", points_json(r.witness)}});
  }
  return {{"seed", report.seed},
          {"tolerance", num(report.tolerance)},
          {"axioms", axioms},
          {"witness_error", num(report.witness_error)}};
}

json to_json(const ConvexityBoundReport& r) {
  return {{"r", num(r.r)},         {"samples", r.samples},
          {"skipped", r.skipped},  {"seed", r.seed},
          {"upper_ratio", num(r.upper_ratio)}, {"lower_ratio", num(r.lower_ratio)},
          {"C", num(r.C)}};
}

json to_json(const Line& line) {
  json out{{"g1", to_json(line.g1)}, {"g2", to_json(line.g2)}, {"eps_col", num(line.eps_col)}};
  out["members"] = line.members ? json(*line.members) : json(nullptr);
  return out;
}

json to_json(const Classification& c) {
  json out{{"tag", to_string(c.tag)},
           {"cauchy_modulus", num(c.cauchy_modulus)},
           {"tri_cauchy_modulus", num(c.tri_cauchy_modulus)},
           {"tail_start", c.tail_start},
           {"candidates", c.candidates},
           {"passers", c.passers.size()},
           {"membership_tolerance", num(c.membership_tolerance)},
           {"low_confidence", c.low_confidence},
           {"thresholds",
            {{"eps_lim", num(c.thresholds.eps_lim)},
             {"eps_cauchy", num(c.thresholds.eps_cauchy)},
             {"eps_tri", num(c.thresholds.eps_tri)},
             {"delta", num(c.thresholds.delta)},
             {"tail_fraction", num(c.thresholds.tail_fraction)},
             {"min_length", c.thresholds.min_length}}}};
  out["point"] = c.point ? to_json(*c.point) : json(nullptr);
  out["line"] = c.line ? to_json(*c.line) : json(nullptr);
  return out;
}

json to_json(const Outcome& o) {
  json out{{"kind", to_string(o.kind)},
           {"residual", num(o.residual)},
           {"invariance_defect", num(o.invariance_defect)},
           {"unique", o.unique},
           {"min_member_residual", num(o.min_member_residual)},
           {"line_members", points_json(o.line_members)},
           {"classification", to_json(o.classification)},
           {"evidence", o.evidence}};
  out["point"] = o.point ? to_json(*o.point) : json(nullptr);
  out["line"] = o.line ? to_json(*o.line) : json(nullptr);
  return out;
}

json to_json(const CertResult& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"hypothesis", f.hypothesis}, {"point", vec2(f.point)}, {"value", num(f.value)},
                        {"limit", num(f.limit)}});
  return {{"pass", r.pass},
          {"max_jac_dev", num(r.max_jac_dev)},
          {"jac_witness", vec2(r.jac_witness)},
          {"max_hessian", num(r.max_hessian)},
          {"hessian_witness", vec2(r.hessian_witness)},
          {"c_prime", num(r.c_prime)},
          {"C_prime", num(r.C_prime)},
          {"det_A", num(r.det_A)},
          {"worst_ratio", num(r.worst_ratio)},
          {"bound", num(r.bound)},
          {"conclusion_checked", r.conclusion_checked},
          {"conclusion_holds", r.conclusion_holds},
          {"samples", r.samples},
          {"seed", r.seed},
          {"failures", failures}};
}

json to_json(const BanachRun& r) {
  return {{"solver", r.solver},
          {"x0", to_json(r.x0)},
          {"fixed_point", to_json(r.fixed_point)},
          {"residual", num(r.residual)},
          {"f_residual", num(r.f_residual)},
          {"steps", r.steps},
          {"converged", r.converged},
          {"k_claimed", num(r.k_claimed)},
          {"k_measured", opt_num(r.k_measured)},
          {"C", num(r.C)},
          {"power", r.power},
          {"tail_bound", num(r.tail_bound)},
          {"worst_tail_excess", num(r.worst_tail_excess)},
          {"tail_bound_ok", r.tail_bound_ok}};
}

json to_json(const CalibrationResult& r) {
  const auto& c = r.config;
  json A = json::array({json::array({num(r.worst_A(0, 0)), num(r.worst_A(0, 1))}),
                        json::array({num(r.worst_A(1, 0)), num(r.worst_A(1, 1))})});
  return {{"C_prime", num(r.C_prime)},
          {"observed", num(r.observed)},
          {"worst_A", A},
          {"r", num(c.r)},
          {"inner_radius", num(c.inner_radius.value_or(c.r))},
          {"C_A", num(c.C_A)},
          {"max_condition", num(c.max_condition)},
          {"matrices", c.matrices},
          {"triples", c.triples},
          {"seed", c.seed},
          {"safety", num(c.safety)}};
}

json table_to_json(const FiniteTwoMetricSpace& space) {
  json entries = json::array();
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const double d = space.d(i, j, k);
        if (d != 0.0) entries.push_back({{"i", i}, {"j", j}, {"k", k}, {"d", num(d)}});
      }
  return {{"n", n}, {"entries", entries}};
}

FiniteTwoMetricSpace table_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw std::invalid_argument("table: expected an object with \"n\" and \"entries\"");
  for (const auto& [key, value] : j.items())
    if (key != "n" && key != "entries" && key != "comment")
      throw std::invalid_argument("table: unknown field \"" + key + "\"");
  const auto n = j.at("n").get<std::size_t>();
  if (n == 0) throw std::invalid_argument("table: n must be positive");
  FiniteTwoMetricSpace space(n);
  for (const auto& e : j.at("entries")) {
    const auto i = e.at("i").get<std::size_t>(), a = e.at("j").get<std::size_t>(), k = e.at("k").get<std::size_t>();
    if (i >= n || a >= n || k >= n) throw std::invalid_argument("table: index out of range");
    space.set(i, a, k, e.at("d").get<double>());
  }
  return space;
}

FiniteTwoMetricSpace load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open table file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("table file " + path + " is not valid JSON: " + e.what());
  }
  return table_from_json(j);
}

void write_orbit_csv(std::ostream& os, const OrbitTrace& trace, bool sphere) {
  const Eigen::Index dim = trace.points.empty() ? 0 : trace.points.front().size();
  os << "step";
  for (Eigen::Index c = 0; c < dim; ++c) os << ",x" << (c + 1);
  os << ",phi_step";
  if (sphere) os << ",x3_abs";
  os << '\n';
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const Point& p = trace.points[i];
    os << i;
    for (Eigen::Index c = 0; c < dim; ++c) os << ',' << format_double(p[c]);
    os << ',' << format_double(trace.phi_step[i]);
    if (sphere) os << ',' << format_double(std::abs(p[2]));
    os << '\n';
  }
}

}  // namespace twometric
