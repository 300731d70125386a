#include "twometric/lines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace twometric {

const char* to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::NoPoint: return "NoPoint";
    case ClassTag::UniquePoint: return "UniquePoint";
    case ClassTag::CauchySequence: return "CauchySequence";
    case ClassTag::LineCase: return "LineCase";
  }
  return "?";
}

const char* to_string(ProbeResult r) {
  switch (r) {
    case ProbeResult::Held: return "held";
    case ProbeResult::Violated: return "violated";
    case ProbeResult::Inconclusive: return "inconclusive";
    case ProbeResult::Vacuous: return "vacuous";
  }
  return "?";
}

bool is_colinear(const TwoMetricSpace& space, const Point& x, const Point& y, const Point& z,
                 double eps_col) {
  return space.d(x, y, z) <= eps_col;
}

TransitivityProbe transitivity_probe(const TwoMetricSpace& space, const Point& x, const Point& y,
                                     const Point& z, const Point& w, double eps_col,
                                     const WitnessSet& W, double delta) {
  TransitivityProbe out;
  out.phi_yz = eval_phi(space, y, z, W);
  if (out.phi_yz < delta) return out;
  if (!is_colinear(space, x, y, z, eps_col) || !is_colinear(space, y, z, w, eps_col)) {
    out.result = ProbeResult::Vacuous;
    return out;
  }
  out.tolerance = 2.0 * eps_col / out.phi_yz;
  out.defect_xyw = space.d(x, y, w);
  out.defect_xzw = space.d(x, z, w);
  out.result = (out.defect_xyw <= out.tolerance && out.defect_xzw <= out.tolerance) ? ProbeResult::Held
                                                                                     : ProbeResult::Violated;
  return out;
}

Line line_through(const TwoMetricSpace& space, const Point& x, const Point& y, const WitnessSet& W,
                  double eps_col, double delta) {
  if (eval_phi(space, x, y, W) <= delta) throw LineUndefined("line undefined: generators are phi-equivalent");
  Line line{x, y, eps_col, std::nullopt};
  if (space.is_finite()) {
    std::vector<std::size_t> members;
    for (const auto& p : space.points())
      if (line.contains(space, p)) members.push_back(point_index(p));
    line.members = std::move(members);
  }
  return line;
}

namespace {

void verify_colinear(const FiniteTwoMetricSpace& space, const std::vector<std::size_t>& m, double eps) {
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      for (std::size_t c = b + 1; c < m.size(); ++c)
        if (space.d(m[a], m[b], m[c]) > eps)
          throw std::runtime_error("line members are not mutually colinear; (Trans) fails on this space");
}

}  // namespace

Line line_through(const FiniteTwoMetricSpace& space, std::size_t i, std::size_t j, double eps_col,
                  double delta) {
  if (space.phi(i, j) <= delta) throw LineUndefined("line undefined: generators are phi-equivalent");
  std::vector<std::size_t> members;
  for (std::size_t a = 0; a < space.size(); ++a)
    if (space.d(a, i, j) <= eps_col) members.push_back(a);
  verify_colinear(space, members, eps_col);
  return Line{index_point(i), index_point(j), eps_col, std::move(members)};
}

std::vector<Line> enumerate_lines(const FiniteTwoMetricSpace& space, double eps_col) {
  const Quotient q = quotient_by_zero_phi(space, eps_col);
  const std::size_t m = q.space.size();

  auto lift = [&](const std::vector<std::size_t>& classes) {
    std::vector<std::size_t> pts;
    for (std::size_t c : classes) pts.insert(pts.end(), q.classes[c].begin(), q.classes[c].end());
    std::sort(pts.begin(), pts.end());
    return pts;
  };

  std::vector<Line> out;
  if (m == 1) {
    std::vector<std::size_t> all(space.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    out.push_back(Line{index_point(0), index_point(all.back()), eps_col, all});
    return out;
  }

  // In the quotient every pair of classes spans exactly one line.
  std::map<std::vector<std::size_t>, std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      std::vector<std::size_t> classes;
      for (std::size_t c = 0; c < m; ++c)
        if (q.space.d(c, a, b) <= eps_col) classes.push_back(c);
      seen.emplace(std::move(classes), std::make_pair(a, b));
    }
  for (const auto& [classes, gens] : seen) {
    auto members = lift(classes);
    verify_colinear(space, members, eps_col);
    out.push_back(Line{index_point(q.classes[gens.first].front()), index_point(q.classes[gens.second].front()),
                       eps_col, std::move(members)});
  }
  std::sort(out.begin(), out.end(), [](const Line& l, const Line& r) { return *l.members < *r.members; });
  return out;
}

LimEstimate lim_residual(const TwoMetricSpace& space, const Point& y, std::span<const Point> seq,
                         std::size_t tail_start) {
  if (tail_start >= seq.size()) throw std::invalid_argument("lim_residual: tail start beyond sequence");
  LimEstimate out{y, tail_start, 0.0};
  for (std::size_t i = tail_start; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) out.residual = std::max(out.residual, space.d(y, seq[i], seq[j]));
  return out;
}

double lim_colinearity_bound(double eps_lim, double eps0) {
  return 6.0 * eps_lim * (1.0 + 1.0 / eps0);
}

double lim_extension_threshold(double eps_lim, double eps0, double eps1, double eps_col) {
  const double D = 2.0 * eps_lim * (1.0 + 1.0 / eps0);
  return eps_lim + 2.0 * (eps_col + D) / eps1;
}

namespace {

bool near_threshold(double value, double threshold) {
  return value >= threshold / 10.0 && value <= threshold * 10.0;
}

}  // namespace

Classification classify(const TwoMetricSpace& space, std::span<const Point> seq, const WitnessSet& W,
                        const Thresholds& th) {
  if (seq.size() < std::max<std::size_t>(th.min_length, 3))
    throw std::invalid_argument("classify: sequence shorter than the configured minimum");
  const std::size_t n = seq.size();
  const std::size_t tail_len =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(th.tail_fraction * static_cast<double>(n))), 3, n);

  Classification out;
  out.thresholds = th;
  out.tail_start = n - tail_len;
  const std::size_t a = out.tail_start;

  for (std::size_t i = a; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      out.cauchy_modulus = std::max(out.cauchy_modulus, eval_phi(space, seq[i], seq[j], W));
      for (std::size_t k = j + 1; k < n; ++k)
        out.tri_cauchy_modulus = std::max(out.tri_cauchy_modulus, space.d(seq[i], seq[j], seq[k]));
    }

  std::vector<Point> candidates = W.points;
  candidates.insert(candidates.end(), seq.begin() + static_cast<std::ptrdiff_t>(a), seq.end());
  std::sort(candidates.begin(), candidates.end(), lex_less);
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Point& l, const Point& r) { return l == r; }),
                   candidates.end());
  out.candidates = candidates.size();

  bool borderline = near_threshold(out.cauchy_modulus, th.eps_cauchy) ||
                    near_threshold(out.tri_cauchy_modulus, th.eps_tri);
  for (const auto& c : candidates) {
    const double r = lim_residual(space, c, seq, a).residual;
    if (r > 0.0 && near_threshold(r, th.eps_lim)) borderline = true;
    if (r <= th.eps_lim) {
      out.passers.push_back(c);
      out.passer_residuals.push_back(r);
    }
  }

  if (out.cauchy_modulus <= th.eps_cauchy) {
    out.tag = ClassTag::CauchySequence;
    out.point = seq.back();
  } else if (out.passers.size() >= 2) {
    double best = -1.0;
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < out.passers.size(); ++i)
      for (std::size_t j = i + 1; j < out.passers.size(); ++j) {
        const double p = eval_phi(space, out.passers[i], out.passers[j], W);
        if (p > best) {
          best = p;
          bi = i;
          bj = j;
        }
      }
    if (best > th.delta) {
      out.tag = ClassTag::LineCase;
      out.membership_tolerance = lim_colinearity_bound(th.eps_lim, out.cauchy_modulus);
      Line line{out.passers[bi], out.passers[bj], out.membership_tolerance, std::nullopt};
      for (const auto& p : out.passers)
        if (!line.contains(space, p)) borderline = true;
      if (space.is_finite()) {
        std::vector<std::size_t> members;
        for (const auto& p : space.points())
          if (line.contains(space, p)) members.push_back(point_index(p));
        line.members = std::move(members);
      }
      out.line = std::move(line);
    } else {
      // every passer is phi-equivalent to the first one
      out.tag = ClassTag::UniquePoint;
      out.point = out.passers.front();
    }
  } else if (out.passers.size() == 1) {
    out.tag = ClassTag::UniquePoint;
    out.point = out.passers.front();
  } else {
    out.tag = ClassTag::NoPoint;
  }
  out.low_confidence = borderline;
  return out;
}

}  // namespace twometric
