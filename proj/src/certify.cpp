#include "twometric/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace twometric {

namespace {

void require_margin(const Eigen::Vector2d& x, double reach, double domain_radius, const char* who) {
  if (!(reach > 0.0)) throw std::invalid_argument(std::string(who) + ": step must be positive");
  if (x.norm() + reach > domain_radius)
    throw std::invalid_argument(std::string(who) + ": point too close to the domain boundary for this step");
}

double op_norm(const Eigen::Matrix2d& M) {
  return Eigen::JacobiSVD<Eigen::Matrix2d>(M).singularValues()(0);
}

Eigen::Matrix2d rotation2(double a) {
  Eigen::Matrix2d R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

// d^2 F / dx_j dx_k, squared Frobenius norm summed over the two components.
double hessian_norm(const PlaneMap& F, const Eigen::Vector2d& x, double h) {
  const Eigen::Vector2d e[2] = {Eigen::Vector2d::UnitX(), Eigen::Vector2d::UnitY()};
  const Eigen::Vector2d f0 = F(x);
  double sum = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d second;
      if (j == k) {
        second = (F(x + h * e[j]) - 2.0 * f0 + F(x - h * e[j])) / (h * h);
      } else {
        second = (F(x + h * e[j] + h * e[k]) - F(x + h * e[j] - h * e[k]) - F(x - h * e[j] + h * e[k]) +
                  F(x - h * e[j] - h * e[k])) /
                 (4.0 * h * h);
      }
      sum += second.squaredNorm();
    }
  return std::sqrt(sum);
}

}  // namespace

Eigen::Matrix2d jacobian_fd(const PlaneMap& F, const Eigen::Vector2d& x, double h, double domain_radius) {
  require_margin(x, h, domain_radius, "jacobian_fd");
  Eigen::Matrix2d J;
  J.col(0) = (F(x + h * Eigen::Vector2d::UnitX()) - F(x - h * Eigen::Vector2d::UnitX())) / (2.0 * h);
  J.col(1) = (F(x + h * Eigen::Vector2d::UnitY()) - F(x - h * Eigen::Vector2d::UnitY())) / (2.0 * h);
  return J;
}

double hessian_bound_fd(const PlaneMap& F, std::span<const Eigen::Vector2d> points, double h,
                        double domain_radius) {
  double best = 0.0;
  for (const auto& x : points) {
    require_margin(x, std::sqrt(2.0) * h, domain_radius, "hessian_bound_fd");
    best = std::max(best, hessian_norm(F, x, h));
  }
  return best;
}

double CertInput::c_prime_value() const {
  return c_prime.value_or(0.01 * std::abs(A.determinant()) / C_A);
}

std::vector<PlaneTriple> sample_patch_triples(double radius, std::size_t count, Rng& rng) {
  std::vector<PlaneTriple> out;
  out.reserve(count);
  while (out.size() < count) {
    const Eigen::Vector2d x = uniform_disc(rng, radius), y = uniform_disc(rng, radius);
    if (out.size() % 2 == 0) {
      out.push_back({x, y, uniform_disc(rng, radius)});
      continue;
    }
    const Eigen::Vector2d u = y - x;
    const Eigen::Vector2d perp(-u[1], u[0]);
    const Eigen::Vector2d z = x + uniform(rng, -0.5, 1.5) * u + uniform(rng, -1e-3, 1e-3) * perp;
    if (z.norm() <= radius) out.push_back({x, y, z});
  }
  return out;
}

CertResult certify(const CertInput& in, std::size_t samples, std::uint64_t seed, double tolerance) {
  if (samples == 0) throw std::invalid_argument("certify: samples must be >= 1");
  if (!(in.patch.r > 0.0) || in.patch.r >= 0.25) throw std::invalid_argument("certify: need 0 < r < 1/4");
  const double inner = in.inner();
  if (!(inner > 0.0) || inner > in.patch.r) throw std::invalid_argument("certify: need 0 < r' <= r");
  const double det = in.A.determinant();
  if (det == 0.0) throw std::invalid_argument("certify: A is singular");
  if (op_norm(in.A) > in.C_A * (1.0 + 1e-12)) throw std::invalid_argument("certify: |A| exceeds C_A");
  if (!(in.C_prime > 0.0)) throw std::invalid_argument("certify: calibrated C' required");

  CertResult res;
  res.c_prime = in.c_prime_value();
  res.C_prime = in.C_prime;
  res.det_A = det;
  res.bound = in.C_prime * std::abs(det);
  res.samples = samples;
  res.seed = seed;

  Rng rng(seed);
  const double margin = 2.0 * std::max(in.jacobian_h, in.hessian_h);
  for (std::size_t s = 0; s < samples; ++s) {
    const Eigen::Vector2d x = uniform_disc(rng, inner - margin);
    const double dev = op_norm(jacobian_fd(in.F, x, in.jacobian_h, inner) - in.A);
    if (dev > res.max_jac_dev) {
      res.max_jac_dev = dev;
      res.jac_witness = x;
    }
    require_margin(x, std::sqrt(2.0) * in.hessian_h, inner, "certify");
    const double hess = hessian_norm(in.F, x, in.hessian_h);
    if (hess > res.max_hessian) {
      res.max_hessian = hess;
      res.hessian_witness = x;
    }
    const double img = in.F(x).norm();
    if (img > in.patch.r) res.failures.push_back({"image", x, img, in.patch.r});
  }
  if (res.max_jac_dev > res.c_prime)
    res.failures.insert(res.failures.begin(), {"jacobian", res.jac_witness, res.max_jac_dev, res.c_prime});
  if (res.max_hessian > res.c_prime)
    res.failures.push_back({"hessian", res.hessian_witness, res.max_hessian, res.c_prime});
  if (!res.failures.empty()) return res;

  const auto triples = sample_patch_triples(inner, samples, rng);
  for (const auto& t : triples) {
    const double d = patch_metric(in.patch, t[0], t[1], t[2]);
    if (!(d > 0.0)) continue;
    const std::array<Eigen::Vector2d, 3> img{in.F(t[0]), in.F(t[1]), in.F(t[2])};
    bool outside = false;
    for (int i = 0; i < 3; ++i)
      if (img[i].norm() > in.patch.r) {
        res.failures.push_back({"image", t[i], img[i].norm(), in.patch.r});
        outside = true;
      }
    if (outside) continue;
    const double ratio = patch_metric(in.patch, img[0], img[1], img[2]) / d;
    if (ratio > res.worst_ratio) {
      res.worst_ratio = ratio;
      res.ratio_witness = t;
    }
  }
  if (!res.failures.empty()) return res;
  res.pass = true;
  res.conclusion_checked = true;
  res.conclusion_holds = res.worst_ratio <= res.bound * (1.0 + tolerance);
  return res;
}

CalibrationResult calibrate_C_prime(const CalibrationConfig& cfg) {
  if (!(cfg.r > 0.0) || cfg.r >= 0.25) throw std::invalid_argument("calibrate: need 0 < r < 1/4");
  if (cfg.max_condition < 1.0) throw std::invalid_argument("calibrate: condition bound must be >= 1");
  const double inner = cfg.inner_radius.value_or(cfg.r);
  const double smax = std::min(cfg.C_A, cfg.r / inner);
  const PatchConfig patch{cfg.r};

  CalibrationResult res;
  res.config = cfg;
  Rng rng(cfg.seed);
  for (std::size_t m = 0; m < cfg.matrices; ++m) {
    const double s1 = smax * uniform(rng, 0.05, 1.0);
    // every fourth matrix is a scaled rotation
    const double s2 = m % 4 == 0 ? s1 : s1 / uniform(rng, 1.0, cfg.max_condition);
    const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    const Eigen::Matrix2d A = rotation2(uniform(rng, 0, 2 * std::numbers::pi)) *
                              Eigen::Vector2d(s1, sign * s2).asDiagonal() *
                              rotation2(uniform(rng, 0, 2 * std::numbers::pi));
    const double det = std::abs(A.determinant());
    for (const auto& t : sample_patch_triples(inner, cfg.triples, rng)) {
      const double d = patch_metric(patch, t[0], t[1], t[2]);
      if (!(d > 0.0)) continue;
      const Eigen::Vector2d a = A * t[0], b = A * t[1], c = A * t[2];
      if (a.norm() > cfg.r || b.norm() > cfg.r || c.norm() > cfg.r) continue;
      const double ratio = patch_metric(patch, a, b, c) / (d * det);
      if (ratio > res.observed) {
        res.observed = ratio;
        res.worst_A = A;
      }
    }
  }
  res.C_prime = cfg.safety * res.observed;
  return res;
}

}  // namespace twometric
