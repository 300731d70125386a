#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "twometric/spaces.hpp"

namespace twometric {

using PlaneMap = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Central-difference Jacobian. Throws std::invalid_argument when the stencil
/// would leave the disc of radius `domain_radius`.
Eigen::Matrix2d jacobian_fd(const PlaneMap& F, const Eigen::Vector2d& x, double h = 1e-5,
                            double domain_radius = std::numeric_limits<double>::infinity());

/// Max over the points of the Frobenius norm of the second-derivative tensor
/// d^2 F_i / dx_j dx_k, by second differences with step h.
double hessian_bound_fd(const PlaneMap& F, std::span<const Eigen::Vector2d> points, double h = 1e-4,
                        double domain_radius = std::numeric_limits<double>::infinity());

struct CertInput {
  PlaneMap F;
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();
  double C_A = 1.0;                    // |A| <= C_A (operator norm)
  std::optional<double> c_prime;       // default 0.01 |det A| / C_A
  PatchConfig patch;                   // V
  std::optional<double> inner_radius;  // V' radius, default patch.r
  double C_prime = 0.0;                // calibrated constant
  double jacobian_h = 1e-5;
  double hessian_h = 1e-4;

  double c_prime_value() const;
  double inner() const { return inner_radius.value_or(patch.r); }
};

struct CertFailure {
  std::string hypothesis;  // "jacobian", "hessian" or "image"
  Eigen::Vector2d point;
  double value = 0;
  double limit = 0;
};

struct CertResult {
  bool pass = false;
  double max_jac_dev = 0;
  Eigen::Vector2d jac_witness = Eigen::Vector2d::Zero();
  double max_hessian = 0;
  Eigen::Vector2d hessian_witness = Eigen::Vector2d::Zero();
  double c_prime = 0;
  double C_prime = 0;
  double det_A = 0;
  double bound = 0;          // C' |det A|
  double worst_ratio = 0;    // sampled max of d(F triple)/d(triple); 0 when not checked
  std::array<Eigen::Vector2d, 3> ratio_witness{};
  bool conclusion_checked = false;
  bool conclusion_holds = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<CertFailure> failures;
};

/// Checks |J(F,x) - A| <= c', |dJ(F)| <= c' and F(x) in V on sampled x in V'.
/// When all hold, samples triples and compares the worst contraction ratio of
/// the patch metric against C' |det A| (with relative slack `tolerance`).
CertResult certify(const CertInput& input, std::size_t samples, std::uint64_t seed, double tolerance = 1e-9);

struct CalibrationConfig {
  double r = 0.2;
  std::optional<double> inner_radius;
  double C_A = 1.0;
  double max_condition = 4.0;   // sampled A have sigma_max / sigma_min <= this
  std::size_t matrices = 200;
  std::size_t triples = 2000;   // per matrix, half of them nearly colinear
  std::uint64_t seed = 0;
  double safety = 1.1;          // multiplier on the observed maximum
};

struct CalibrationResult {
  double C_prime = 0;           // safety * observed
  double observed = 0;          // max ratio / |det A|
  Eigen::Matrix2d worst_A = Eigen::Matrix2d::Identity();
  CalibrationConfig config;
};

/// Maximizes d(Ax, Ay, Az) / (|det A| d(x, y, z)) over sampled linear maps and
/// triples in V'.
CalibrationResult calibrate_C_prime(const CalibrationConfig& config);

/// Triples in the disc: uniform ones alternating with nearly colinear ones.
std::vector<PlaneTriple> sample_patch_triples(double radius, std::size_t count, Rng& rng);

}  // namespace twometric
