#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twometric/metric_space.hpp"

namespace twometric {

/// Worst sampled violation max(0, LHS - RHS) of one axiom.
struct AxiomRecord {
  std::string axiom;
  double max_violation = 0.0;
  std::vector<Point> witness;  // tuple attaining max_violation (empty if none)
  std::size_t samples = 0;
  bool exact = false;          // holds by construction, not by sampling
};

struct AxiomReport {
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  std::vector<AxiomRecord> records;
  double witness_error = 0.0;  // empirical sup-truncation error of the witness set

  const AxiomRecord& at(std::string_view axiom) const;
  bool holds(std::string_view axiom) const { return at(axiom).max_violation <= tolerance; }
  /// True when every record is within tolerance; (N) is skipped unless asked for.
  bool all_hold(bool include_nondegeneracy = true) const;
};

struct AuditConfig {
  std::size_t triples = 2000;
  std::size_t quadruples = 2000;
  std::size_t quintuples = 2000;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  /// Finite spaces are enumerated exhaustively when n^arity fits in this budget.
  std::size_t exhaustive_limit = 200000;
  /// Pairs used for the witness truncation estimate (continuous spaces only).
  std::size_t witness_error_pairs = 64;
};

/// Audits Sym, Tetr, Z, N, B, Pos (nonnegativity), Trans, AT (C = 2),
/// CostTriangle and DphiLipschitz.
///
/// phi inside AT, CostTriangle and DphiLipschitz is evaluated over W plus the
/// points of the tuple being checked; with that witness set the three
/// inequalities follow from pointwise (Tetr), so a positive score always
/// indicates a real axiom failure rather than sup truncation.
AxiomReport audit(const TwoMetricSpace& space, const AuditConfig& config, const WitnessSet& W);

}  // namespace twometric
