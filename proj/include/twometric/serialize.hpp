#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "twometric/audit.hpp"
#include "twometric/certify.hpp"
#include "twometric/dynamics.hpp"
#include "twometric/finite_space.hpp"
#include "twometric/lines.hpp"
#include "twometric/quasi.hpp"
#include "twometric/spaces.hpp"

namespace twometric {

using nlohmann::json;

json to_json(const Point& p);
json to_json(const AxiomReport& report);
json to_json(const ConvexityBoundReport& report);
json to_json(const Line& line);
json to_json(const Classification& cls);
json to_json(const Outcome& outcome);
json to_json(const CertResult& result);
json to_json(const BanachRun& run);
json to_json(const CalibrationResult& result);

/// {"n": N, "entries": [{"i":..,"j":..,"k":..,"d":..}, ...]}. Entries that are
/// not listed are 0. Listing one ordering of a triple sets all of them.
json table_to_json(const FiniteTwoMetricSpace& space);
FiniteTwoMetricSpace table_from_json(const json& j);
FiniteTwoMetricSpace load_table(const std::string& path);

/// step, coordinates, phi_step and, for points of S^2, x3_abs. Decimal point
/// '.', shortest round-trip formatting.
void write_orbit_csv(std::ostream& os, const OrbitTrace& trace, bool sphere);

/// Shortest round-trip decimal representation, independent of the locale.
std::string format_double(double v);

}  // namespace twometric
