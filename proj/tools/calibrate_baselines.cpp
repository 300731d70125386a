// Regenerates the committed baselines: the convexity constant of the r = 0.2
// patch and the conclusion constant C' for linear maps on it.
//
//   calibrate_baselines <output dir>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "twometric/certify.hpp"
#include "twometric/serialize.hpp"
#include "twometric/spaces.hpp"

namespace tw = twometric;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: calibrate_baselines <output dir>\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);

  const auto conv = tw::convexity_bound(tw::PatchConfig{0.2}, 10000, 0);
  std::ofstream(dir / "convexity_r0.2.json") << tw::to_json(conv).dump(2) << '\n';
  std::cout << "convexity C = " << tw::format_double(conv.C) << '\n';

  tw::CalibrationConfig cfg;
  cfg.r = 0.2;
  cfg.C_A = 1.0;
  cfg.max_condition = 4.0;
  cfg.matrices = 200;
  cfg.triples = 2000;
  cfg.seed = 0;
  const auto cal = tw::calibrate_C_prime(cfg);
  auto j = tw::to_json(cal);
  j["convexity_C"] = conv.C;
  std::ofstream(dir / "c_prime.json") << j.dump(2) << '\n';
  std::cout << "C' = " << tw::format_double(cal.C_prime) << " (observed " << tw::format_double(cal.observed) << ")\n";
  return 0;
}
