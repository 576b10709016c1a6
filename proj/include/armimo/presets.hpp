#pragma once

// Scenarios behind each figure of the numerical study. Common settings:
// alpha = 90 dB, tau_p = 1, tau_d = 11, P_tot = 250 mW, c = 1 and
// sigma_p2 = sigma_d2 = 1e-7 mW (the noise floor is not given in the source, so
// this normalization is recorded in every output's metadata).

#include <string>
#include <string_view>
#include <vector>

#include "armimo/scenario.hpp"

namespace armimo {

struct Figure {
  std::string name;
  std::string description;
  // Each scenario is one curve family and is written to its own file.
  std::vector<Scenario> scenarios;
};

inline constexpr double kPresetNoise = 1e-7;

// Base setup: K users, N_r antennas, pilot power 100 mW, a = 0.
Scenario preset_base(int K, int n_r);

// fig1 .. fig9. Throws UnknownPreset.
Figure figure_preset(std::string_view name);
std::vector<std::string> figure_names();

}  // namespace armimo
