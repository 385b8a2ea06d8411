#pragma once

#include <filesystem>
#include <string>

#include "mobo/controller.hpp"

namespace mobo {

// Extra knobs for the simulated experiment client, carried next to the
// campaign settings in the same config file.
struct SimSettings {
  double noise_sigma = 0.5;
  bool throttle = false;
};

struct RunConfig {
  CampaignConfig campaign;
  SimSettings sim;
};

// Paper-faithful defaults: the (temperature_C, time_s, equivalence_ratio)
// box, a 15-point initial design, 9 iterations of 3, seed 7.
RunConfig default_run_config();

// JSON config file; omitted sections keep their defaults. Throws ConfigError
// with a diagnostic on parse or validation problems.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text);

std::string dump_run_config(const RunConfig& config);  // canonical JSON

}  // namespace mobo
