#pragma once

#include <cstdint>
#include <string>

#include "mobo/problem.hpp"

// Payload schemas for the two campaign topics; field names are fixed and
// documented in docs/PROTOCOL.md.
//
//   experiment.requests: {"equivalence_ratio", "experiment_index",
//                         "temperature_C", "time_s"}
//   experiment.results:  {"byproduct_area", "experiment_index",
//                         "product_area", "samples_to_steady"}
//
// DesignPoint values follow the fixed campaign variable order
// (temperature_C, time_s, equivalence_ratio).

namespace mobo {

struct ExperimentRequest {
  std::uint64_t experiment_index = 0;
  DesignPoint design;  // (temperature_C, time_s, equivalence_ratio)
};

struct ExperimentResult {
  std::uint64_t experiment_index = 0;
  SimulationOutput output;
};

std::string make_request_payload(const ExperimentRequest& r);
ExperimentRequest parse_request_payload(const std::string& payload);  // ProtocolError

std::string make_result_payload(const ExperimentResult& r);
ExperimentResult parse_result_payload(const std::string& payload);  // ProtocolError

}  // namespace mobo
