#pragma once

#include <filesystem>
#include <optional>

#include "mobo/artifacts.hpp"
#include "mobo/config.hpp"
#include "mobo/simcfr.hpp"

namespace mobo {

enum class Transport {
  InProcess,     // broker lives in this process, direct calls
  TcpLoopback,   // broker lives in this process, clients go through TCP
  ExternalBroker // connect to broker_address
};

struct RunOptions {
  RunConfig config;
  std::filesystem::path out_dir = "mobo_out";
  Transport transport = Transport::InProcess;
  GroundTruthFn ground_truth_override;  // tests swap the chemistry here
};

struct RunSummary {
  std::filesystem::path manifest_path;
  int completed = 0;
  StopReason stop_reason = StopReason::None;
  double best_product_area = 0.0;
  double wall_seconds = 0.0;
};

// Runs a full campaign: broker (per transport), simulated experiment client,
// controller loop; writes config.json, transcript.jsonl, results.csv,
// checkpoint.json and manifest.json into out_dir. Shutdown is ordered:
// controller, then experiment client, then broker.
RunSummary run_campaign(const RunOptions& options);

}  // namespace mobo
