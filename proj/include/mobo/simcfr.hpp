#pragma once

#include <atomic>
#include <functional>
#include <span>
#include <utility>

#include "mobo/payloads.hpp"
#include "mobo/problem.hpp"
#include "mobo/rng.hpp"
#include "mobo/stream.hpp"

namespace mobo {

// Closed-form stand-in for the flow reactor chemistry. Arrhenius-style rates
// for the product and for a side reaction that takes over at high
// temperature, plus a reagent-ratio saturation:
//   T_K = T + 273.15
//   k_p = exp(a_p - b_p / T_K)        k_s = exp(a_s - b_s / T_K)
//   x   = 1 - exp(-k_p t)             s   = 1 - exp(-k_s t)
//   g   = min(1, ratio / ratio_knee)
//   product area   = scale * x * (1 - s) * g
//   byproduct area = scale * x * s
struct ReactionModel {
  double a_p = 8.0;
  double b_p = 4000.0;   // K
  double a_s = 20.0;
  double b_s = 10000.0;  // K
  double scale = 100.0;  // area units
  double ratio_knee = 1.2;
};

// Reactor safety limits; requests outside this box are rejected the way the
// hardware interlock would reject them.
inline constexpr double kTempMin = 40.0, kTempMax = 150.0;
inline constexpr double kTimeMin = 60.0, kTimeMax = 300.0;
inline constexpr double kRatioMin = 0.9, kRatioMax = 2.0;

// (product area, byproduct area); throws BoundsError outside the safety box.
std::pair<double, double> ground_truth(const ReactionModel& model,
                                       double temp_c, double time_s,
                                       double ratio);

// Steady state = sample standard deviation of the last `window` samples
// falling below `threshold`, on both channels.
struct SteadyStateDetector {
  int window = 5;
  double threshold = 0.75;  // area units
  int max_samples = 200;
};

// True iff the sample standard deviation of the last `window` samples is
// below the threshold. Throws std::invalid_argument with fewer samples than
// one window.
bool detect_steady(std::span<const double> samples,
                   const SteadyStateDetector& detector);

struct SimTrace {
  std::vector<double> product;
  std::vector<double> byproduct;
};

struct SimOutcome {
  SimulationOutput output;
  SimTrace trace;
};

// Emits per-channel samples v_k = A (1 - exp(-k/5)) + Normal(0, noise_sigma)
// for k = 1, 2, ... until both channels are steady or max_samples is
// reached. The reported area is the mean of the final window, clamped at 0;
// a run that never settles is flagged non-steady and reported with
// samples_to_steady = max_samples.
SimOutcome simulate_relaxation(double product_asymptote,
                               double byproduct_asymptote,
                               const SteadyStateDetector& detector,
                               double noise_sigma, Rng& rng);

using GroundTruthFn = std::function<std::pair<double, double>(
    double temp_c, double time_s, double ratio)>;

struct SimCfrOptions {
  ReactionModel model;
  SteadyStateDetector detector;
  double noise_sigma = 0.5;
  std::uint64_t seed = 0;
  bool throttle = false;           // ~25 ms per sample, demo realism
  GroundTruthFn ground_truth_fn;   // default: ground_truth(model, ...)
  std::string request_topic = "experiment.requests";
  std::string result_topic = "experiment.results";
  std::string dead_letter_topic = "experiment.deadletter";
};

// Simulated experiment client: consumes requests in offset order, runs one
// experiment at a time (the reactor is a single physical line) and publishes
// one result per request. Malformed or out-of-bounds requests go to the
// dead-letter topic and processing continues. Per-experiment noise is seeded
// by (seed, experiment_index), so results do not depend on arrival timing.
class SimCfr {
 public:
  SimCfr(BrokerClient& client, SimCfrOptions options);

  // Polls until `stop` becomes true. Throws only on unrecoverable transport
  // or protocol failures.
  void serve(const std::atomic<bool>& stop);

  std::size_t served() const { return served_; }
  std::size_t dead_letters() const { return dead_letters_; }

 private:
  void handle(const MessageEnvelope& env);
  void dead_letter(const MessageEnvelope& env, const std::string& reason);

  BrokerClient& client_;
  SimCfrOptions options_;
  std::size_t served_ = 0;
  std::size_t dead_letters_ = 0;
};

}  // namespace mobo
