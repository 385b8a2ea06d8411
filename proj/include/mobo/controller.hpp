#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mobo/acquisition.hpp"
#include "mobo/payloads.hpp"
#include "mobo/problem.hpp"
#include "mobo/rng.hpp"
#include "mobo/stream.hpp"
#include "mobo/surrogate.hpp"

namespace mobo {

struct StoppingRule {
  int patience = 3;              // completed batches without improvement
  double improvement_tol = 0.5;  // on the best 50-50 scalarized value
};

struct TopicNames {
  std::string requests = "experiment.requests";
  std::string results = "experiment.results";
  std::string dead_letter = "experiment.deadletter";
};

struct CampaignConfig {
  std::vector<VariableSpec> variables;  // fixed order: temperature, time, ratio
  int n_initial = 15;
  int n_iterations = 9;
  int batch_size = 3;
  std::uint64_t seed = 7;
  StoppingRule stopping;
  std::string broker_address;  // empty: in-process broker
  TopicNames topics;

  int total_budget() const { return n_initial + n_iterations * batch_size; }
  void validate() const;  // throws ConfigError
};

struct HistoryEntry {
  std::uint64_t experiment_index = 0;
  DesignPoint design;
  SimulationOutput output;
  ObjectiveVector objectives;
};

enum class Phase { Initial, Iterating, Stopped };
enum class StopReason { None, Budget, NoImprovement };

struct StopDecision {
  bool stop = false;
  StopReason reason = StopReason::None;
};

std::string to_string(Phase p);
std::string to_string(StopReason r);

// Drives the campaign loop: initial space-filling design, then
// consume-results -> refit surrogates -> generate batch -> publish requests,
// until the budget is exhausted or improvement stalls. All state mutation is
// serialized through this class; results arrive as immutable values.
class Controller {
 public:
  Controller(CampaignConfig config, BrokerClient& client);

  // Generates the initial design and publishes one request per point
  // (indices 0..n_initial-1).
  void initialize();

  // Consumes the complete current batch of results: updates history and the
  // Pareto archive, refits both surrogates on the full history, and either
  // stops or publishes the next batch sorted by ascending temperature.
  // Duplicate results are ignored (first wins); a result for an experiment
  // that is not outstanding is a ProtocolError.
  void step(const std::vector<ExperimentResult>& results);

  StopDecision check_stop() const;

  Phase phase() const { return phase_; }
  StopReason stop_reason() const { return stop_reason_; }
  int iteration() const { return iteration_; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  const ParetoArchive& archive() const { return archive_; }
  std::vector<std::uint64_t> pending_indices() const;
  const RbfModel* product_model() const { return product_model_.get(); }
  const RbfModel* byproduct_model() const { return byproduct_model_.get(); }
  std::optional<double> best_scalar() const { return best_scalar_; }
  int no_improve_streak() const { return no_improve_streak_; }
  const CampaignConfig& config() const { return config_; }

  // Versioned, self-describing checkpoint with explicit generator state;
  // load(save(state)) resumes with byte-identical future requests.
  void save_checkpoint(const std::filesystem::path& path) const;
  static Controller load_checkpoint(const std::filesystem::path& path,
                                    BrokerClient& client);

  // 50-50 scalarization used by the stopping rule.
  static double stopping_scalar(const ObjectiveVector& f) {
    return 0.5 * f.f[0] + 0.5 * f.f[1];
  }

 private:
  void publish_batch(std::vector<DesignPoint> designs);
  void incorporate(const std::vector<ExperimentResult>& results);
  void refit_models();
  void update_improvement_ledger(bool first_batch);

  CampaignConfig config_;
  Problem problem_;
  BrokerClient& client_;
  Rng rng_;

  Phase phase_ = Phase::Initial;
  StopReason stop_reason_ = StopReason::None;
  int iteration_ = 0;  // completed step() calls
  std::uint64_t next_experiment_index_ = 0;
  std::vector<HistoryEntry> history_;
  std::vector<EmbeddedPoint> history_embedded_;
  ParetoArchive archive_;
  std::vector<ExperimentRequest> pending_;
  std::shared_ptr<RbfModel> product_model_;
  std::shared_ptr<RbfModel> byproduct_model_;
  std::optional<double> best_scalar_;
  int no_improve_streak_ = 0;
};

}  // namespace mobo
