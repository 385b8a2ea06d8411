#include "mobo/controller.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mobo/doe.hpp"

namespace mobo {

namespace {

using nlohmann::json;

constexpr int kCheckpointVersion = 1;
constexpr char kCheckpointFormat[] = "mobo-checkpoint";

// Stream ids for deriving independent generators from the campaign seed.
constexpr std::uint64_t kControllerStream = 1;

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

std::uint64_t parse_hex64(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

json design_to_json(const DesignPoint& p) {
  return json(p.values);
}

DesignPoint design_from_json(const json& j) {
  DesignPoint p;
  p.values = j.get<std::vector<double>>();
  return p;
}

}  // namespace

std::string to_string(Phase p) {
  switch (p) {
    case Phase::Initial: return "initial";
    case Phase::Iterating: return "iterating";
    case Phase::Stopped: return "stopped";
  }
  return "?";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::None: return "none";
    case StopReason::Budget: return "budget";
    case StopReason::NoImprovement: return "no_improvement";
  }
  return "?";
}

void CampaignConfig::validate() const {
  if (variables.size() != 3 || variables[0].name != "temperature_C" ||
      variables[1].name != "time_s" || variables[2].name != "equivalence_ratio")
    throw ConfigError(
        "campaign needs the variables (temperature_C, time_s, "
        "equivalence_ratio) in that order");
  Problem check(variables);  // bounds sanity
  if (n_initial < 1) throw ConfigError("n_initial must be >= 1");
  if (n_iterations < 0) throw ConfigError("n_iterations must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (stopping.patience < 1) throw ConfigError("patience must be >= 1");
  if (stopping.improvement_tol < 0.0)
    throw ConfigError("improvement_tol must be >= 0");
  for (const auto& t : {topics.requests, topics.results, topics.dead_letter})
    if (!Broker::valid_topic_name(t))
      throw ConfigError("invalid topic name '" + t + "'");
}

Controller::Controller(CampaignConfig config, BrokerClient& client)
    : config_(std::move(config)),
      problem_((config_.validate(), config_.variables)),
      client_(client),
      rng_(mix_seed(config_.seed, kControllerStream)) {}

void Controller::initialize() {
  if (phase_ != Phase::Initial || !history_.empty() || !pending_.empty())
    throw ProtocolError("initialize: campaign already started");
  client_.create_topic(config_.topics.requests);
  client_.create_topic(config_.topics.results);
  client_.create_topic(config_.topics.dead_letter);

  const LhsConfig lhs{static_cast<std::size_t>(config_.n_initial),
                      problem_.dimension(), config_.seed};
  std::vector<DesignPoint> designs;
  designs.reserve(lhs.n_points);
  for (const auto& x : latin_hypercube(lhs)) designs.push_back(problem_.unembed(x));
  publish_batch(std::move(designs));
}

void Controller::publish_batch(std::vector<DesignPoint> designs) {
  for (auto& d : designs) {
    ExperimentRequest request{next_experiment_index_++, std::move(d)};
    client_.publish(config_.topics.requests,
                    std::to_string(request.experiment_index),
                    make_request_payload(request));
    pending_.push_back(std::move(request));
  }
}

void Controller::incorporate(const std::vector<ExperimentResult>& results) {
  std::map<std::uint64_t, const ExperimentResult*> by_index;
  std::set<std::uint64_t> outstanding;
  for (const auto& r : pending_) outstanding.insert(r.experiment_index);
  for (const auto& r : results) {
    if (!outstanding.count(r.experiment_index))
      throw ProtocolError("result for unknown experiment " +
                          std::to_string(r.experiment_index));
    if (!by_index.emplace(r.experiment_index, &r).second)
      std::cerr << "controller: duplicate result for experiment "
                << r.experiment_index << " ignored\n";
  }
  if (by_index.size() != pending_.size())
    throw ProtocolError("step needs the complete batch: got " +
                        std::to_string(by_index.size()) + " of " +
                        std::to_string(pending_.size()) + " results");

  // Append in experiment-index order; pending_ was published in that order.
  for (const auto& request : pending_) {
    const ExperimentResult& r = *by_index.at(request.experiment_index);
    HistoryEntry entry;
    entry.experiment_index = request.experiment_index;
    entry.design = request.design;
    entry.output = r.output;
    entry.objectives = evaluate_objectives(r.output);
    history_embedded_.push_back(problem_.embed(entry.design));
    archive_.insert(ArchiveEntry{entry.design, entry.objectives,
                                 entry.experiment_index});
    history_.push_back(std::move(entry));
  }
  pending_.clear();
}

void Controller::refit_models() {
  TrainingSet product, byproduct;
  product.inputs = history_embedded_;
  byproduct.inputs = history_embedded_;
  product.outputs.reserve(history_.size());
  byproduct.outputs.reserve(history_.size());
  for (const auto& h : history_) {
    product.outputs.push_back(h.output.product_area);
    byproduct.outputs.push_back(h.output.byproduct_area);
  }
  product_model_ = std::make_shared<RbfModel>(RbfModel::fit(std::move(product)));
  byproduct_model_ =
      std::make_shared<RbfModel>(RbfModel::fit(std::move(byproduct)));
}

void Controller::update_improvement_ledger(bool first_batch) {
  double batch_best = std::numeric_limits<double>::infinity();
  for (const auto& h : history_)
    batch_best = std::min(batch_best, stopping_scalar(h.objectives));
  if (first_batch) {
    best_scalar_ = batch_best;
    no_improve_streak_ = 0;
    return;
  }
  const double improvement = *best_scalar_ - batch_best;
  no_improve_streak_ =
      (improvement < config_.stopping.improvement_tol) ? no_improve_streak_ + 1
                                                       : 0;
  best_scalar_ = std::min(*best_scalar_, batch_best);
}

StopDecision Controller::check_stop() const {
  if (static_cast<int>(history_.size()) >= config_.total_budget())
    return {true, StopReason::Budget};
  if (best_scalar_ && no_improve_streak_ >= config_.stopping.patience)
    return {true, StopReason::NoImprovement};
  return {false, StopReason::None};
}

void Controller::step(const std::vector<ExperimentResult>& results) {
  if (phase_ == Phase::Stopped)
    throw ProtocolError("step: campaign already stopped");
  if (pending_.empty())
    throw ProtocolError("step: no batch outstanding (call initialize first)");

  const bool first_batch = history_.empty();
  incorporate(results);
  refit_models();
  update_improvement_ledger(first_batch);
  ++iteration_;

  const StopDecision decision = check_stop();
  if (decision.stop) {
    phase_ = Phase::Stopped;
    stop_reason_ = decision.reason;
    return;
  }

  BatchContext ctx{problem_, *product_model_, *byproduct_model_,
                   history_embedded_, GpsConfig{}};
  const std::vector<AcquisitionSpec> acqs = {
      AcquisitionSpec::epsilon(0), AcquisitionSpec::epsilon(1),
      AcquisitionSpec::fixed({0.5, 0.5})};
  std::vector<DesignPoint> batch = generate_batch(ctx, archive_, acqs, rng_);

  // Batches go out sorted by ascending reaction temperature; the reactor
  // stabilizes faster when adjustments ramp monotonically.
  std::stable_sort(batch.begin(), batch.end(),
                   [](const DesignPoint& a, const DesignPoint& b) {
                     return a.values[0] < b.values[0];
                   });
  publish_batch(std::move(batch));
  phase_ = Phase::Iterating;
}

std::vector<std::uint64_t> Controller::pending_indices() const {
  std::vector<std::uint64_t> out;
  out.reserve(pending_.size());
  for (const auto& r : pending_) out.push_back(r.experiment_index);
  return out;
}

namespace {

json config_to_json(const CampaignConfig& c) {
  json vars = json::array();
  for (const auto& v : c.variables)
    vars.push_back({{"name", v.name},
                    {"lower", v.lower},
                    {"upper", v.upper},
                    {"units", v.units}});
  return json{{"variables", vars},
              {"n_initial", c.n_initial},
              {"n_iterations", c.n_iterations},
              {"batch_size", c.batch_size},
              {"seed", c.seed},
              {"stopping",
               {{"patience", c.stopping.patience},
                {"improvement_tol", c.stopping.improvement_tol}}},
              {"broker", {{"address", c.broker_address},
                          {"request_topic", c.topics.requests},
                          {"result_topic", c.topics.results},
                          {"dead_letter_topic", c.topics.dead_letter}}}};
}

CampaignConfig config_from_json(const json& j);

json model_to_json(const RbfModel& m) {
  json inputs = json::array();
  for (const auto& x : m.data().inputs) inputs.push_back(json(x));
  return json{{"inputs", inputs},
              {"outputs", m.data().outputs},
              {"weights", std::vector<double>(m.weights().begin(),
                                              m.weights().end())},
              {"sigma", m.shape()}};
}

RbfModel model_from_json(const json& j) {
  TrainingSet data;
  for (const auto& x : j.at("inputs"))
    data.inputs.push_back(x.get<std::vector<double>>());
  data.outputs = j.at("outputs").get<std::vector<double>>();
  return RbfModel::restore(std::move(data),
                           j.at("weights").get<std::vector<double>>(),
                           j.at("sigma").get<double>());
}

}  // namespace

void Controller::save_checkpoint(const std::filesystem::path& path) const {
  json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["config"] = config_to_json(config_);
  j["phase"] = to_string(phase_);
  j["stop_reason"] = to_string(stop_reason_);
  j["iteration"] = iteration_;
  j["next_experiment_index"] = next_experiment_index_;
  json rng = json::array();
  for (std::uint64_t w : rng_.state()) rng.push_back(hex64(w));
  j["rng"] = rng;
  if (best_scalar_) j["best_scalar"] = *best_scalar_;
  j["no_improve_streak"] = no_improve_streak_;

  json history = json::array();
  for (const auto& h : history_)
    history.push_back({{"experiment_index", h.experiment_index},
                       {"design", design_to_json(h.design)},
                       {"product_area", h.output.product_area},
                       {"byproduct_area", h.output.byproduct_area},
                       {"samples_to_steady", h.output.samples_to_steady},
                       {"steady", h.output.steady}});
  j["history"] = history;

  json pending = json::array();
  for (const auto& r : pending_)
    pending.push_back({{"experiment_index", r.experiment_index},
                       {"design", design_to_json(r.design)}});
  j["pending"] = pending;

  if (product_model_) j["product_model"] = model_to_json(*product_model_);
  if (byproduct_model_) j["byproduct_model"] = model_to_json(*byproduct_model_);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IntegrityError("cannot write checkpoint " + path.string());
  out << j.dump(2) << "\n";
}

Controller Controller::load_checkpoint(const std::filesystem::path& path,
                                       BrokerClient& client) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot read checkpoint " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("corrupt checkpoint: ") + e.what());
  }

  try {
    if (!j.is_object() || j.value("format", "") != kCheckpointFormat)
      throw IntegrityError("not a campaign checkpoint: " + path.string());
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw VersionError("checkpoint version " + std::to_string(version) +
                         " unsupported (this build speaks version " +
                         std::to_string(kCheckpointVersion) + ")");

    Controller c(config_from_json(j.at("config")), client);
    const std::string phase = j.at("phase").get<std::string>();
    if (phase == "initial") c.phase_ = Phase::Initial;
    else if (phase == "iterating") c.phase_ = Phase::Iterating;
    else if (phase == "stopped") c.phase_ = Phase::Stopped;
    else throw IntegrityError("checkpoint: unknown phase '" + phase + "'");
    const std::string reason = j.at("stop_reason").get<std::string>();
    if (reason == "none") c.stop_reason_ = StopReason::None;
    else if (reason == "budget") c.stop_reason_ = StopReason::Budget;
    else if (reason == "no_improvement") c.stop_reason_ = StopReason::NoImprovement;
    else throw IntegrityError("checkpoint: unknown stop reason '" + reason + "'");

    c.iteration_ = j.at("iteration").get<int>();
    c.next_experiment_index_ = j.at("next_experiment_index").get<std::uint64_t>();
    std::array<std::uint64_t, 4> state{};
    const auto& rng = j.at("rng");
    if (!rng.is_array() || rng.size() != 4)
      throw IntegrityError("checkpoint: bad rng state");
    for (std::size_t i = 0; i < 4; ++i)
      state[i] = parse_hex64(rng[i].get<std::string>());
    c.rng_ = Rng::from_state(state);
    if (j.contains("best_scalar")) c.best_scalar_ = j["best_scalar"].get<double>();
    c.no_improve_streak_ = j.at("no_improve_streak").get<int>();

    for (const auto& h : j.at("history")) {
      HistoryEntry entry;
      entry.experiment_index = h.at("experiment_index").get<std::uint64_t>();
      entry.design = design_from_json(h.at("design"));
      entry.output.product_area = h.at("product_area").get<double>();
      entry.output.byproduct_area = h.at("byproduct_area").get<double>();
      entry.output.samples_to_steady = h.at("samples_to_steady").get<int>();
      entry.output.steady = h.at("steady").get<bool>();
      entry.objectives = evaluate_objectives(entry.output);
      c.history_embedded_.push_back(c.problem_.embed(entry.design));
      c.archive_.insert(ArchiveEntry{entry.design, entry.objectives,
                                     entry.experiment_index});
      c.history_.push_back(std::move(entry));
    }
    for (const auto& p : j.at("pending")) {
      ExperimentRequest r;
      r.experiment_index = p.at("experiment_index").get<std::uint64_t>();
      r.design = design_from_json(p.at("design"));
      c.pending_.push_back(std::move(r));
    }

    if (!c.history_.empty()) {
      c.refit_models();
      // The persisted models must agree with a refit of the persisted data;
      // anything else means the file was tampered with or the formats drifted.
      for (const char* field : {"product_model", "byproduct_model"}) {
        if (!j.contains(field))
          throw IntegrityError("checkpoint: missing " + std::string(field));
        const RbfModel stored = model_from_json(j.at(field));
        const RbfModel& fresh = field == std::string("product_model")
                                    ? *c.product_model_
                                    : *c.byproduct_model_;
        const bool same =
            stored.shape() == fresh.shape() &&
            std::equal(stored.weights().begin(), stored.weights().end(),
                       fresh.weights().begin(), fresh.weights().end());
        if (!same)
          throw IntegrityError("checkpoint: stored " + std::string(field) +
                               " does not match its training data");
      }
    }
    return c;
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("corrupt checkpoint: ") + e.what());
  }
}

namespace {

CampaignConfig config_from_json(const json& j) {
  CampaignConfig c;
  c.variables.clear();
  for (const auto& v : j.at("variables"))
    c.variables.push_back(VariableSpec{v.at("name").get<std::string>(),
                                       v.at("lower").get<double>(),
                                       v.at("upper").get<double>(),
                                       v.value("units", "")});
  c.n_initial = j.at("n_initial").get<int>();
  c.n_iterations = j.at("n_iterations").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& s = j.at("stopping");
  c.stopping.patience = s.at("patience").get<int>();
  c.stopping.improvement_tol = s.at("improvement_tol").get<double>();
  const auto& b = j.at("broker");
  c.broker_address = b.value("address", "");
  c.topics.requests = b.at("request_topic").get<std::string>();
  c.topics.results = b.at("result_topic").get<std::string>();
  c.topics.dead_letter = b.at("dead_letter_topic").get<std::string>();
  return c;
}

}  // namespace

}  // namespace mobo
