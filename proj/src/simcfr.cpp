#include "mobo/simcfr.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mobo/wire.hpp"

namespace mobo {

namespace {

constexpr double kRelaxSamples = 5.0;  // relaxation time constant, in samples

double sample_stddev(std::span<const double> window) {
  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= static_cast<double>(window.size());
  double ss = 0.0;
  for (double v : window) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(window.size() - 1));
}

double window_mean(const std::vector<double>& samples, int window) {
  double s = 0.0;
  for (std::size_t i = samples.size() - static_cast<std::size_t>(window);
       i < samples.size(); ++i)
    s += samples[i];
  return s / window;
}

}  // namespace

std::pair<double, double> ground_truth(const ReactionModel& model,
                                       double temp_c, double time_s,
                                       double ratio) {
  std::ostringstream bad;
  if (temp_c < kTempMin || temp_c > kTempMax)
    bad << "temperature " << temp_c << " C outside [" << kTempMin << ", "
        << kTempMax << "]";
  else if (time_s < kTimeMin || time_s > kTimeMax)
    bad << "reaction time " << time_s << " s outside [" << kTimeMin << ", "
        << kTimeMax << "]";
  else if (ratio < kRatioMin || ratio > kRatioMax)
    bad << "equivalence ratio " << ratio << " outside [" << kRatioMin << ", "
        << kRatioMax << "]";
  if (!bad.str().empty()) throw BoundsError(bad.str());

  const double t_kelvin = temp_c + 273.15;
  const double k_p = std::exp(model.a_p - model.b_p / t_kelvin);
  const double k_s = std::exp(model.a_s - model.b_s / t_kelvin);
  const double conversion = 1.0 - std::exp(-k_p * time_s);
  const double side = 1.0 - std::exp(-k_s * time_s);
  const double gate = std::min(1.0, ratio / model.ratio_knee);
  return {model.scale * conversion * (1.0 - side) * gate,
          model.scale * conversion * side};
}

bool detect_steady(std::span<const double> samples,
                   const SteadyStateDetector& detector) {
  if (samples.size() < static_cast<std::size_t>(detector.window))
    throw std::invalid_argument("detect_steady: fewer samples than one window");
  return sample_stddev(samples.subspan(samples.size() -
                                       static_cast<std::size_t>(detector.window))) <
         detector.threshold;
}

SimOutcome simulate_relaxation(double product_asymptote,
                               double byproduct_asymptote,
                               const SteadyStateDetector& detector,
                               double noise_sigma, Rng& rng) {
  if (detector.window < 2 || detector.threshold <= 0.0 ||
      detector.max_samples < detector.window)
    throw std::invalid_argument("simulate_relaxation: bad detector settings");
  SimOutcome out;
  auto& p = out.trace.product;
  auto& b = out.trace.byproduct;

  int fired_at = 0;
  for (int k = 1; k <= detector.max_samples; ++k) {
    const double relax = 1.0 - std::exp(-static_cast<double>(k) / kRelaxSamples);
    double vp = product_asymptote * relax;
    double vb = byproduct_asymptote * relax;
    if (noise_sigma > 0.0) {
      vp += rng.normal(0.0, noise_sigma);
      vb += rng.normal(0.0, noise_sigma);
    }
    p.push_back(vp);
    b.push_back(vb);
    if (k >= detector.window && detect_steady(p, detector) &&
        detect_steady(b, detector)) {
      fired_at = k;
      break;
    }
  }

  out.output.steady = fired_at > 0;
  out.output.samples_to_steady = out.output.steady ? fired_at : detector.max_samples;
  out.output.product_area = std::max(0.0, window_mean(p, detector.window));
  out.output.byproduct_area = std::max(0.0, window_mean(b, detector.window));
  return out;
}

SimCfr::SimCfr(BrokerClient& client, SimCfrOptions options)
    : client_(client), options_(std::move(options)) {
  if (!options_.ground_truth_fn) {
    const ReactionModel model = options_.model;
    options_.ground_truth_fn = [model](double t, double s, double r) {
      return ground_truth(model, t, s, r);
    };
  }
}

void SimCfr::dead_letter(const MessageEnvelope& env, const std::string& reason) {
  nlohmann::json j;
  j["error"] = reason;
  j["request_offset"] = env.offset;
  j["request_payload"] = wire::base64_encode(env.payload);
  client_.publish(options_.dead_letter_topic, env.key, j.dump());
  ++dead_letters_;
}

void SimCfr::handle(const MessageEnvelope& env) {
  ExperimentRequest request;
  try {
    request = parse_request_payload(env.payload);
  } catch (const ProtocolError& e) {
    dead_letter(env, e.what());
    return;
  }

  std::pair<double, double> truth;
  try {
    truth = options_.ground_truth_fn(request.design.values[0],
                                     request.design.values[1],
                                     request.design.values[2]);
  } catch (const BoundsError& e) {
    dead_letter(env, e.what());
    return;
  }

  Rng rng(mix_seed(options_.seed, request.experiment_index));
  const SimOutcome outcome = simulate_relaxation(
      truth.first, truth.second, options_.detector, options_.noise_sigma, rng);
  if (options_.throttle)
    std::this_thread::sleep_for(std::chrono::milliseconds(
        25 * outcome.output.samples_to_steady));

  ExperimentResult result{request.experiment_index, outcome.output};
  client_.publish(options_.result_topic, std::to_string(result.experiment_index),
                  make_result_payload(result));
  ++served_;
}

void SimCfr::serve(const std::atomic<bool>& stop) {
  client_.create_topic(options_.request_topic);
  client_.create_topic(options_.result_topic);
  client_.create_topic(options_.dead_letter_topic);
  ConsumerHandle consumer{options_.request_topic, 0, "simcfr"};
  while (!stop.load()) {
    std::vector<MessageEnvelope> envs;
    try {
      envs = client_.poll(consumer, 16, 100);
    } catch (const ConnectionError& e) {
      if (!e.retryable) throw;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      continue;
    }
    for (const auto& env : envs) handle(env);
  }
}

}  // namespace mobo
