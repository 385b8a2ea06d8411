#include "mobo/runner.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "mobo/controller.hpp"
#include "mobo/stream_tcp.hpp"

namespace mobo {

namespace {

constexpr std::uint64_t kSimCfrStream = 2;
constexpr int kResultWatchdogMs = 120'000;

// Drains a topic from offset 0; the campaign is over, so an empty poll means
// the log is exhausted.
void drain_topic(BrokerClient& client, const std::string& topic,
                 std::vector<MessageEnvelope>& sink) {
  ConsumerHandle h{topic, 0, "transcript-dump"};
  for (;;) {
    auto envs = client.poll(h, 512, 0);
    if (envs.empty()) break;
    for (auto& e : envs) sink.push_back(std::move(e));
  }
}

}  // namespace

RunSummary run_campaign(const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig& rc = options.config;
  rc.campaign.validate();

  std::filesystem::create_directories(options.out_dir);

  std::shared_ptr<Broker> broker;
  std::unique_ptr<BrokerServer> server;
  std::unique_ptr<BrokerClient> controller_client;
  std::unique_ptr<BrokerClient> cfr_client;
  std::unique_ptr<BrokerClient> dump_client;

  switch (options.transport) {
    case Transport::InProcess:
      broker = std::make_shared<Broker>();
      controller_client = std::make_unique<InProcessClient>(broker);
      cfr_client = std::make_unique<InProcessClient>(broker);
      dump_client = std::make_unique<InProcessClient>(broker);
      break;
    case Transport::TcpLoopback: {
      broker = std::make_shared<Broker>();
      server = std::make_unique<BrokerServer>(broker, "127.0.0.1:0");
      const std::string addr = server->address();
      controller_client = std::make_unique<TcpClient>(addr);
      cfr_client = std::make_unique<TcpClient>(addr);
      dump_client = std::make_unique<TcpClient>(addr);
      break;
    }
    case Transport::ExternalBroker:
      controller_client = std::make_unique<TcpClient>(rc.campaign.broker_address);
      cfr_client = std::make_unique<TcpClient>(rc.campaign.broker_address);
      dump_client = std::make_unique<TcpClient>(rc.campaign.broker_address);
      break;
  }

  SimCfrOptions cfr_options;
  cfr_options.noise_sigma = rc.sim.noise_sigma;
  cfr_options.seed = mix_seed(rc.campaign.seed, kSimCfrStream);
  cfr_options.throttle = rc.sim.throttle;
  cfr_options.ground_truth_fn = options.ground_truth_override;
  cfr_options.request_topic = rc.campaign.topics.requests;
  cfr_options.result_topic = rc.campaign.topics.results;
  cfr_options.dead_letter_topic = rc.campaign.topics.dead_letter;
  SimCfr cfr(*cfr_client, cfr_options);

  std::atomic<bool> stop_cfr{false};
  std::exception_ptr cfr_failure;
  std::atomic<bool> cfr_failed{false};
  std::thread cfr_thread([&] {
    try {
      cfr.serve(stop_cfr);
    } catch (...) {
      cfr_failure = std::current_exception();
      cfr_failed.store(true, std::memory_order_release);
    }
  });

  RunSummary summary;
  try {
    Controller controller(rc.campaign, *controller_client);
    controller.initialize();
    controller.save_checkpoint(options.out_dir / "checkpoint.json");

    ConsumerHandle results_consumer{rc.campaign.topics.results, 0, "controller"};
    std::map<std::uint64_t, ExperimentResult> inbox;

    while (controller.phase() != Phase::Stopped) {
      const auto pending = controller.pending_indices();
      const std::set<std::uint64_t> wanted(pending.begin(), pending.end());

      const auto deadline = std::chrono::steady_clock::now() +
                            std::chrono::milliseconds(kResultWatchdogMs);
      auto have_all = [&] {
        for (auto idx : wanted)
          if (!inbox.count(idx)) return false;
        return true;
      };
      while (!have_all()) {
        if (cfr_failed.load(std::memory_order_acquire))
          std::rethrow_exception(cfr_failure);
        if (std::chrono::steady_clock::now() > deadline)
          throw ProtocolError("timed out waiting for experiment results");
        for (auto& env : controller_client->poll(results_consumer, 64, 100)) {
          auto result = parse_result_payload(env.payload);
          inbox.emplace(result.experiment_index, std::move(result));  // first wins
        }
      }

      std::vector<ExperimentResult> batch;
      batch.reserve(wanted.size());
      for (auto idx : wanted) {
        batch.push_back(inbox.at(idx));
        inbox.erase(idx);
      }
      controller.step(batch);
      controller.save_checkpoint(options.out_dir / "checkpoint.json");
    }

    summary.stop_reason = controller.stop_reason();
    summary.completed = static_cast<int>(controller.history().size());
    for (const auto& h : controller.history())
      summary.best_product_area =
          std::max(summary.best_product_area, h.output.product_area);
  } catch (...) {
    stop_cfr = true;
    if (cfr_thread.joinable()) cfr_thread.join();
    throw;
  }

  // Ordered shutdown: the controller is done; stop the experiment client,
  // then dump the logs and let the broker go down with the process.
  stop_cfr = true;
  cfr_thread.join();
  if (cfr_failed.load(std::memory_order_acquire))
    std::rethrow_exception(cfr_failure);

  std::vector<MessageEnvelope> transcript;
  for (const auto& topic :
       std::set<std::string>{rc.campaign.topics.dead_letter,
                             rc.campaign.topics.requests,
                             rc.campaign.topics.results})
    drain_topic(*dump_client, topic, transcript);

  const auto config_path = options.out_dir / "config.json";
  {
    std::ofstream out(config_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IntegrityError("cannot write " + config_path.string());
    out << dump_run_config(rc);
  }
  const auto transcript_path = options.out_dir / "transcript.jsonl";
  write_transcript(transcript, transcript_path);

  std::vector<ExperimentRequest> requests;
  std::vector<ExperimentResult> results;
  for (const auto& e : transcript) {
    if (e.topic == rc.campaign.topics.requests)
      requests.push_back(parse_request_payload(e.payload));
    else if (e.topic == rc.campaign.topics.results)
      results.push_back(parse_result_payload(e.payload));
  }
  const auto results_path = options.out_dir / "results.csv";
  write_results_table(requests, results, results_path);

  RunManifest manifest{config_path, options.out_dir, transcript_path,
                       results_path};
  summary.manifest_path = options.out_dir / "manifest.json";
  save_manifest(manifest, summary.manifest_path);

  if (server) server->stop();
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return summary;
}

}  // namespace mobo
