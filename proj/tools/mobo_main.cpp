#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "mobo/artifacts.hpp"
#include "mobo/config.hpp"
#include "mobo/replay.hpp"
#include "mobo/runner.hpp"
#include "mobo/stream_tcp.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

int cmd_run(const std::string& config_path, const std::string& seed_flag,
            const std::string& broker_addr, const std::string& out_dir,
            double noise_sigma, bool noise_set, bool throttle, int iterations,
            bool iterations_set, bool tcp_loopback) {
  mobo::RunOptions options;
  try {
    options.config = config_path.empty() ? mobo::default_run_config()
                                         : mobo::load_run_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  // Seed precedence: --seed, then MOBO_SEED, then the config file.
  try {
    if (!seed_flag.empty()) {
      options.config.campaign.seed = std::stoull(seed_flag);
    } else if (const char* env = std::getenv("MOBO_SEED")) {
      options.config.campaign.seed = std::stoull(env);
    }
  } catch (const std::exception&) {
    std::cerr << "config error: seed is not an unsigned integer\n";
    return 2;
  }
  if (noise_set) options.config.sim.noise_sigma = noise_sigma;
  if (throttle) options.config.sim.throttle = true;
  if (iterations_set) options.config.campaign.n_iterations = iterations;
  options.out_dir = out_dir;
  if (!broker_addr.empty()) {
    options.config.campaign.broker_address = broker_addr;
    options.transport = mobo::Transport::ExternalBroker;
  } else if (tcp_loopback) {
    options.transport = mobo::Transport::TcpLoopback;
  }

  try {
    options.config.campaign.validate();
    if (options.config.sim.noise_sigma < 0.0)
      throw mobo::ConfigError("noise_sigma must be >= 0");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const mobo::RunSummary summary = mobo::run_campaign(options);
    std::cout << "campaign stopped (" << mobo::to_string(summary.stop_reason)
              << ") after " << summary.completed << " experiments in "
              << summary.wall_seconds << " s\n"
              << "best product area: " << summary.best_product_area << "\n"
              << "manifest: " << summary.manifest_path.string() << "\n";
    return 0;
  } catch (const mobo::ConnectionError& e) {
    std::cerr << "broker error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_export_plot(const std::string& manifest_path, const std::string& out) {
  try {
    const mobo::RunManifest manifest = mobo::load_manifest(manifest_path);
    const mobo::RunConfig rc = mobo::load_run_config(manifest.config_path);
    const auto transcript = mobo::read_transcript(manifest.transcript_path);
    const std::string csv =
        mobo::export_plot_csv(transcript, rc.campaign.topics.results);
    if (out.empty() || out == "-") {
      std::cout << csv;
    } else {
      std::ofstream f(out, std::ios::binary | std::ios::trunc);
      if (!f) {
        std::cerr << "cannot write " << out << "\n";
        return 2;
      }
      f << csv;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "export failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_replay(const std::string& manifest_path) {
  mobo::ReplayReport report;
  try {
    report = mobo::replay_manifest(manifest_path);
  } catch (const std::exception& e) {
    std::cerr << "replay failed: " << e.what() << "\n";
    return 2;
  }
  if (report.ok) {
    std::cout << "replay ok: " << report.replayed_requests
              << " requests regenerated byte-identically\n";
    return 0;
  }
  std::cerr << "replay diverged at topic '" << report.mismatch->topic
            << "' offset " << report.mismatch->offset << ": "
            << report.mismatch->detail << "\n";
  return 1;
}

int cmd_broker(const std::string& listen_addr) {
  try {
    auto broker = std::make_shared<mobo::Broker>();
    mobo::BrokerServer server(broker, listen_addr);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "broker listening on " << server.address() << "\n";
    while (!g_interrupted)
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
  } catch (const mobo::ConnectionError& e) {
    std::cerr << "broker error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop flow-chemistry optimization campaign over a "
               "topic-based broker"};
  app.require_subcommand(1);

  std::string config_path, seed_flag, broker_addr, out_dir = "mobo_out";
  double noise_sigma = 0.5;
  bool throttle = false, tcp_loopback = false;
  int iterations = 0;

  auto* run = app.add_subcommand("run", "run a campaign to completion");
  run->add_option("--config", config_path, "campaign config file (JSON)");
  run->add_option("--seed", seed_flag, "campaign seed (overrides MOBO_SEED and config)");
  run->add_option("--broker-addr", broker_addr,
                  "connect to an external broker at HOST:PORT instead of "
                  "hosting one in-process");
  run->add_option("--out", out_dir, "output directory");
  auto* noise_opt =
      run->add_option("--noise-sigma", noise_sigma, "measurement noise sigma");
  run->add_flag("--throttle", throttle, "slow the simulated experiments down");
  auto* iter_opt = run->add_option("--iterations", iterations,
                                   "model-exploiting iterations after the "
                                   "initial design");
  run->add_flag("--tcp", tcp_loopback,
                "host the broker on a loopback TCP port and run the campaign "
                "through it");

  std::string manifest_path, export_out;
  auto* exp = app.add_subcommand("export-plot",
                                 "write experiment_index,product_area,"
                                 "byproduct_area CSV from a run manifest");
  exp->add_option("manifest", manifest_path, "manifest.json of a finished run")
      ->required();
  exp->add_option("--out", export_out, "output CSV path (default: stdout)");

  std::string replay_manifest_path;
  auto* rep = app.add_subcommand(
      "replay", "re-drive a recorded campaign and verify it byte-for-byte");
  rep->add_option("manifest", replay_manifest_path,
                  "manifest.json of a finished run")
      ->required();

  std::string listen_addr = "127.0.0.1:7987";
  auto* brk = app.add_subcommand("broker", "host a standalone broker");
  brk->add_option("--listen", listen_addr, "bind address (host:port)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(config_path, seed_flag, broker_addr, out_dir, noise_sigma,
                   noise_opt->count() > 0, throttle, iterations,
                   iter_opt->count() > 0, tcp_loopback);
  if (exp->parsed()) return cmd_export_plot(manifest_path, export_out);
  if (rep->parsed()) return cmd_replay(replay_manifest_path);
  if (brk->parsed()) return cmd_broker(listen_addr);
  return 1;
}
