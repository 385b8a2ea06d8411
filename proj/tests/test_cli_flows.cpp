// End-to-end flows behind the CLI subcommands: full runs over both
// transports, plot export, replay audit, config parsing.

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mobo/artifacts.hpp"
#include "mobo/config.hpp"
#include "mobo/replay.hpp"
#include "mobo/runner.hpp"
#include "test_support.hpp"

using namespace mobo;

namespace {

RunOptions quick_options(const std::filesystem::path& out,
                         int n_initial = 6, int n_iterations = 2) {
  RunOptions o;
  o.config = default_run_config();
  o.config.campaign.n_initial = n_initial;
  o.config.campaign.n_iterations = n_iterations;
  o.config.campaign.seed = 7;
  o.config.sim.noise_sigma = 0.0;
  o.out_dir = out;
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::size_t count_rows(const std::string& csv) {
  std::size_t rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  return rows - 1;  // header
}

}  // namespace

TEST_CASE("a small campaign runs to completion and writes its artifacts") {
  const auto dir = testsupport::scratch_dir("run_small");
  const RunSummary s = run_campaign(quick_options(dir));
  CHECK(s.completed == 6 + 2 * 3);
  CHECK(s.stop_reason == StopReason::Budget);
  CHECK(std::filesystem::exists(s.manifest_path));
  CHECK(std::filesystem::exists(dir / "transcript.jsonl"));
  CHECK(std::filesystem::exists(dir / "results.csv"));
  CHECK(std::filesystem::exists(dir / "config.json"));
  CHECK(std::filesystem::exists(dir / "checkpoint.json"));
  CHECK(count_rows(slurp(dir / "results.csv")) == 12);
}

TEST_CASE("iterations=0 runs the initial design only") {
  const auto dir = testsupport::scratch_dir("run_doe_only");
  const RunSummary s = run_campaign(quick_options(dir, 15, 0));
  CHECK(s.completed == 15);
  CHECK(count_rows(slurp(dir / "results.csv")) == 15);
}

TEST_CASE("identical invocations produce identical results tables") {
  const auto dir1 = testsupport::scratch_dir("run_det_1");
  const auto dir2 = testsupport::scratch_dir("run_det_2");
  RunOptions o1 = quick_options(dir1);
  o1.config.sim.noise_sigma = 0.5;  // noise comes from seeded streams
  RunOptions o2 = quick_options(dir2);
  o2.config.sim.noise_sigma = 0.5;
  run_campaign(o1);
  run_campaign(o2);
  CHECK(slurp(dir1 / "results.csv") == slurp(dir2 / "results.csv"));
  CHECK(slurp(dir1 / "transcript.jsonl") == slurp(dir2 / "transcript.jsonl"));
}

TEST_CASE("tcp loopback transport leaves a byte-identical transcript") {
  const auto dir_in = testsupport::scratch_dir("run_transport_in");
  const auto dir_tcp = testsupport::scratch_dir("run_transport_tcp");
  RunOptions in_proc = quick_options(dir_in);
  in_proc.config.sim.noise_sigma = 0.5;
  RunOptions tcp = quick_options(dir_tcp);
  tcp.config.sim.noise_sigma = 0.5;
  tcp.transport = Transport::TcpLoopback;
  run_campaign(in_proc);
  run_campaign(tcp);
  CHECK(slurp(dir_in / "transcript.jsonl") == slurp(dir_tcp / "transcript.jsonl"));
}

TEST_CASE("plot export projects the transcript results") {
  const auto dir = testsupport::scratch_dir("run_export");
  const RunSummary s = run_campaign(quick_options(dir));
  const RunManifest manifest = load_manifest(s.manifest_path);
  const RunConfig rc = load_run_config(manifest.config_path);
  const auto transcript = read_transcript(manifest.transcript_path);
  const std::string csv =
      export_plot_csv(transcript, rc.campaign.topics.results);
  CHECK(count_rows(csv) == 12);

  // exported values appear verbatim in some transcript payload
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const std::string product = line.substr(c1 + 1, c2 - c1 - 1);
    bool found = false;
    for (const auto& e : transcript)
      if (e.payload.find("\"product_area\":" + product) != std::string::npos)
        found = true;
    CHECK(found);
  }
}

TEST_CASE("replay accepts an untouched manifest and locates tampering") {
  const auto dir = testsupport::scratch_dir("run_replay");
  const RunSummary s = run_campaign(quick_options(dir));

  SUBCASE("clean transcript replays byte-for-byte") {
    const ReplayReport report = replay_manifest(s.manifest_path);
    CHECK(report.ok);
    CHECK(report.replayed_requests == 12);
  }

  SUBCASE("a single flipped result byte is located") {
    const auto path = dir / "transcript.jsonl";
    std::string text = slurp(path);
    // flip one digit inside a results payload (base64 of the JSON changes)
    const RunManifest manifest = load_manifest(s.manifest_path);
    auto transcript = read_transcript(path);
    bool tampered = false;
    for (auto& e : transcript) {
      if (e.topic == "experiment.results" && e.offset == 2) {
        REQUIRE(!e.payload.empty());
        const auto pos = e.payload.find("product_area");
        REQUIRE(pos != std::string::npos);
        // nudge the first digit of the number after the colon
        auto digit = e.payload.find_first_of("0123456789", pos + 14);
        e.payload[digit] = e.payload[digit] == '9' ? '1' : e.payload[digit] + 1;
        tampered = true;
      }
    }
    REQUIRE(tampered);
    write_transcript(transcript, path);

    const ReplayReport report = replay_manifest(s.manifest_path);
    CHECK_FALSE(report.ok);
    REQUIRE(report.mismatch.has_value());
    CHECK(report.mismatch->topic == "experiment.requests");
  }

  SUBCASE("a tampered request byte is located at its offset") {
    const auto path = dir / "transcript.jsonl";
    auto transcript = read_transcript(path);
    for (auto& e : transcript)
      if (e.topic == "experiment.requests" && e.offset == 4) {
        const auto pos = e.payload.find("temperature_C");
        auto digit = e.payload.find_first_of("0123456789", pos + 15);
        e.payload[digit] = e.payload[digit] == '9' ? '1' : e.payload[digit] + 1;
      }
    write_transcript(transcript, path);
    const ReplayReport report = replay_manifest(s.manifest_path);
    CHECK_FALSE(report.ok);
    REQUIRE(report.mismatch.has_value());
    CHECK(report.mismatch->topic == "experiment.requests");
    CHECK(report.mismatch->offset == 4);
  }

  SUBCASE("missing transcript is an integrity error") {
    std::filesystem::remove(dir / "transcript.jsonl");
    CHECK_THROWS_AS(replay_manifest(s.manifest_path), IntegrityError);
  }
}

TEST_CASE("config files parse with defaults and reject garbage") {
  const RunConfig def = default_run_config();
  CHECK(def.campaign.n_initial == 15);
  CHECK(def.campaign.n_iterations == 9);
  CHECK(def.campaign.batch_size == 3);
  CHECK(def.campaign.seed == 7);
  CHECK(def.campaign.total_budget() == 42);
  CHECK(def.campaign.variables[0].lower == 40.0);
  CHECK(def.campaign.variables[2].upper == 2.0);

  const RunConfig parsed = parse_run_config(
      "{\"seed\": 11, \"n_iterations\": 4, "
      "\"stopping\": {\"patience\": 2}, "
      "\"simcfr\": {\"noise_sigma\": 0.25}}");
  CHECK(parsed.campaign.seed == 11);
  CHECK(parsed.campaign.n_iterations == 4);
  CHECK(parsed.campaign.stopping.patience == 2);
  CHECK(parsed.campaign.stopping.improvement_tol == 0.5);  // default kept
  CHECK(parsed.sim.noise_sigma == 0.25);

  CHECK_THROWS_AS(parse_run_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("{\"n_initial\": 0}"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("{\"simcfr\": {\"noise_sigma\": -1}}"),
                  ConfigError);

  // dump/parse roundtrip
  const RunConfig back = parse_run_config(dump_run_config(parsed));
  CHECK(back.campaign.seed == parsed.campaign.seed);
  CHECK(back.campaign.stopping.patience == parsed.campaign.stopping.patience);
  CHECK(back.sim.noise_sigma == parsed.sim.noise_sigma);
}

TEST_CASE("run -> replay on its own manifest always exits clean") {
  const auto dir = testsupport::scratch_dir("run_replay_loop");
  RunOptions o = quick_options(dir, 5, 1);
  o.config.sim.noise_sigma = 0.5;
  const RunSummary s = run_campaign(o);
  const ReplayReport report = replay_manifest(s.manifest_path);
  CHECK(report.ok);
}
