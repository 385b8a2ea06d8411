#include "mobo/replay.hpp"

#include <map>
#include <set>

#include "mobo/artifacts.hpp"
#include "mobo/config.hpp"
#include "mobo/controller.hpp"
#include "mobo/wire.hpp"

namespace mobo {

ReplayReport replay_manifest(const std::filesystem::path& manifest_path) {
  const RunManifest manifest = load_manifest(manifest_path);
  const RunConfig rc = load_run_config(manifest.config_path);
  const auto transcript = read_transcript(manifest.transcript_path);
  const auto recorded_requests =
      topic_slice(transcript, rc.campaign.topics.requests);
  const auto recorded_results =
      topic_slice(transcript, rc.campaign.topics.results);

  auto broker = std::make_shared<Broker>();
  InProcessClient client(broker);
  Controller controller(rc.campaign, client);

  ReplayReport report;
  std::uint64_t verified = 0;  // next recorded request offset to compare

  // Compares everything the controller has published beyond `verified`
  // against the recorded request log.
  auto verify_new_requests = [&]() -> std::optional<ReplayMismatch> {
    const auto fresh = broker->fetch(rc.campaign.topics.requests, verified,
                                     std::size_t(-1), 0);
    for (const auto& env : fresh) {
      if (verified >= recorded_requests.size())
        return ReplayMismatch{rc.campaign.topics.requests, verified,
                              "campaign regenerated more requests than the "
                              "transcript holds"};
      const std::string expected =
          wire::transcript_line(recorded_requests[verified]);
      const std::string actual = wire::transcript_line(env);
      if (actual != expected)
        return ReplayMismatch{rc.campaign.topics.requests, verified,
                              "regenerated request differs from transcript"};
      ++verified;
    }
    return std::nullopt;
  };

  controller.initialize();
  if (auto m = verify_new_requests()) {
    report.mismatch = m;
    return report;
  }

  std::size_t result_cursor = 0;
  while (controller.phase() != Phase::Stopped) {
    const auto pending = controller.pending_indices();
    const std::set<std::uint64_t> wanted(pending.begin(), pending.end());

    std::vector<ExperimentResult> batch;
    while (batch.size() < wanted.size()) {
      if (result_cursor >= recorded_results.size()) {
        report.mismatch = ReplayMismatch{
            rc.campaign.topics.results, result_cursor,
            "transcript ended before the outstanding batch completed"};
        return report;
      }
      const auto& env = recorded_results[result_cursor++];
      ExperimentResult result;
      try {
        result = parse_result_payload(env.payload);
      } catch (const ProtocolError& e) {
        report.mismatch =
            ReplayMismatch{rc.campaign.topics.results, env.offset, e.what()};
        return report;
      }
      if (!wanted.count(result.experiment_index)) {
        report.mismatch = ReplayMismatch{
            rc.campaign.topics.results, env.offset,
            "recorded result does not belong to the outstanding batch"};
        return report;
      }
      batch.push_back(std::move(result));
    }

    controller.step(batch);
    if (auto m = verify_new_requests()) {
      report.mismatch = m;
      return report;
    }
  }

  if (verified != recorded_requests.size()) {
    report.mismatch =
        ReplayMismatch{rc.campaign.topics.requests, verified,
                       "transcript holds requests the campaign never produced"};
    return report;
  }
  if (result_cursor != recorded_results.size()) {
    report.mismatch =
        ReplayMismatch{rc.campaign.topics.results, result_cursor,
                       "transcript holds results the campaign never consumed"};
    return report;
  }

  report.ok = true;
  report.replayed_requests = static_cast<int>(verified);
  return report;
}

}  // namespace mobo
