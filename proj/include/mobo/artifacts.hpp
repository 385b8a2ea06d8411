#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mobo/payloads.hpp"
#include "mobo/stream.hpp"

namespace mobo {

// Files a campaign run leaves behind. The transcript holds every envelope of
// every topic in canonical order (topics sorted by name, offsets ascending)
// and is sufficient to replay the campaign deterministically.
struct RunManifest {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::filesystem::path transcript_path;
  std::filesystem::path results_table_path;
};

void save_manifest(const RunManifest& m, const std::filesystem::path& path);
// Paths inside the file are relative to the manifest's directory.
RunManifest load_manifest(const std::filesystem::path& path);

void write_transcript(const std::vector<MessageEnvelope>& envelopes,
                      const std::filesystem::path& path);
std::vector<MessageEnvelope> read_transcript(const std::filesystem::path& path);

// Envelopes of one topic, offsets ascending. Throws IntegrityError when the
// transcript's offsets for that topic are not dense from 0.
std::vector<MessageEnvelope> topic_slice(
    const std::vector<MessageEnvelope>& transcript, const std::string& topic);

// results.csv: one row per completed experiment joined with its request,
// ascending experiment index. Numbers are printed with the same
// shortest-round-trip form the payloads use, so the table equals the
// transcript values exactly.
void write_results_table(const std::vector<ExperimentRequest>& requests,
                         const std::vector<ExperimentResult>& results,
                         const std::filesystem::path& path);

// Plot export per the results topic: experiment_index,product_area,byproduct_area.
std::string export_plot_csv(const std::vector<MessageEnvelope>& transcript,
                            const std::string& result_topic);

}  // namespace mobo
