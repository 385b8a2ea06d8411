#include "mobo/artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mobo/wire.hpp"

namespace mobo {

namespace {

using nlohmann::json;

constexpr char kManifestFormat[] = "mobo-manifest";
constexpr int kManifestVersion = 1;

// Shortest round-trip literal, identical to the payload serialization.
std::string number_literal(double v) { return json(v).dump(); }

}  // namespace

void save_manifest(const RunManifest& m, const std::filesystem::path& path) {
  const auto base = path.parent_path();
  json j{{"format", kManifestFormat},
         {"version", kManifestVersion},
         {"config", std::filesystem::relative(m.config_path, base).string()},
         {"transcript",
          std::filesystem::relative(m.transcript_path, base).string()},
         {"results_table",
          std::filesystem::relative(m.results_table_path, base).string()}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IntegrityError("cannot write manifest " + path.string());
  out << j.dump(2) << "\n";
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot read manifest " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("corrupt manifest: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kManifestFormat)
    throw IntegrityError("not a run manifest: " + path.string());
  if (j.value("version", 0) != kManifestVersion)
    throw VersionError("manifest version " +
                       std::to_string(j.value("version", 0)) + " unsupported");
  const auto base = path.parent_path();
  RunManifest m;
  try {
    m.config_path = base / j.at("config").get<std::string>();
    m.transcript_path = base / j.at("transcript").get<std::string>();
    m.results_table_path = base / j.at("results_table").get<std::string>();
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("corrupt manifest: ") + e.what());
  }
  m.out_dir = base;
  return m;
}

void write_transcript(const std::vector<MessageEnvelope>& envelopes,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IntegrityError("cannot write transcript " + path.string());
  for (const auto& e : envelopes) out << wire::transcript_line(e) << "\n";
}

std::vector<MessageEnvelope> read_transcript(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot read transcript " + path.string());
  std::vector<MessageEnvelope> envelopes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      envelopes.push_back(wire::parse_transcript_line(line));
    } catch (const IntegrityError& e) {
      throw IntegrityError("transcript line " + std::to_string(line_no) + ": " +
                           e.what());
    }
  }
  return envelopes;
}

std::vector<MessageEnvelope> topic_slice(
    const std::vector<MessageEnvelope>& transcript, const std::string& topic) {
  std::vector<MessageEnvelope> slice;
  for (const auto& e : transcript)
    if (e.topic == topic) slice.push_back(e);
  std::sort(slice.begin(), slice.end(),
            [](const MessageEnvelope& a, const MessageEnvelope& b) {
              return a.offset < b.offset;
            });
  for (std::size_t i = 0; i < slice.size(); ++i)
    if (slice[i].offset != i)
      throw IntegrityError("transcript: topic '" + topic +
                           "' offsets are not dense at " + std::to_string(i));
  return slice;
}

void write_results_table(const std::vector<ExperimentRequest>& requests,
                         const std::vector<ExperimentResult>& results,
                         const std::filesystem::path& path) {
  std::map<std::uint64_t, const ExperimentRequest*> by_index;
  for (const auto& r : requests) by_index[r.experiment_index] = &r;

  std::vector<const ExperimentResult*> ordered;
  ordered.reserve(results.size());
  for (const auto& r : results) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const ExperimentResult* a, const ExperimentResult* b) {
              return a->experiment_index < b->experiment_index;
            });

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IntegrityError("cannot write results table " + path.string());
  out << "experiment_index,temperature_C,time_s,equivalence_ratio,"
         "product_area,byproduct_area,samples_to_steady\n";
  for (const auto* r : ordered) {
    auto it = by_index.find(r->experiment_index);
    if (it == by_index.end())
      throw IntegrityError("result " + std::to_string(r->experiment_index) +
                           " has no matching request");
    const auto& d = it->second->design.values;
    out << r->experiment_index << "," << number_literal(d[0]) << ","
        << number_literal(d[1]) << "," << number_literal(d[2]) << ","
        << number_literal(r->output.product_area) << ","
        << number_literal(r->output.byproduct_area) << ","
        << r->output.samples_to_steady << "\n";
  }
}

std::string export_plot_csv(const std::vector<MessageEnvelope>& transcript,
                            const std::string& result_topic) {
  auto slice = topic_slice(transcript, result_topic);
  std::vector<ExperimentResult> results;
  results.reserve(slice.size());
  for (const auto& e : slice) results.push_back(parse_result_payload(e.payload));
  std::sort(results.begin(), results.end(),
            [](const ExperimentResult& a, const ExperimentResult& b) {
              return a.experiment_index < b.experiment_index;
            });
  std::ostringstream out;
  out << "experiment_index,product_area,byproduct_area\n";
  for (const auto& r : results)
    out << r.experiment_index << "," << number_literal(r.output.product_area)
        << "," << number_literal(r.output.byproduct_area) << "\n";
  return out.str();
}

}  // namespace mobo
