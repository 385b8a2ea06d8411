#include "mobo/payloads.hpp"

#include <json.hpp>

namespace mobo {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number())
    throw ProtocolError(std::string("payload: missing numeric field '") + field +
                        "'");
  return j[field].get<double>();
}

std::uint64_t require_index(const json& j) {
  if (!j.contains("experiment_index") ||
      !j["experiment_index"].is_number_unsigned())
    throw ProtocolError("payload: missing unsigned field 'experiment_index'");
  return j["experiment_index"].get<std::uint64_t>();
}

json parse_object(const std::string& payload) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("payload: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("payload: not a JSON object");
  return j;
}

}  // namespace

std::string make_request_payload(const ExperimentRequest& r) {
  if (r.design.values.size() != 3)
    throw ProtocolError("request payload needs the 3 campaign variables");
  json j;
  j["experiment_index"] = r.experiment_index;
  j["temperature_C"] = r.design.values[0];
  j["time_s"] = r.design.values[1];
  j["equivalence_ratio"] = r.design.values[2];
  return j.dump();
}

ExperimentRequest parse_request_payload(const std::string& payload) {
  const json j = parse_object(payload);
  ExperimentRequest r;
  r.experiment_index = require_index(j);
  r.design.values = {require_number(j, "temperature_C"),
                     require_number(j, "time_s"),
                     require_number(j, "equivalence_ratio")};
  return r;
}

std::string make_result_payload(const ExperimentResult& r) {
  json j;
  j["experiment_index"] = r.experiment_index;
  j["product_area"] = r.output.product_area;
  j["byproduct_area"] = r.output.byproduct_area;
  j["samples_to_steady"] = r.output.samples_to_steady;
  return j.dump();
}

ExperimentResult parse_result_payload(const std::string& payload) {
  const json j = parse_object(payload);
  ExperimentResult r;
  r.experiment_index = require_index(j);
  r.output.product_area = require_number(j, "product_area");
  r.output.byproduct_area = require_number(j, "byproduct_area");
  const double samples = require_number(j, "samples_to_steady");
  r.output.samples_to_steady = static_cast<int>(samples);
  return r;
}

}  // namespace mobo
