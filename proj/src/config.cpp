#include "mobo/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mobo {

namespace {

using nlohmann::json;

}  // namespace

RunConfig default_run_config() {
  RunConfig rc;
  rc.campaign.variables = {
      VariableSpec{"temperature_C", 40.0, 150.0, "C"},
      VariableSpec{"time_s", 60.0, 300.0, "s"},
      VariableSpec{"equivalence_ratio", 0.9, 2.0, ""},
  };
  return rc;
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: not a JSON object");

  RunConfig rc = default_run_config();
  auto& c = rc.campaign;
  try {
    if (j.contains("variables")) {
      c.variables.clear();
      for (const auto& v : j["variables"])
        c.variables.push_back(VariableSpec{v.at("name").get<std::string>(),
                                           v.at("lower").get<double>(),
                                           v.at("upper").get<double>(),
                                           v.value("units", "")});
    }
    c.n_initial = j.value("n_initial", c.n_initial);
    c.n_iterations = j.value("n_iterations", c.n_iterations);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.seed = j.value("seed", c.seed);
    if (j.contains("stopping")) {
      const auto& s = j["stopping"];
      c.stopping.patience = s.value("patience", c.stopping.patience);
      c.stopping.improvement_tol =
          s.value("improvement_tol", c.stopping.improvement_tol);
    }
    if (j.contains("broker")) {
      const auto& b = j["broker"];
      c.broker_address = b.value("address", c.broker_address);
      c.topics.requests = b.value("request_topic", c.topics.requests);
      c.topics.results = b.value("result_topic", c.topics.results);
      c.topics.dead_letter = b.value("dead_letter_topic", c.topics.dead_letter);
    }
    if (j.contains("simcfr")) {
      const auto& s = j["simcfr"];
      rc.sim.noise_sigma = s.value("noise_sigma", rc.sim.noise_sigma);
      rc.sim.throttle = s.value("throttle", rc.sim.throttle);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  }
  if (rc.sim.noise_sigma < 0.0)
    throw ConfigError("config: noise_sigma must be >= 0");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string dump_run_config(const RunConfig& rc) {
  const auto& c = rc.campaign;
  json vars = json::array();
  for (const auto& v : c.variables)
    vars.push_back({{"name", v.name},
                    {"lower", v.lower},
                    {"upper", v.upper},
                    {"units", v.units}});
  json j{{"variables", vars},
         {"n_initial", c.n_initial},
         {"n_iterations", c.n_iterations},
         {"batch_size", c.batch_size},
         {"seed", c.seed},
         {"stopping",
          {{"patience", c.stopping.patience},
           {"improvement_tol", c.stopping.improvement_tol}}},
         {"broker",
          {{"address", c.broker_address},
           {"request_topic", c.topics.requests},
           {"result_topic", c.topics.results},
           {"dead_letter_topic", c.topics.dead_letter}}},
         {"simcfr",
          {{"noise_sigma", rc.sim.noise_sigma}, {"throttle", rc.sim.throttle}}}};
  return j.dump(2) + "\n";
}

}  // namespace mobo
