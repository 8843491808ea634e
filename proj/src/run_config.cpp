#include "rellich/run_config.hpp"

#include <cstdlib>

namespace rellich {
namespace {

template <typename T>
void read_field(const Json& j, const char* key, T& into) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigParseError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RELLICH_LAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ConfigParseError(std::string("RELLICH_LAB_SEED is not a decimal integer: ") + env);
  }
  return RunConfig{}.seed;
}

Json to_json(const RunConfig& cfg) {
  Json poles = Json::array();
  for (const auto& p : cfg.poles) poles.push_back(p);
  return Json{{"N", cfg.N},
              {"n", cfg.n},
              {"layout", cfg.layout},
              {"poles", poles},
              {"weights", cfg.weights},
              {"s", cfg.s},
              {"samples", cfg.samples},
              {"seed", cfg.seed},
              {"batch_size", cfg.batch_size},
              {"threads", cfg.threads},
              {"trial", cfg.trial},
              {"center", cfg.center},
              {"radius", cfg.radius},
              {"trial_delta", cfg.trial_delta},
              {"trial_R", cfg.trial_R},
              {"trial_eps", cfg.trial_eps},
              {"potential", cfg.potential},
              {"order", cfg.order},
              {"lambda", cfg.lambda},
              {"eps_sweep", cfg.eps_sweep},
              {"delta_sweep", cfg.delta_sweep},
              {"R_sweep", cfg.R_sweep},
              {"out", cfg.out},
              {"csv", cfg.csv},
              {"inputs", cfg.inputs}};
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigParseError("run config must be a JSON object");
  static const Json reference = to_json(RunConfig{});
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!reference.contains(key)) throw ConfigParseError("unknown config key \"" + key + "\"");
  }
  RunConfig cfg;
  read_field(j, "N", cfg.N);
  read_field(j, "n", cfg.n);
  read_field(j, "layout", cfg.layout);
  if (j.contains("poles")) {
    try {
      cfg.poles = j.at("poles").get<std::vector<Vec>>();
    } catch (const Json::exception& e) {
      throw ConfigParseError(std::string("bad value for \"poles\": ") + e.what());
    }
  }
  read_field(j, "weights", cfg.weights);
  read_field(j, "s", cfg.s);
  read_field(j, "samples", cfg.samples);
  read_field(j, "seed", cfg.seed);
  read_field(j, "batch_size", cfg.batch_size);
  read_field(j, "threads", cfg.threads);
  read_field(j, "trial", cfg.trial);
  read_field(j, "center", cfg.center);
  read_field(j, "radius", cfg.radius);
  read_field(j, "trial_delta", cfg.trial_delta);
  read_field(j, "trial_R", cfg.trial_R);
  read_field(j, "trial_eps", cfg.trial_eps);
  read_field(j, "potential", cfg.potential);
  read_field(j, "order", cfg.order);
  read_field(j, "lambda", cfg.lambda);
  read_field(j, "eps_sweep", cfg.eps_sweep);
  read_field(j, "delta_sweep", cfg.delta_sweep);
  read_field(j, "R_sweep", cfg.R_sweep);
  read_field(j, "out", cfg.out);
  read_field(j, "csv", cfg.csv);
  read_field(j, "inputs", cfg.inputs);
  return cfg;
}

PoleConfig build_pole_config(const RunConfig& cfg) {
  std::vector<Vec> poles;
  if (cfg.layout == "simplex") {
    poles = regular_simplex_poles(cfg.n, cfg.N);
  } else if (cfg.layout == "explicit") {
    poles = cfg.poles;
    if (poles.empty()) throw ConfigParseError("explicit layout needs a pole list");
    for (const auto& p : poles)
      if (static_cast<int>(p.size()) != cfg.N)
        throw ConfigParseError("pole coordinate count does not match N");
  } else {
    throw ConfigParseError("unknown layout \"" + cfg.layout + "\"");
  }
  std::optional<std::vector<Rational>> weights;
  if (!cfg.weights.empty()) {
    std::vector<Rational> w;
    for (const auto& text : cfg.weights) {
      try {
        w.push_back(Rational::parse(text));
      } catch (const std::exception& e) {
        throw ConfigParseError(std::string("bad weight \"") + text + "\": " + e.what());
      }
    }
    weights = std::move(w);
  }
  return make_config(cfg.N, std::move(poles), std::move(weights));
}

}  // namespace rellich
