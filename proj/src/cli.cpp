#include "rellich/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rellich/criticality.hpp"
#include "rellich/reports.hpp"
#include "rellich/rng.hpp"
#include "rellich/run_config.hpp"
#include "rellich/trials.hpp"

namespace rellich {
namespace {

QuadParams quad_params(const RunConfig& cfg) {
  QuadParams p;
  p.samples = cfg.samples;
  p.seed = cfg.seed;
  p.batch_size = cfg.batch_size;
  p.threads = cfg.threads;
  return p;
}

Rational resolve_s(const RunConfig& cfg, const PoleConfig& config) {
  if (cfg.s.empty()) return Rational(4 - config.dim);
  try {
    return Rational::parse(cfg.s);
  } catch (const std::exception& e) {
    throw ConfigParseError(std::string("bad s: ") + e.what());
  }
}

Vec default_bump_center(const PoleConfig& config) {
  if (config.n() >= 2) {
    Vec c(config.dim);
    for (int k = 0; k < config.dim; ++k)
      c[k] = 0.5 * (config.poles[0][k] + config.poles[1][k]);
    return c;
  }
  Vec c = config.poles[0];
  c[0] += 1.0;
  return c;
}

TrialFunction resolve_trial(const RunConfig& cfg, const PoleConfig& config) {
  if (cfg.trial == "bump") {
    const Vec center = cfg.center.empty() ? default_bump_center(config) : cfg.center;
    if (static_cast<int>(center.size()) != config.dim)
      throw ConfigParseError("bump center coordinate count does not match N");
    return make_bump(config, center, cfg.radius);
  }
  if (cfg.trial == "mollified")
    return make_mollified_ground_state(config, resolve_s(cfg, config), cfg.trial_R,
                                       cfg.trial_delta);
  if (cfg.trial == "cutoff") return make_cutoff_ground_state(config, cfg.trial_eps);
  throw ConfigParseError("unknown trial kind \"" + cfg.trial + "\"");
}

PotentialSpec resolve_potential(const RunConfig& cfg, const PoleConfig& config) {
  if (cfg.potential == "w1") return make_w1(config);
  if (cfg.potential == "w2") return make_w2(config);
  if (cfg.potential == "w1w2") return make_w1_plus_w2(config);
  if (cfg.potential == "vn") return make_vn(config);
  if (cfg.potential == "hardy") return make_hardy_family(config, resolve_s(cfg, config));
  if (cfg.potential == "rellich") return make_rellich_family(config, resolve_s(cfg, config));
  throw ConfigParseError("unknown potential \"" + cfg.potential + "\"");
}

/// The constant the quotient is checked against, when one is pinned:
///   vn/order 2 -> N^2(N-4)^2/n^4; w2 -> (N-2)^2/n^2; w1w2 -> ((N-2)/(n+1))^2;
///   hardy and rellich families -> 1 (ground-state form of the inequality).
std::optional<double> pinned_lambda(const RunConfig& cfg, const PoleConfig& config) {
  if (cfg.lambda >= 0.0) return cfg.lambda;
  const int N = config.dim, n = config.n();
  if (cfg.potential == "vn" && cfg.order == 2 && n >= 2)
    return sharp_constant(N, n, 2).to_double();
  if (cfg.potential == "w2" && cfg.order == 1)
    return Rational((N - 2) * (N - 2), static_cast<long long>(n) * n).to_double();
  if (cfg.potential == "w1w2" && cfg.order == 1)
    return Rational((N - 2) * (N - 2), static_cast<long long>(n + 1) * (n + 1)).to_double();
  if (cfg.potential == "hardy" && cfg.order == 1) return 1.0;
  if (cfg.potential == "rellich" && cfg.order == 2) return 1.0;
  return std::nullopt;
}

/// Deterministic panel of evaluation points: uniform directions, log-uniform
/// radii in [0.2 separation scale, 2(max|a|+1)], rejected inside pole cores.
std::vector<Vec> random_points(const PoleConfig& config, int count, std::uint64_t seed) {
  BatchRng rng(seed, 0);
  const double sep = config.n() >= 2 ? config.min_separation : 1.0;
  const double r_lo = 0.05 * sep;
  const double r_hi = 2.0 * (config.max_pole_norm + 1.0);
  const Vec origin(config.dim, 0.0);
  std::vector<Vec> points;
  while (static_cast<int>(points.size()) < count) {
    const double r = r_lo * std::pow(r_hi / r_lo, rng.uniform());
    Vec x = rng.unit_direction(config.dim);
    for (auto& c : x) c *= r;
    bool clear = true;
    for (const auto& a : config.poles)
      if (dist2(a, x) < 1e-4 * sep * sep) clear = false;
    if (clear) points.push_back(std::move(x));
  }
  return points;
}

void emit(const RunConfig& cfg, const Json& report) {
  const std::string text = report_text(report);
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw ConfigParseError("cannot open output path " + cfg.out);
  out << text;
  std::cout << "report written to " << cfg.out << "\n";
}

int run_verify_identities(const RunConfig& cfg) {
  const PoleConfig config = build_pole_config(cfg);
  const Rational s = resolve_s(cfg, config);
  const QuadParams params = quad_params(cfg);

  // One bump clear of the poles plus one mollified ground state; both are
  // C^2, so both integral identities apply to each.
  std::vector<TrialFunction> trials;
  const double sep = config.n() >= 2 ? config.min_separation : 1.0;
  trials.push_back(make_bump(config, default_bump_center(config), 0.25 * sep));
  trials.push_back(make_mollified_ground_state(config, s, 3.0 * (config.max_pole_norm + 1.0),
                                               0.05 * sep));

  Json identities = Json::array();
  bool pass = true;
  for (const auto& u : trials) {
    for (const IdentityId id : {IdentityId::hardy_2_1, IdentityId::rellich_2_2}) {
      const ResidualReport r = check_identity(id, config, s, u, params);
      identities.push_back(to_json(r));
      pass = pass && r.pass;
    }
  }
  const ResidualReport xz =
      check_identity(IdentityId::xi_zeta_2_10, config, s, random_points(config, 50, cfg.seed));
  identities.push_back(to_json(xz));
  pass = pass && xz.pass;

  const SupersolutionReport super =
      supersolution_check(config, s, random_points(config, 1000, cfg.seed + 1));
  pass = pass && super.hardy_nonneg && super.rellich_nonneg;

  emit(cfg, report_envelope("verify-identities", to_json(cfg),
                            Json{{"identities", identities}, {"supersolution", to_json(super)}},
                            pass));
  return pass ? 0 : 2;
}

int run_rayleigh(const RunConfig& cfg) {
  const PoleConfig config = build_pole_config(cfg);
  const TrialFunction u = resolve_trial(cfg, config);
  const PotentialSpec V = resolve_potential(cfg, config);
  const std::optional<double> lambda = pinned_lambda(cfg, config);

  Json body;
  bool pass = true;
  if (lambda) {
    const MarginReport m = verify_inequality(u, V, *lambda, cfg.order, quad_params(cfg));
    body = Json{{"margin_report", to_json(m)}, {"lambda", *lambda}};
    pass = m.pass;
  } else {
    const RatioResult q = rayleigh_quotient(u, V, cfg.order, quad_params(cfg));
    body = Json{{"quotient", to_json(q)}};
  }
  emit(cfg, report_envelope("rayleigh", to_json(cfg), body, pass));
  return pass ? 0 : 2;
}

int run_sharpness(const RunConfig& cfg) {
  const PoleConfig config = build_pole_config(cfg);
  const QuadParams params = quad_params(cfg);

  std::vector<SharpnessPoint> points;
  if (config.n() >= 3) {
    std::vector<std::pair<double, double>> schedule;
    if (cfg.delta_sweep.empty()) {
      schedule = documented_mgs_schedule();
    } else {
      if (cfg.delta_sweep.size() != cfg.R_sweep.size())
        throw ConfigParseError("delta_sweep and R_sweep must pair up");
      for (std::size_t i = 0; i < cfg.delta_sweep.size(); ++i)
        schedule.emplace_back(cfg.delta_sweep[i], cfg.R_sweep[i]);
    }
    points = sharpness_probe(config, schedule, params);
  } else {
    const std::vector<double> schedule =
        cfg.eps_sweep.empty() ? documented_cutoff_schedule() : cfg.eps_sweep;
    points = sharpness_probe(config, schedule, params);
  }

  const double sharp = sharp_constant(config.dim, config.n(), 2).to_double();
  const double final_ratio = points.back().quotient.value / sharp;
  const bool pass = final_ratio >= 0.9 && final_ratio <= 1.1;

  Json list = Json::array();
  for (const auto& p : points) list.push_back(to_json(p));
  emit(cfg, report_envelope("sharpness", to_json(cfg),
                            Json{{"points", list},
                                 {"sharp_constant", sharp_constant(config.dim, config.n(), 2).str()},
                                 {"final_ratio", final_ratio}},
                            pass));
  return pass ? 0 : 2;
}

int run_classify(const RunConfig& cfg) {
  // The classification is a function of (N, n) alone.
  if (cfg.N <= 4) throw DimensionTooSmall("classification needs N >= 5");
  Json rows = Json::array();
  for (const auto& row : classify_seven_families(cfg.N, cfg.n)) rows.push_back(to_json(row));
  emit(cfg, report_envelope("classify", to_json(cfg),
                            Json{{"families", rows},
                                 {"attainability", to_json(attainability_verdict(cfg.N, cfg.n))}},
                            true));
  return 0;
}

int run_criticality(const RunConfig& cfg) {
  const PoleConfig config = build_pole_config(cfg);
  const std::vector<double> grid =
      cfg.eps_sweep.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.02} : cfg.eps_sweep;

  std::vector<std::pair<double, CriticalityIntegrals>> sweep;
  std::vector<std::pair<double, double>> series;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    QuadParams params = quad_params(cfg);
    std::uint64_t state = cfg.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1));
    params.seed = splitmix64(state);
    const CriticalityIntegrals ints =
        criticality_integrals(make_cutoff_family(config, grid[i]), params);
    sweep.emplace_back(grid[i], ints);
    series.emplace_back(grid[i], ints.total());
  }

  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
    const double gap = sweep[i].second.total() - sweep[i + 1].second.total();
    const double sigma = std::sqrt(sweep[i].second.total_variance +
                                   sweep[i + 1].second.total_variance);
    decreasing = decreasing && gap > 3.0 * sigma;
  }
  const RateFit fit = rate_fit(series, config.dim);
  const bool pass = decreasing && fit.consistent;

  if (!cfg.csv.empty()) {
    std::ofstream out(cfg.csv, std::ios::binary);
    if (!out) throw ConfigParseError("cannot open CSV path " + cfg.csv);
    out << sweep_csv(sweep);
  }

  Json rows = Json::array();
  for (const auto& [eps, ints] : sweep) {
    Json row = to_json(ints);
    row["eps"] = eps;
    rows.push_back(row);
  }
  emit(cfg, report_envelope("criticality", to_json(cfg),
                            Json{{"sweep", rows},
                                 {"rate_fit", to_json(fit)},
                                 {"strictly_decreasing_3sigma", decreasing}},
                            pass));
  return pass ? 0 : 2;
}

int run_verdict(const RunConfig& cfg) {
  const CriticalityVerdict v = criticality_verdict(cfg.N, cfg.n, quad_params(cfg));
  const bool pass = v.verdict == CriticalityClass::PositiveCritical
                        ? std::abs(v.sharpness_ratio - 1.0) <= 0.1
                        : v.fit.consistent;
  Json body = to_json(v);
  body["sharp_constant"] = sharp_constant(cfg.N, cfg.n, 2).str();
  emit(cfg, report_envelope("verdict", to_json(cfg), body, pass));
  return pass ? 0 : 2;
}

int run_report(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw ConfigParseError("report needs at least one input file");
  Json entries = Json::array();
  bool pass = true;
  for (const auto& path : cfg.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigParseError("cannot read input report " + path);
    Json j;
    try {
      in >> j;
    } catch (const Json::exception& e) {
      throw ConfigParseError("malformed report " + path + ": " + e.what());
    }
    if (!j.contains("schema_version") || !j.contains("command") || !j.contains("pass"))
      throw ConfigParseError("not a report file (missing envelope fields): " + path);
    const bool p = j.at("pass").get<bool>();
    entries.push_back(Json{{"file", path}, {"command", j.at("command")}, {"pass", p}});
    pass = pass && p;
  }
  emit(cfg, report_envelope("report", to_json(cfg),
                            Json{{"inputs", entries}, {"all_pass", pass}}, pass));
  return pass ? 0 : 2;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--N", cfg.N, "ambient dimension");
  cmd->add_option("--n", cfg.n, "number of poles");
  cmd->add_option("--layout", cfg.layout, "pole layout: simplex | explicit");
  cmd->add_option("--weights", cfg.weights, "pole weights as rationals, e.g. 1/3");
  cmd->add_option("--s", cfg.s, "ground-state exponent parameter (rational)");
  cmd->add_option("--samples", cfg.samples, "Monte-Carlo sample budget");
  cmd->add_option("--seed", cfg.seed, "random seed (default: RELLICH_LAB_SEED or built-in)");
  cmd->add_option("--batch-size", cfg.batch_size, "samples per deterministic batch");
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  cmd->add_option("--out", cfg.out, "report output path (default: stdout)");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  try {
    cfg.seed = default_seed();
    // A config file, when present, is loaded first so flags override it.
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") {
        std::ifstream in(argv[i + 1], std::ios::binary);
        if (!in) throw ConfigParseError(std::string("cannot read config ") + argv[i + 1]);
        Json j;
        try {
          in >> j;
        } catch (const Json::exception& e) {
          throw ConfigParseError(std::string("malformed config: ") + e.what());
        }
        const std::uint64_t seed = cfg.seed;
        cfg = run_config_from_json(j);
        if (!j.contains("seed")) cfg.seed = seed;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"numerical laboratory for sharp multipolar Hardy and Rellich inequalities"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration (flags override)");

  CLI::App* verify = app.add_subcommand("verify-identities",
                                        "check the ground-state identities and supersolution signs");
  CLI::App* rayleigh = app.add_subcommand("rayleigh", "Rayleigh quotient of one trial function");
  CLI::App* sharp = app.add_subcommand("sharpness", "minimizing-sequence sweep toward the sharp constant");
  CLI::App* classify = app.add_subcommand("classify", "integrability table of the seven weight families");
  CLI::App* crit = app.add_subcommand("criticality", "truncation-energy sweep and decay fit");
  CLI::App* verdict = app.add_subcommand("verdict", "criticality verdict with numeric evidence");
  CLI::App* report = app.add_subcommand("report", "aggregate prior reports into one summary");

  for (CLI::App* cmd : {verify, rayleigh, sharp, classify, crit, verdict, report}) {
    add_common_options(cmd, cfg);
    // The config file is applied by the pre-scan above (so flags can override
    // it); registering the option here lets it appear after the subcommand.
    cmd->add_option("--config", config_path, "JSON run configuration (flags override)");
  }

  rayleigh->add_option("--trial", cfg.trial, "bump | mollified | cutoff");
  rayleigh->add_option("--center", cfg.center, "bump center coordinates");
  rayleigh->add_option("--radius", cfg.radius, "bump radius");
  rayleigh->add_option("--delta", cfg.trial_delta, "mollified near cutoff");
  rayleigh->add_option("--R", cfg.trial_R, "mollified far cutoff");
  rayleigh->add_option("--eps", cfg.trial_eps, "cutoff trial eps");
  rayleigh->add_option("--potential", cfg.potential, "w1 | w2 | w1w2 | vn | hardy | rellich");
  rayleigh->add_option("--order", cfg.order, "derivative order: 1 | 2");
  rayleigh->add_option("--lambda", cfg.lambda, "constant to verify against (default: pinned)");

  sharp->add_option("--delta-sweep", cfg.delta_sweep, "mollified near cutoffs");
  sharp->add_option("--R-sweep", cfg.R_sweep, "mollified far cutoffs (paired)");
  sharp->add_option("--eps-sweep", cfg.eps_sweep, "cutoff sweep (n = 2)");

  crit->add_option("--eps-sweep", cfg.eps_sweep, "cutoff sweep grid");
  crit->add_option("--csv", cfg.csv, "CSV output path for the sweep");

  report->add_option("--inputs", cfg.inputs, "report files to aggregate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (verify->parsed()) return run_verify_identities(cfg);
    if (rayleigh->parsed()) return run_rayleigh(cfg);
    if (sharp->parsed()) return run_sharpness(cfg);
    if (classify->parsed()) return run_classify(cfg);
    if (crit->parsed()) return run_criticality(cfg);
    if (verdict->parsed()) return run_verdict(cfg);
    if (report->parsed()) return run_report(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace rellich
