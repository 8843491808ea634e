#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rellich/multipole.hpp"
#include "rellich/reports.hpp"

namespace rellich {

/// Effective configuration of one CLI run.  Every field has a default, so a
/// partially specified textual config is always completable; the resolved
/// struct is embedded verbatim in each report, and to_json/from_json
/// round-trip it losslessly.
struct RunConfig {
  int N = 5;
  int n = 2;
  std::string layout = "simplex";      ///< "simplex" or "explicit"
  std::vector<Vec> poles;              ///< used when layout == "explicit"
  std::vector<std::string> weights;    ///< rationals as text; empty = uniform
  std::string s;                       ///< ground-state parameter; empty = 4-N

  long long samples = 200000;
  std::uint64_t seed = 20260814;       ///< overridden by env default, then flags
  long long batch_size = 8192;
  int threads = 0;

  // Trial-function selection (rayleigh).
  std::string trial = "bump";          ///< "bump", "mollified", "cutoff"
  std::vector<double> center;          ///< bump; empty = midpoint of a_1, a_2
  double radius = 0.25;                ///< bump
  double trial_delta = 0.05;           ///< mollified
  double trial_R = 20.0;               ///< mollified
  double trial_eps = 0.05;             ///< cutoff

  std::string potential = "vn";        ///< "w1","w2","w1w2","vn","hardy","rellich"
  int order = 2;
  double lambda = -1.0;                ///< verify target; < 0 = sharp constant

  std::vector<double> eps_sweep;       ///< criticality / cutoff sharpness grid
  std::vector<double> delta_sweep;     ///< mollified sharpness grid
  std::vector<double> R_sweep;         ///< paired with delta_sweep

  std::string out;                     ///< report path; empty = stdout
  std::string csv;                     ///< sweep CSV path; empty = skip
  std::vector<std::string> inputs;     ///< report aggregation inputs
};

/// Seed default: RELLICH_LAB_SEED from the environment when set (decimal),
/// otherwise the built-in constant.
std::uint64_t default_seed();

Json to_json(const RunConfig& cfg);

/// Fills defaults for absent keys; rejects unknown keys and wrongly typed
/// values.  Throws ConfigParseError.
RunConfig run_config_from_json(const Json& j);

/// Builds the validated pole geometry: the regular simplex layout from
/// (N, n) or the explicit pole list, with optional rational weights.
PoleConfig build_pole_config(const RunConfig& cfg);

}  // namespace rellich
