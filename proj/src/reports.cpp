#include "rellich/reports.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace rellich {
namespace {

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Full round-trip precision; %.17g is stable for a given double bit pattern.
std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Json to_json(const QuadResult& r) {
  return Json{{"estimate", r.estimate},
              {"std_error", r.std_error},
              {"samples", r.samples},
              {"seed", r.seed},
              {"excluded_mass_bound", r.excluded_mass_bound}};
}

Json to_json(const ResidualReport& r) {
  return Json{{"identity", r.identity_id},
              {"left", to_json(r.left)},
              {"right", to_json(r.right)},
              {"residual", r.residual},
              {"paired_sigma", r.paired_sigma},
              {"pass", r.pass}};
}

Json to_json(const RatioResult& r) {
  return Json{{"value", r.value},
              {"std_error", r.std_error},
              {"numerator", to_json(r.numerator)},
              {"denominator", to_json(r.denominator)},
              {"covariance", r.covariance}};
}

Json to_json(const MarginReport& r) {
  return Json{{"quotient", to_json(r.quotient)},
              {"lambda", r.lambda},
              {"margin", r.margin},
              {"pass", r.pass}};
}

Json to_json(const SupersolutionReport& r) {
  return Json{{"hardy_nonneg", r.hardy_nonneg},
              {"rellich_nonneg", r.rellich_nonneg},
              {"min_hardy_slack", r.min_hardy_slack},
              {"min_rellich_slack", r.min_rellich_slack},
              {"max_rellich_rel_residual", r.max_rellich_rel_residual},
              {"points", r.points}};
}

Json to_json(const FamilyRow& r) {
  Json j{{"family", r.family}, {"applicable", r.applicable}};
  if (r.applicable) {
    Json locals = Json::array();
    for (const auto& e : r.profile.local_exponents) locals.push_back(e.str());
    j["local_exponents"] = locals;
    j["infinity_exponent"] = r.profile.infinity_exponent.str();
    j["integrable"] = r.verdict.integrable;
    j["reason"] = r.verdict.reason;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const AttainabilityVerdict& r) {
  Json w = Json::array();
  for (const auto& e : r.witness_exponents) w.push_back(e.str());
  return Json{{"attained", r.attained}, {"witness_exponents", w}};
}

Json to_json(const SharpnessPoint& r) {
  return Json{{"delta_or_eps", r.delta_or_eps},
              {"far_R", r.far_R},
              {"quotient", to_json(r.quotient)}};
}

Json to_json(const CriticalityIntegrals& r) {
  return Json{{"I1", to_json(r.i1)},
              {"I2", to_json(r.i2)},
              {"I3", to_json(r.i3)},
              {"total", r.total()},
              {"total_std_error", r.total_std_error()}};
}

Json to_json(const RateFit& r) {
  return Json{{"c1", r.c1}, {"c2", r.c2}, {"residual", r.residual}, {"consistent", r.consistent}};
}

Json to_json(const CriticalityVerdict& r) {
  Json rows = Json::array();
  for (const auto& row : r.classification) rows.push_back(to_json(row));
  Json j{{"verdict", criticality_class_name(r.verdict)},
         {"attainability", to_json(r.attainability)},
         {"classification", rows},
         {"summary", r.summary}};
  if (r.verdict == CriticalityClass::PositiveCritical) {
    j["sharpness_ratio"] = r.sharpness_ratio;
    j["sharpness_ratio_err"] = r.sharpness_ratio_err;
  } else {
    Json sweep = Json::array();
    for (const auto& [eps, total] : r.sweep) sweep.push_back(Json{{"eps", eps}, {"total", total}});
    j["sweep"] = sweep;
    j["fit"] = to_json(r.fit);
  }
  return j;
}

Json report_envelope(const std::string& command, const Json& effective_config,
                     const Json& body, bool pass) {
  return Json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"config", effective_config},
              {"results", body},
              {"pass", pass},
              {"meta", Json{{"timestamp", iso_timestamp()}}}};
}

std::string report_text(const Json& report) { return report.dump(2) + "\n"; }

std::string sweep_csv(const std::vector<std::pair<double, CriticalityIntegrals>>& sweep) {
  std::string csv = "eps,I1,I1_err,I2,I2_err,I3,I3_err,total\n";
  for (const auto& [eps, r] : sweep) {
    csv += csv_num(eps) + "," + csv_num(r.i1.estimate) + "," + csv_num(r.i1.std_error) + "," +
           csv_num(r.i2.estimate) + "," + csv_num(r.i2.std_error) + "," +
           csv_num(r.i3.estimate) + "," + csv_num(r.i3.std_error) + "," + csv_num(r.total()) +
           "\n";
  }
  return csv;
}

}  // namespace rellich
