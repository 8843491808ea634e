#pragma once

#include <string>

#include <json.hpp>

#include "rellich/criticality.hpp"
#include "rellich/lab.hpp"
#include "rellich/profiles.hpp"

namespace rellich {

/// Report schema version; bumped on any backward-incompatible field change.
inline constexpr int kSchemaVersion = 1;

/// Ordered JSON keeps key order deterministic, so identical runs produce
/// byte-identical report text.
using Json = nlohmann::ordered_json;

Json to_json(const QuadResult& r);
Json to_json(const ResidualReport& r);
Json to_json(const RatioResult& r);
Json to_json(const MarginReport& r);
Json to_json(const SupersolutionReport& r);
Json to_json(const FamilyRow& r);
Json to_json(const AttainabilityVerdict& r);
Json to_json(const SharpnessPoint& r);
Json to_json(const CriticalityIntegrals& r);
Json to_json(const RateFit& r);
Json to_json(const CriticalityVerdict& r);

/// Wraps a command result: schema version, command name, the effective
/// configuration, the result body, and a `pass` flag, plus volatile metadata
/// (timestamp) segregated under "meta" so reports are comparable byte for
/// byte after dropping that one key.
Json report_envelope(const std::string& command, const Json& effective_config,
                     const Json& body, bool pass);

/// Serialization with a trailing newline, stable across runs.
std::string report_text(const Json& report);

/// CSV for an eps sweep: header
/// eps,I1,I1_err,I2,I2_err,I3,I3_err,total and one row per sweep point.
std::string sweep_csv(const std::vector<std::pair<double, CriticalityIntegrals>>& sweep);

}  // namespace rellich
