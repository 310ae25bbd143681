#pragma once

// JSON report records and the flat CSV table.

#include <string>
#include <vector>

#include <json.hpp>

#include "torusfold/config.hpp"
#include "torusfold/norms.hpp"
#include "torusfold/verify.hpp"

namespace torusfold {

using Json = nlohmann::ordered_json;

Json to_json(const NormEstimate& e);
Json to_json(const LemmaCheck& c);
Json to_json(const ChainReport& r);
Json config_json(const ExperimentConfig& cfg);

/// {tool, version, command, timestamp, constants, config, records, summary}.
/// Everything except "timestamp" is a function of the configuration.
Json make_report(const std::string& command, const ExperimentConfig& cfg, Json records,
                 Json summary);

std::string utc_timestamp();

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);
void write_report(const std::string& path, const Json& report);

}  // namespace torusfold
