#pragma once

#include "pulsefringe/cli/config.hpp"
#include "pulsefringe/optimizer/optimizer.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace pf::cli {

using json = nlohmann::ordered_json;

json to_json(const ProtocolParams& p);
json to_json(const FringePattern& f);
json to_json(const BlurringBudget& b);
json to_json(const PatternMetrics& m);
json to_json(const CoherenceReport& c);
json to_json(const Extrema& e);
json to_json(const OptimizationResult& r);

// Tool name, version, command, timestamp and the config echo.
json record_header(const std::string& command, const ScenarioConfig& cfg);

// Everything but "timestamp" is a deterministic function of the inputs.
void write_json(const std::string& path, const json& j);

// Comment header with the tool version, then a header row and the columns.
void write_columns_csv(std::ostream& out, const std::vector<std::string>& comments,
                       const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns);

std::string utc_timestamp();

} // namespace pf::cli
