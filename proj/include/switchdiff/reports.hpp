#pragma once

// JSON emitters for the analysis/report records, so downstream tooling can
// consume them without parsing CSV.

#include <string>

#include "switchdiff/embedded.hpp"
#include "switchdiff/estimate.hpp"
#include "switchdiff/model.hpp"

namespace switchdiff {

std::string to_json_string(const CriterionReport& rep);
std::string to_json_string(const MCEstimate& est);
std::string to_json_string(const IntervalStats& stats);
std::string to_json_string(const OccupationReport& rep);
std::string to_json_string(const DriftCheckReport& rep);
std::string to_json_string(const BoundReport& rep);
std::string to_json_string(const Histogram& hist);

}  // namespace switchdiff
