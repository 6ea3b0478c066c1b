#pragma once

// JSON schemas for grids, events, governors, configs, and result reports.
// Governor objects carry a "kind" discriminator plus fields named exactly as
// in the parameter structs; deadband widths travel in Hz (the grid's nominal
// frequency converts them to per-unit on load).

#include <string>

#include "json.hpp"

#include "gridfreq/calibrate.hpp"
#include "gridfreq/convert.hpp"
#include "gridfreq/grid.hpp"
#include "gridfreq/metrics.hpp"

namespace gridfreq {

using json = nlohmann::json;

json governor_to_json(const GovernorModel& m, double f0);
GovernorModel governor_from_json(const json& j, double f0);

json grid_to_json(const GridModel& g);
GridModel grid_from_json(const json& j);

json event_to_json(const EventSpec& e);
EventSpec event_from_json(const json& j);

json metrics_config_to_json(const MetricsConfig& c);
MetricsConfig metrics_config_from_json(const json& j);

json response_metrics_to_json(const ResponseMetrics& m);
ResponseMetrics response_metrics_from_json(const json& j);

json thresholds_to_json(const SuccessThresholds& t);
SuccessThresholds thresholds_from_json(const json& j);

json report_to_json(const MismatchReport& r);
json conversion_report_to_json(const ConversionReport& r, double f0);
json calibration_result_to_json(const CalibrationResult& r);

// File helpers; parse failures raise IoError with the path and reason.
json load_json(const std::string& path);
void save_json(const json& j, const std::string& path);

}  // namespace gridfreq
