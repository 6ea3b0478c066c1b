#pragma once

// Batch validation: per-case simulate / ingest / score, Table-style summary
// with per-metric averages, and plot-ready overlay emission.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gridfreq/ingest.hpp"
#include "gridfreq/json_io.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/simulator.hpp"

namespace gridfreq {

struct CaseSpec {
    std::string name;
    std::string grid_file;
    std::string event_time;  // wall-clock label for reports, not used numerically
    EventSpec event;         // t_event is the simulation onset
    std::string measured_file;
    IngestOptions ingest;
    std::string observe;     // simulated column label; empty = first column
    std::optional<MetricsConfig> metrics;
    SimConfig sim;
};

struct CaseResult {
    std::string name;
    bool ok = false;
    std::string error;
    ResponseMetrics measured;
    ResponseMetrics simulated;
    MismatchReport report;
};

struct ValidationSummary {
    std::vector<CaseResult> cases;
    std::array<double, 4> average{};  // mean mismatch per metric over ok cases
    std::array<bool, 4> average_pass{};
    SuccessThresholds thresholds;
    bool overall_pass = false;
};

// Cases run in parallel (GRIDFREQ_THREADS caps the worker count); the summary
// keeps input order.  Per-case failures land in CaseResult::error.  Throws
// InvalidParameter on an empty case list.
ValidationSummary run_validate(const std::vector<CaseSpec>& cases,
                               const SuccessThresholds& th = {});

// cases.json: {"thresholds": {...}?, "cases": [{name, grid, trip_mw, area,
// t_event?, event_time?, measured, time_col?, freq_col?, rate_hz?, observe?,
// metrics?, sim: {dt?, horizon_s?, report_rate_hz?}?}, ...]}.  Relative file
// paths resolve against base_dir.
std::vector<CaseSpec> cases_from_json(const json& j, const std::string& base_dir);
SuccessThresholds thresholds_from_cases_json(const json& j);

void write_summary_csv(const ValidationSummary& s, std::ostream& os);
void write_summary_csv(const ValidationSummary& s, const std::string& path);

// Measured/simulated overlay on the coarser trace's sample grid over the
// overlapping span, time zeroed at each trace's event annotation.  Header
// `time_s,freq_measured,freq_simulated`, or `time_s,freq_simulated` when
// measured is null.  Throws MetricsError when an event annotation is missing.
void emit_plotdata(const FrequencyTrace* measured, const FrequencyTrace& simulated,
                   const std::string& out_path, std::size_t mcol = 0, std::size_t scol = 0);

}  // namespace gridfreq
