#pragma once

// CSV emit/load for traces and reports.  Headers are fixed:
//   time_s,freq_hz                                    single-column trace
//   time_s,freq_<label>[,freq_<label>...]             multi-column trace
//   metric,measured,simulated,mismatch,success_value,pass   mismatch report

#include <array>
#include <iosfwd>
#include <string>

#include "gridfreq/metrics.hpp"
#include "gridfreq/trace.hpp"

namespace gridfreq {

// Display decimals per metric row (nadir, rocof, settling_time,
// settling_frequency), matching the published table formatting.
inline constexpr std::array<int, 4> kReportDecimals{3, 2, 1, 3};

void write_trace_csv(const FrequencyTrace& trace, std::ostream& os);
void write_trace_csv(const FrequencyTrace& trace, const std::string& path);

FrequencyTrace read_trace_csv(std::istream& is);
FrequencyTrace read_trace_csv(const std::string& path);

// Values printed at published-table precision: nadir and settling frequency
// 3 decimals, rocof 2, settling time 1.
void write_report_csv(const MismatchReport& report, std::ostream& os);
void write_report_csv(const MismatchReport& report, const std::string& path);

}  // namespace gridfreq
