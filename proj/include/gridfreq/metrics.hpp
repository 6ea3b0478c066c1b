#pragma once

// Frequency-response metric extraction (nadir, RoCoF, settling time,
// settling frequency), event-onset detection for measured traces, and
// mismatch scoring against success thresholds.

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "gridfreq/trace.hpp"

namespace gridfreq {

struct MetricsConfig {
    double pre_window_s = 2.0;    // Point A averaging window before onset
    double nadir_window_s = 30.0; // nadir search span after onset (clipped to trace end)
    double settle_eps_hz = 0.005; // settling band half-width
    double settle_hold_s = 5.0;   // time the band must hold (truncated at trace end)
    double tail_s = 10.0;         // settling frequency = mean of the last tail_s
    std::optional<std::pair<double, double>> tail_after_event;  // overrides tail_s: window
                                                                // relative to onset, s
    double detect_threshold_mhz_s = 2.0;  // onset slope threshold
    double detect_window_s = 0.5;         // backward span for the smoothed slope

    void validate() const;
};

struct ResponseMetrics {
    double nadir = 0.0;               // Hz
    double rocof = 0.0;               // mHz/s, |A - C| / (t_C - t_A) average slope
    double settling_time = 0.0;       // s after onset
    double settling_frequency = 0.0;  // Hz
    double point_a = 0.0;             // Hz
    double t_nadir = 0.0;             // s, absolute trace time
};

struct SuccessThresholds {
    double nadir = 0.010;               // Hz
    double rocof = 10.0;                // mHz/s
    double settling_time = 3.0;         // s
    double settling_frequency = 0.010;  // Hz

    void validate() const;
};

struct MetricMismatch {
    std::string metric;
    double measured = 0.0;
    double simulated = 0.0;
    double mismatch = 0.0;
    double success_value = 0.0;
    bool pass = false;
};

struct MismatchReport {
    std::array<MetricMismatch, 4> rows;  // nadir, rocof, settling_time, settling_frequency
    bool overall_pass = false;
};

// Earliest time where the backward detect_window_s slope magnitude reaches
// the threshold; annotates the trace.  Throws NoEventDetected.
double detect_event(FrequencyTrace& trace, const MetricsConfig& cfg, std::size_t col = 0);

// The four metrics relative to onset t0.  Throws RocofUndefined when the
// minimum sits at t0, SettlingNotReached when no band entry holds.
ResponseMetrics extract_metrics(const FrequencyTrace& trace, double t0,
                                const MetricsConfig& cfg = {}, std::size_t col = 0);

namespace detail {
// Same, but reports settling failure in the flag instead of throwing
// (settling_time = 0 when unsettled); the calibration objective turns that
// flag into a penalty.
std::pair<ResponseMetrics, bool> extract_metrics_partial(const FrequencyTrace& trace, double t0,
                                                         const MetricsConfig& cfg,
                                                         std::size_t col = 0);
}  // namespace detail

MismatchReport score(const ResponseMetrics& measured, const ResponseMetrics& simulated,
                     const SuccessThresholds& th = {});

// Linear interpolation onto a uniform grid at new_rate_hz; original sample
// instants that land on the new grid keep their exact values.
FrequencyTrace resample(const FrequencyTrace& trace, double new_rate_hz);

// Fixed-point rounding helper (printf-style) used when quoting metrics at
// published-table precision.
double round_places(double v, int places);

}  // namespace gridfreq
