#pragma once

// Coordinated tuning of the three grid knobs (governor ratio, deadband
// width, inertia scale) against target response metrics, via bounded
// deterministic simplex search over a threshold-normalized objective.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gridfreq/metrics.hpp"
#include "gridfreq/simulator.hpp"

namespace gridfreq {

struct KnobVector {
    double governor_ratio = 1.0;  // [0, 1]
    double deadband_hz = 0.0;     // [0, 0.1]
    double inertia_scale = 1.0;   // [0.2, 5]

    static constexpr std::array<double, 3> lo() { return {0.0, 0.0, 0.2}; }
    static constexpr std::array<double, 3> hi() { return {1.0, 0.1, 5.0}; }

    std::array<double, 3> as_array() const { return {governor_ratio, deadband_hz, inertia_scale}; }
    static KnobVector from_array(std::span<const double> v) {
        return {v[0], v[1], v[2]};
    }
    void validate() const;
};

struct CalibrateOptions {
    int max_iters = 200;            // simplex budget summed over seed restarts
    double settle_penalty = 100.0;  // objective term when settling is not reached
    SimConfig sim;
    MetricsConfig metrics;
    std::string observe_label;      // observation column; empty = first
};

struct CalibrationResult {
    KnobVector best;
    MismatchReport report;          // at the best point
    std::vector<double> history;    // best-ever objective per iteration
    int iterations = 0;
    bool converged = false;         // all four metrics pass at the best point
};

// Simulate with the knobs applied and score against the target:
// sum over the 4 metrics of (mismatch / threshold)^2, with settle_penalty
// standing in for the settling-time term when the trace never settles.
double objective(const KnobVector& knobs, const GridModel& grid, const EventSpec& event,
                 const ResponseMetrics& target, const SuccessThresholds& th,
                 const CalibrateOptions& opt = {});

CalibrationResult calibrate(const GridModel& grid, const EventSpec& event,
                            const ResponseMetrics& target, const SuccessThresholds& th = {},
                            const CalibrateOptions& opt = {});

// Central-difference sensitivity: metric change across knob +/- delta,
// one row per knob, columns ordered (nadir, rocof, settling_time,
// settling_frequency).  Unsettled perturbations yield NaN in the settling
// column.
struct SensitivityRow {
    std::string knob;
    std::array<double, 4> dmetric{};
};
std::vector<SensitivityRow> sensitivity(const GridModel& grid, const EventSpec& event,
                                        const KnobVector& knobs, const KnobVector& deltas,
                                        const CalibrateOptions& opt = {});

}  // namespace gridfreq
