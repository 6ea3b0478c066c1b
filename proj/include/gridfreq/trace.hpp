#pragma once

// Uniformly sampled frequency time series, one column per observation point.
// Covers both simulator output and ingested measurements.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gridfreq/errors.hpp"

namespace gridfreq {

struct FrequencyTrace {
    double dt = 0.1;       // sample interval, s
    double start_s = 0.0;  // time of the first sample, s
    std::vector<std::string> labels;
    std::vector<std::vector<double>> columns;  // columns[j][i]: label j, sample i
    std::optional<double> event_time_s;

    std::size_t size() const { return columns.empty() ? 0 : columns.front().size(); }
    double time(std::size_t i) const { return start_s + static_cast<double>(i) * dt; }
    double end_s() const { return size() == 0 ? start_s : time(size() - 1); }

    const std::vector<double>& column(const std::string& label) const {
        for (std::size_t j = 0; j < labels.size(); ++j)
            if (labels[j] == label) return columns[j];
        throw InvalidParameter("trace: no column labeled '" + label + "'");
    }

    void validate() const {
        if (!(std::isfinite(dt)) || dt <= 0.0)
            throw InvalidParameter("trace: sample interval must be > 0");
        if (!std::isfinite(start_s)) throw InvalidParameter("trace: start time must be finite");
        if (columns.empty() || labels.size() != columns.size())
            throw InvalidParameter("trace: labels and columns must match and be non-empty");
        const std::size_t n = columns.front().size();
        if (n < 2) throw InvalidParameter("trace: at least 2 samples required");
        for (const auto& c : columns) {
            if (c.size() != n) throw InvalidParameter("trace: ragged columns");
            for (double v : c)
                if (!std::isfinite(v)) throw InvalidParameter("trace: non-finite sample");
        }
        if (event_time_s && !std::isfinite(*event_time_s))
            throw InvalidParameter("trace: event time must be finite");
    }
};

}  // namespace gridfreq
