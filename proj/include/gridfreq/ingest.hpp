#pragma once

// Measurement CSV ingestion: column mapping, gross-outlier rejection,
// timestamp parsing, and uniformity repair (resample when jittered).

#include <cstddef>
#include <optional>
#include <string>

#include "gridfreq/trace.hpp"

namespace gridfreq {

struct IngestOptions {
    std::string time_col;  // header name or 0-based index; empty = auto-detect
    std::string freq_col;
    std::optional<double> rate_hz;  // nominal sample rate; default = median interval

    // Samples outside this band are gross outliers (dropped, counted).
    double freq_lo = 55.0;
    double freq_hi = 65.0;
};

struct IngestResult {
    FrequencyTrace trace;
    std::size_t outliers_dropped = 0;
    std::size_t rows_skipped = 0;  // unparseable data rows
    bool resampled = false;
};

// Throws IngestError when the file is empty of usable rows, when more than
// 5% of data rows fail to parse, or when a mapped column is missing;
// IoError when the file cannot be opened.
IngestResult ingest_measurement(const std::string& path, const IngestOptions& opt = {});

}  // namespace gridfreq
