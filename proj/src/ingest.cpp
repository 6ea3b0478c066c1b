#include "gridfreq/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "gridfreq/errors.hpp"

namespace gridfreq {
namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::string trimmed(std::string s) {
    while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.back())) != 0)) {
        s.pop_back();
    }
    std::size_t i = 0;
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) != 0)) {
        ++i;
    }
    return s.substr(i);
}

std::string lowered(std::string s) {
    for (char& c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

bool parse_number(const std::string& s, double& out) {
    const std::string t = trimmed(s);
    if (t.empty()) {
        return false;
    }
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

// Days since 1970-01-01 for a proleptic Gregorian date.
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097L + static_cast<long>(doe) - 719468L;
}

// Accepts plain seconds, "HH:MM:SS[.frac]", or "YYYY-MM-DD[T ]HH:MM:SS[.frac]".
bool parse_time(const std::string& raw, double& out) {
    const std::string t = trimmed(raw);
    if (parse_number(t, out)) {
        return true;
    }
    int y = 0;
    int mo = 0;
    int d = 0;
    int h = 0;
    int mi = 0;
    double sec = 0.0;
    if (std::sscanf(t.c_str(), "%d-%d-%d%*1[T ]%d:%d:%lf", &y, &mo, &d, &h, &mi, &sec) == 6) {
        out = static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 + mi * 60.0 +
              sec;
        return true;
    }
    if (std::sscanf(t.c_str(), "%d:%d:%lf", &h, &mi, &sec) == 3) {
        out = h * 3600.0 + mi * 60.0 + sec;
        return true;
    }
    return false;
}

// Column reference: explicit index, explicit name, or auto-detected name.
std::size_t resolve_col(const std::string& want, const std::vector<std::string>& header,
                        const std::vector<std::string>& auto_names, std::size_t fallback_idx,
                        const char* what) {
    if (!want.empty()) {
        double idx = 0.0;
        if (parse_number(want, idx) && idx >= 0.0) {
            return static_cast<std::size_t>(idx);
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (lowered(trimmed(header[i])) == lowered(want)) {
                return i;
            }
        }
        throw IngestError(std::string("column '") + want + "' not found for " + what);
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = lowered(trimmed(header[i]));
        for (const auto& cand : auto_names) {
            if (name == cand || name.rfind(cand + "_", 0) == 0) {
                return i;
            }
        }
    }
    return fallback_idx;
}

}  // namespace

IngestResult ingest_measurement(const std::string& path, const IngestOptions& opt) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }

    std::string line;
    std::vector<std::string> header;
    bool has_header = false;
    std::streampos data_start = in.tellg();
    if (std::getline(in, line)) {
        const auto fields = split(line);
        double tmp = 0.0;
        // A header is any first row whose mapped columns are not numeric.
        has_header = !fields.empty() && !parse_number(fields[0], tmp);
        if (has_header) {
            header = fields;
        } else {
            in.seekg(data_start);
        }
    }

    const std::size_t tcol =
        resolve_col(opt.time_col, header, {"time", "time_s", "timestamp", "t", "utc"}, 0, "time");
    const std::size_t fcol =
        resolve_col(opt.freq_col, header, {"freq", "frequency", "freq_hz", "f", "hz"}, 1, "frequency");

    std::vector<double> times;
    std::vector<double> freqs;
    IngestResult res;
    std::size_t data_rows = 0;
    while (std::getline(in, line)) {
        if (trimmed(line).empty()) {
            continue;
        }
        ++data_rows;
        const auto fields = split(line);
        double t = 0.0;
        double f = 0.0;
        if (fields.size() <= std::max(tcol, fcol) || !parse_time(fields[tcol], t) ||
            !parse_number(fields[fcol], f)) {
            ++res.rows_skipped;
            continue;
        }
        if (f < opt.freq_lo || f > opt.freq_hi) {
            ++res.outliers_dropped;
            continue;
        }
        times.push_back(t);
        freqs.push_back(f);
    }

    if (data_rows == 0 || times.empty()) {
        throw IngestError("'" + path + "' contains no usable samples");
    }
    if (static_cast<double>(res.rows_skipped) > 0.05 * static_cast<double>(data_rows)) {
        throw IngestError("'" + path + "': " + std::to_string(res.rows_skipped) + " of " +
                          std::to_string(data_rows) + " rows unparseable (> 5%)");
    }
    if (times.size() < 2) {
        throw IngestError("'" + path + "' has fewer than 2 usable samples");
    }

    // Sort by time, drop duplicate instants.
    std::vector<std::size_t> order(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
    std::vector<double> ts;
    std::vector<double> fs;
    ts.reserve(times.size());
    fs.reserve(times.size());
    for (std::size_t k : order) {
        if (!ts.empty() && !(times[k] > ts.back())) {
            ++res.rows_skipped;
            continue;
        }
        ts.push_back(times[k]);
        fs.push_back(freqs[k]);
    }
    if (ts.size() < 2) {
        throw IngestError("'" + path + "' has fewer than 2 distinct sample instants");
    }

    // Timestamp-style time bases get rebased so traces start near zero.
    if (ts.front() > 1e6) {
        const double base = ts.front();
        for (double& t : ts) {
            t -= base;
        }
    }

    double dt = 0.0;
    if (opt.rate_hz) {
        if (*opt.rate_hz <= 0.0) {
            throw InvalidParameter("rate hint must be > 0");
        }
        dt = 1.0 / *opt.rate_hz;
    } else {
        std::vector<double> gaps(ts.size() - 1);
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            gaps[i] = ts[i + 1] - ts[i];
        }
        std::nth_element(gaps.begin(), gaps.begin() + static_cast<long>(gaps.size() / 2),
                         gaps.end());
        dt = gaps[gaps.size() / 2];
    }
    if (!(dt > 0.0)) {
        throw IngestError("'" + path + "': cannot determine a positive sample interval");
    }

    bool uniform = true;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (std::abs(ts[i + 1] - ts[i] - dt) > 0.01 * dt) {
            uniform = false;
            break;
        }
    }

    FrequencyTrace trace;
    trace.dt = dt;
    trace.start_s = ts.front();
    trace.labels = {"measured"};
    if (uniform) {
        trace.columns = {std::move(fs)};
    } else {
        // Linear interpolation onto the nominal grid spanning the data.
        res.resampled = true;
        const double span = ts.back() - ts.front();
        const std::size_t n = static_cast<std::size_t>(std::floor(span / dt + 1e-9)) + 1;
        std::vector<double> vals(n);
        std::size_t seg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = ts.front() + static_cast<double>(i) * dt;
            while (seg + 2 < ts.size() && ts[seg + 1] <= t) {
                ++seg;
            }
            const double t0 = ts[seg];
            const double t1 = ts[seg + 1];
            const double w = (t - t0) / (t1 - t0);
            vals[i] = fs[seg] + w * (fs[seg + 1] - fs[seg]);
        }
        trace.columns = {std::move(vals)};
    }
    trace.validate();
    res.trace = std::move(trace);
    return res;
}

}  // namespace gridfreq
