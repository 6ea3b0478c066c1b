#include "gridfreq/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace gridfreq {
namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "'");
    return is;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

void write_trace_csv(const FrequencyTrace& trace, std::ostream& os) {
    trace.validate();
    if (trace.columns.size() == 1) {
        os << "time_s,freq_hz\n";
    } else {
        os << "time_s";
        for (const auto& l : trace.labels) os << ",freq_" << l;
        os << "\n";
    }
    for (std::size_t i = 0; i < trace.size(); ++i) {
        os << fixed6(trace.time(i));
        for (const auto& c : trace.columns) os << ',' << fixed6(c[i]);
        os << "\n";
    }
}

void write_trace_csv(const FrequencyTrace& trace, const std::string& path) {
    auto os = open_out(path);
    write_trace_csv(trace, os);
}

FrequencyTrace read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IngestError("empty trace file");
    const auto header = split(line);
    if (header.size() < 2 || header[0] != "time_s")
        throw IngestError("expected a time_s,freq_... header");

    FrequencyTrace trace;
    for (std::size_t j = 1; j < header.size(); ++j) {
        std::string name = header[j];
        if (name.rfind("freq_", 0) == 0) name = name.substr(5);
        trace.labels.push_back(name == "hz" ? "freq" : name);
    }
    trace.columns.assign(trace.labels.size(), {});

    std::vector<double> times;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != header.size())
            throw IngestError("row " + std::to_string(lineno) + ": wrong field count");
        try {
            times.push_back(std::stod(fields[0]));
            for (std::size_t j = 1; j < fields.size(); ++j)
                trace.columns[j - 1].push_back(std::stod(fields[j]));
        } catch (const std::exception&) {
            throw IngestError("row " + std::to_string(lineno) + ": unparseable value");
        }
    }
    if (times.size() < 2) throw IngestError("trace needs at least 2 rows");

    trace.start_s = times.front();
    trace.dt = (times.back() - times.front()) / double(times.size() - 1);
    if (!(trace.dt > 0.0)) throw IngestError("non-increasing time column");
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - trace.time(i)) > 0.01 * trace.dt)
            throw IngestError("time column is not uniform; use the ingest path for raw data");
    trace.validate();
    return trace;
}

FrequencyTrace read_trace_csv(const std::string& path) {
    auto is = open_in(path);
    return read_trace_csv(is);
}

namespace {

std::string fixed(double v, int places) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return buf;
}

}  // namespace

void write_report_csv(const MismatchReport& report, std::ostream& os) {
    os << "metric,measured,simulated,mismatch,success_value,pass\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        const int d = kReportDecimals[i];
        os << r.metric << ',' << fixed(r.measured, d) << ',' << fixed(r.simulated, d) << ','
           << fixed(r.mismatch, d) << ',' << fixed(r.success_value, d) << ','
           << (r.pass ? "true" : "false") << "\n";
    }
}

void write_report_csv(const MismatchReport& report, const std::string& path) {
    auto os = open_out(path);
    write_report_csv(report, os);
}

}  // namespace gridfreq
