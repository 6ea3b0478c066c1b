#include "gridfreq/validate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include "gridfreq/csv.hpp"
#include "gridfreq/errors.hpp"

namespace gridfreq {
namespace {

std::size_t col_index(const FrequencyTrace& trace, const std::string& label) {
    if (label.empty()) {
        return 0;
    }
    for (std::size_t j = 0; j < trace.labels.size(); ++j) {
        if (trace.labels[j] == label) {
            return j;
        }
    }
    throw InvalidParameter("trace has no column labeled '" + label + "'");
}

std::size_t worker_count(std::size_t n_cases) {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) {
        n = 1;
    }
    if (const char* env = std::getenv("GRIDFREQ_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) {
            n = static_cast<std::size_t>(v);
        }
    }
    return std::max<std::size_t>(1, std::min(n, n_cases));
}

CaseResult run_case(const CaseSpec& c, const SuccessThresholds& th) {
    CaseResult r;
    r.name = c.name;
    try {
        const GridModel grid = grid_from_json(load_json(c.grid_file));
        const MetricsConfig mcfg = c.metrics.value_or(MetricsConfig{});

        FrequencyTrace sim = simulate(grid, c.event, c.sim);
        const std::size_t scol = col_index(sim, c.observe);
        r.simulated = extract_metrics(sim, *sim.event_time_s, mcfg, scol);

        IngestResult m = ingest_measurement(c.measured_file, c.ingest);
        const double t0m = detect_event(m.trace, mcfg);
        r.measured = extract_metrics(m.trace, t0m, mcfg);

        r.report = score(r.measured, r.simulated, th);
        r.ok = true;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

std::string sanitized(std::string s) {
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r') {
            ch = ';';
        }
    }
    return s;
}

std::string fixed(double v, int places) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return buf;
}

}  // namespace

ValidationSummary run_validate(const std::vector<CaseSpec>& cases, const SuccessThresholds& th) {
    if (cases.empty()) {
        throw InvalidParameter("nothing to validate: empty case list");
    }
    th.validate();

    ValidationSummary summary;
    summary.thresholds = th;
    summary.cases.resize(cases.size());

    const std::size_t workers = worker_count(cases.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < cases.size(); ++i) {
            summary.cases[i] = run_case(cases[i], th);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cases.size()) {
                        return;
                    }
                    summary.cases[i] = run_case(cases[i], th);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    const std::array<double, 4> limits{th.nadir, th.rocof, th.settling_time,
                                       th.settling_frequency};
    std::size_t n_ok = 0;
    bool all_pass = true;
    for (const auto& r : summary.cases) {
        if (!r.ok) {
            all_pass = false;
            continue;
        }
        ++n_ok;
        all_pass = all_pass && r.report.overall_pass;
        for (std::size_t k = 0; k < 4; ++k) {
            summary.average[k] += r.report.rows[k].mismatch;
        }
    }
    for (std::size_t k = 0; k < 4; ++k) {
        summary.average[k] =
            n_ok > 0 ? summary.average[k] / static_cast<double>(n_ok)
                     : std::numeric_limits<double>::quiet_NaN();
        summary.average_pass[k] = n_ok > 0 && summary.average[k] <= limits[k];
        all_pass = all_pass && summary.average_pass[k];
    }
    summary.overall_pass = all_pass && n_ok == summary.cases.size();
    return summary;
}

std::vector<CaseSpec> cases_from_json(const json& j, const std::string& base_dir) {
    auto resolve = [&](const std::string& p) {
        if (p.empty() || p.front() == '/' || base_dir.empty()) {
            return p;
        }
        return base_dir + "/" + p;
    };
    auto it = j.find("cases");
    if (it == j.end() || !it->is_array() || it->empty()) {
        throw InvalidParameter("cases file must contain a non-empty 'cases' array");
    }
    std::vector<CaseSpec> out;
    for (const auto& jc : *it) {
        CaseSpec c;
        c.name = jc.contains("name") ? jc.at("name").get<std::string>()
                                     : "case" + std::to_string(out.size() + 1);
        if (!jc.contains("grid") || !jc.at("grid").is_string()) {
            throw InvalidParameter(c.name + ": missing 'grid' file");
        }
        c.grid_file = resolve(jc.at("grid").get<std::string>());
        if (!jc.contains("measured") || !jc.at("measured").is_string()) {
            throw InvalidParameter(c.name + ": missing 'measured' file");
        }
        c.measured_file = resolve(jc.at("measured").get<std::string>());
        if (jc.contains("event_time")) {
            c.event_time = jc.at("event_time").get<std::string>();
        }
        if (!jc.contains("trip_mw") || !jc.at("trip_mw").is_number()) {
            throw InvalidParameter(c.name + ": missing 'trip_mw'");
        }
        c.event.trip_mw = jc.at("trip_mw").get<double>();
        if (!(c.event.trip_mw > 0.0)) {
            throw InvalidParameter(c.name + ": trip_mw must be > 0");
        }
        if (!jc.contains("area") || !jc.at("area").is_string()) {
            throw InvalidParameter(c.name + ": missing 'area'");
        }
        c.event.area = jc.at("area").get<std::string>();
        if (jc.contains("t_event")) {
            c.event.t_event = jc.at("t_event").get<double>();
        }
        if (jc.contains("observe")) {
            c.observe = jc.at("observe").get<std::string>();
        }
        if (jc.contains("time_col")) {
            c.ingest.time_col = jc.at("time_col").get<std::string>();
        }
        if (jc.contains("freq_col")) {
            c.ingest.freq_col = jc.at("freq_col").get<std::string>();
        }
        if (jc.contains("rate_hz")) {
            c.ingest.rate_hz = jc.at("rate_hz").get<double>();
        }
        if (jc.contains("metrics")) {
            c.metrics = metrics_config_from_json(jc.at("metrics"));
        }
        if (jc.contains("sim")) {
            const auto& js = jc.at("sim");
            if (js.contains("dt")) {
                c.sim.dt = js.at("dt").get<double>();
            }
            if (js.contains("horizon_s")) {
                c.sim.horizon_s = js.at("horizon_s").get<double>();
            }
            if (js.contains("report_rate_hz")) {
                c.sim.report_rate_hz = js.at("report_rate_hz").get<double>();
            }
        }
        c.sim.validate();
        c.event.validate();
        out.push_back(std::move(c));
    }
    return out;
}

SuccessThresholds thresholds_from_cases_json(const json& j) {
    if (j.contains("thresholds")) {
        return thresholds_from_json(j.at("thresholds"));
    }
    return {};
}

void write_summary_csv(const ValidationSummary& s, std::ostream& os) {
    os << "case,nadir_hz,rocof_mhz_s,settling_time_s,settling_frequency_hz,pass\n";
    for (const auto& r : s.cases) {
        if (!r.ok) {
            os << sanitized(r.name) << ",,,,," << "error: " << sanitized(r.error) << "\n";
            continue;
        }
        os << sanitized(r.name);
        for (std::size_t k = 0; k < 4; ++k) {
            os << ',' << fixed(r.report.rows[k].mismatch, kReportDecimals[k]);
        }
        os << ',' << (r.report.overall_pass ? "true" : "false") << "\n";
    }
    os << "average";
    bool avg_pass = true;
    for (std::size_t k = 0; k < 4; ++k) {
        os << ',' << fixed(s.average[k], kReportDecimals[k]);
        avg_pass = avg_pass && s.average_pass[k];
    }
    os << ',' << (avg_pass ? "true" : "false") << "\n";
    const std::array<double, 4> limits{s.thresholds.nadir, s.thresholds.rocof,
                                       s.thresholds.settling_time,
                                       s.thresholds.settling_frequency};
    os << "success_value";
    for (std::size_t k = 0; k < 4; ++k) {
        os << ',' << fixed(limits[k], kReportDecimals[k]);
    }
    os << ",\n";
}

void write_summary_csv(const ValidationSummary& s, const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_summary_csv(s, os);
    if (!os) {
        throw IoError("write failed for '" + path + "'");
    }
}

void emit_plotdata(const FrequencyTrace* measured, const FrequencyTrace& simulated,
                   const std::string& out_path, std::size_t mcol, std::size_t scol) {
    if (!simulated.event_time_s) {
        throw MetricsError("plotdata: simulated trace has no event annotation");
    }
    std::ofstream os(out_path);
    if (!os) {
        throw IoError("cannot open '" + out_path + "' for writing");
    }
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        os << buf;
    };

    if (measured == nullptr) {
        os << "time_s,freq_simulated\n";
        const auto& col = simulated.columns.at(scol);
        for (std::size_t i = 0; i < simulated.size(); ++i) {
            put(simulated.time(i) - *simulated.event_time_s);
            os << ',';
            put(col[i]);
            os << '\n';
        }
        if (!os) {
            throw IoError("write failed for '" + out_path + "'");
        }
        return;
    }

    if (!measured->event_time_s) {
        throw MetricsError("plotdata: measured trace has no event annotation");
    }
    // Event-relative spans; rows live on the coarser trace's sample grid.
    const FrequencyTrace& coarse = measured->dt >= simulated.dt ? *measured : simulated;
    const double m0 = *measured->event_time_s;
    const double s0 = *simulated.event_time_s;
    const double lo = std::max(measured->start_s - m0, simulated.start_s - s0);
    const double hi = std::min(measured->end_s() - m0, simulated.end_s() - s0);
    if (!(hi > lo)) {
        throw MetricsError("plotdata: traces do not overlap in event-relative time");
    }

    auto value_at = [](const FrequencyTrace& tr, std::size_t col, double t_rel, double t0) {
        const double pos = (t_rel + t0 - tr.start_s) / tr.dt;
        const auto& v = tr.columns.at(col);
        const double clamped = std::min(std::max(pos, 0.0), static_cast<double>(v.size() - 1));
        const std::size_t i = static_cast<std::size_t>(clamped);
        if (i + 1 >= v.size()) {
            return v.back();
        }
        const double w = clamped - static_cast<double>(i);
        return v[i] + w * (v[i + 1] - v[i]);
    };

    os << "time_s,freq_measured,freq_simulated\n";
    const double c0 = *coarse.event_time_s;
    const std::size_t first =
        static_cast<std::size_t>(std::ceil((lo + c0 - coarse.start_s) / coarse.dt - 1e-9));
    for (std::size_t i = first; i < coarse.size(); ++i) {
        const double t_rel = coarse.time(i) - c0;
        if (t_rel > hi + 1e-9) {
            break;
        }
        put(t_rel);
        os << ',';
        put(value_at(*measured, mcol, t_rel, m0));
        os << ',';
        put(value_at(simulated, scol, t_rel, s0));
        os << '\n';
    }
    if (!os) {
        throw IoError("write failed for '" + out_path + "'");
    }
}

}  // namespace gridfreq
