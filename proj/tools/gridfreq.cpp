// gridfreq: frequency-response modeling toolkit.
//
// Exit codes: 0 = success / all pass, 2 = completed with failures,
// 1 = hard error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gridfreq/calibrate.hpp"
#include "gridfreq/convert.hpp"
#include "gridfreq/csv.hpp"
#include "gridfreq/errors.hpp"
#include "gridfreq/ingest.hpp"
#include "gridfreq/json_io.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/simulator.hpp"
#include "gridfreq/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kHardError = 1;
constexpr int kFailures = 2;

std::string dir_of(const std::string& path) {
    const auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string() : path.substr(0, pos);
}

gridfreq::FrequencyTrace load_measured(const std::string& path, std::optional<double> rate_hz) {
    gridfreq::IngestOptions opt;
    opt.rate_hz = rate_hz;
    auto res = gridfreq::ingest_measurement(path, opt);
    if (res.outliers_dropped > 0 || res.rows_skipped > 0 || res.resampled) {
        std::cerr << path << ": " << res.outliers_dropped << " outlier(s) dropped, "
                  << res.rows_skipped << " row(s) skipped"
                  << (res.resampled ? ", resampled to a uniform grid" : "") << "\n";
    }
    return std::move(res.trace);
}

int cmd_simulate(const std::string& grid_file, const std::string& event_file,
                 const std::string& out) {
    const auto grid = gridfreq::grid_from_json(gridfreq::load_json(grid_file));
    const auto event = gridfreq::event_from_json(gridfreq::load_json(event_file));
    const auto trace = gridfreq::simulate(grid, event);
    if (out.empty()) {
        gridfreq::write_trace_csv(trace, std::cout);
    } else {
        gridfreq::write_trace_csv(trace, out);
    }
    return kOk;
}

int cmd_convert(const std::string& in_file, const std::string& method, double deadband_mhz,
                const std::string& out) {
    const auto source = gridfreq::governor_from_json(gridfreq::load_json(in_file), 60.0);
    const auto db = gridfreq::DeadbandSpec::from_hz(deadband_mhz / 1000.0, 60.0);
    gridfreq::ConversionReport report;
    if (method == "analytic") {
        report = gridfreq::convert_model(source, db);
        if (report.method != gridfreq::ConvertMethod::Analytic) {
            throw gridfreq::InvalidParameter(
                "no analytic conversion for " + std::string(gridfreq::governor_kind_name(source)) +
                "; use --method fit");
        }
    } else if (method == "fit") {
        report = gridfreq::convert_by_fit(source, db);
    } else {
        throw gridfreq::InvalidParameter("--method must be 'analytic' or 'fit'");
    }
    gridfreq::save_json(gridfreq::governor_to_json(gridfreq::GovernorModel{report.result}, 60.0),
                        out);
    std::cout << gridfreq::conversion_report_to_json(report, 60.0).dump(2) << "\n";
    return report.verified ? kOk : kFailures;
}

int cmd_metrics(const std::string& trace_file, const std::string& config_file) {
    gridfreq::MetricsConfig cfg;
    if (!config_file.empty()) {
        cfg = gridfreq::metrics_config_from_json(gridfreq::load_json(config_file));
    }
    auto trace = gridfreq::read_trace_csv(trace_file);
    const double t0 =
        trace.event_time_s ? *trace.event_time_s : gridfreq::detect_event(trace, cfg);
    const auto metrics = gridfreq::extract_metrics(trace, t0, cfg);
    auto j = gridfreq::response_metrics_to_json(metrics);
    j["t_event"] = t0;
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_compare(const std::string& measured_file, const std::string& simulated_file) {
    gridfreq::MetricsConfig cfg;
    auto measured = load_measured(measured_file, std::nullopt);
    auto simulated = gridfreq::read_trace_csv(simulated_file);
    const double t0m = gridfreq::detect_event(measured, cfg);
    const double t0s = gridfreq::detect_event(simulated, cfg);
    const auto mm = gridfreq::extract_metrics(measured, t0m, cfg);
    const auto sm = gridfreq::extract_metrics(simulated, t0s, cfg);
    const auto report = gridfreq::score(mm, sm);
    gridfreq::write_report_csv(report, std::cout);
    return report.overall_pass ? kOk : kFailures;
}

int cmd_calibrate(const std::string& grid_file, const std::string& event_file,
                  const std::string& measured_file, int max_iters) {
    const auto grid = gridfreq::grid_from_json(gridfreq::load_json(grid_file));
    const auto event = gridfreq::event_from_json(gridfreq::load_json(event_file));
    gridfreq::CalibrateOptions opt;
    opt.max_iters = max_iters;
    auto measured = load_measured(measured_file, std::nullopt);
    const double t0 = gridfreq::detect_event(measured, opt.metrics);
    const auto target = gridfreq::extract_metrics(measured, t0, opt.metrics);
    const auto result = gridfreq::calibrate(grid, event, target, {}, opt);
    std::cout << gridfreq::calibration_result_to_json(result).dump(2) << "\n";
    return result.converged ? kOk : kFailures;
}

int cmd_validate(const std::string& cases_file, const std::string& out) {
    const auto j = gridfreq::load_json(cases_file);
    const auto cases = gridfreq::cases_from_json(j, dir_of(cases_file));
    const auto th = gridfreq::thresholds_from_cases_json(j);
    const auto summary = gridfreq::run_validate(cases, th);
    if (!out.empty()) {
        gridfreq::write_summary_csv(summary, out);
    }
    gridfreq::write_summary_csv(summary, std::cout);
    for (const auto& c : summary.cases) {
        if (!c.ok) {
            std::cerr << c.name << ": " << c.error << "\n";
        }
    }
    return summary.overall_pass ? kOk : kFailures;
}

int cmd_plotdata(const std::string& measured_file, const std::string& simulated_file,
                 const std::string& out) {
    gridfreq::MetricsConfig cfg;
    auto simulated = gridfreq::read_trace_csv(simulated_file);
    if (!simulated.event_time_s) {
        gridfreq::detect_event(simulated, cfg);
    }
    if (measured_file.empty()) {
        gridfreq::emit_plotdata(nullptr, simulated, out);
        return kOk;
    }
    auto measured = load_measured(measured_file, std::nullopt);
    gridfreq::detect_event(measured, cfg);
    gridfreq::emit_plotdata(&measured, simulated, out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frequency-response modeling toolkit"};
    app.require_subcommand(1);

    std::string grid_file;
    std::string event_file;
    std::string in_file;
    std::string out_file;
    std::string trace_file;
    std::string config_file;
    std::string measured_file;
    std::string simulated_file;
    std::string cases_file;
    std::string method = "analytic";
    double deadband_mhz = 0.0;
    int max_iters = 200;

    auto* sim = app.add_subcommand("simulate", "integrate a grid/event scenario to a trace");
    sim->add_option("--grid", grid_file, "grid JSON")->required();
    sim->add_option("--event", event_file, "event JSON")->required();
    sim->add_option("--out", out_file, "trace CSV path (default stdout)");

    auto* conv = app.add_subcommand("convert", "convert a governor to WSIEG1");
    conv->add_option("--in", in_file, "source governor JSON")->required();
    conv->add_option("--method", method, "analytic|fit");
    conv->add_option("--deadband", deadband_mhz, "deadband width to attach, mHz");
    conv->add_option("--out", out_file, "converted governor JSON")->required();

    auto* met = app.add_subcommand("metrics", "extract response metrics from a trace");
    met->add_option("--trace", trace_file, "trace CSV")->required();
    met->add_option("--config", config_file, "metrics config JSON");

    auto* cmp = app.add_subcommand("compare", "score measured vs simulated traces");
    cmp->add_option("--measured", measured_file, "measured CSV")->required();
    cmp->add_option("--simulated", simulated_file, "simulated trace CSV")->required();

    auto* cal = app.add_subcommand("calibrate", "tune grid knobs against a measurement");
    cal->add_option("--grid", grid_file, "grid JSON")->required();
    cal->add_option("--event", event_file, "event JSON")->required();
    cal->add_option("--measured", measured_file, "measured CSV")->required();
    cal->add_option("--max-iters", max_iters, "optimizer budget");

    auto* val = app.add_subcommand("validate", "run a batch of validation cases");
    val->add_option("--cases", cases_file, "cases JSON")->required();
    val->add_option("--out", out_file, "summary CSV path");

    auto* plot = app.add_subcommand("plotdata", "emit overlay data for plotting");
    plot->add_option("--measured", measured_file, "measured CSV");
    plot->add_option("--simulated", simulated_file, "simulated trace CSV")->required();
    plot->add_option("--out", out_file, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return cmd_simulate(grid_file, event_file, out_file);
        }
        if (conv->parsed()) {
            return cmd_convert(in_file, method, deadband_mhz, out_file);
        }
        if (met->parsed()) {
            return cmd_metrics(trace_file, config_file);
        }
        if (cmp->parsed()) {
            return cmd_compare(measured_file, simulated_file);
        }
        if (cal->parsed()) {
            return cmd_calibrate(grid_file, event_file, measured_file, max_iters);
        }
        if (val->parsed()) {
            return cmd_validate(cases_file, out_file);
        }
        if (plot->parsed()) {
            return cmd_plotdata(measured_file, simulated_file, out_file);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kHardError;
    }
    return kHardError;
}
