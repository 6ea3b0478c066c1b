#include "gridfreq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

namespace gridfreq {
namespace {

constexpr double kIdxEps = 1e-9;

std::size_t ceil_index(const FrequencyTrace& tr, double t) {
    const double p = (t - tr.start_s) / tr.dt;
    const auto i = static_cast<long long>(std::ceil(p - kIdxEps));
    return static_cast<std::size_t>(std::max(0LL, i));
}

std::size_t floor_index(const FrequencyTrace& tr, double t) {
    const double p = (t - tr.start_s) / tr.dt;
    const auto i = static_cast<long long>(std::floor(p + kIdxEps));
    return static_cast<std::size_t>(std::max(0LL, i));
}

void req_cfg(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

}  // namespace

void MetricsConfig::validate() const {
    req_cfg(pre_window_s > 0.0, "metrics: pre-window must be > 0");
    req_cfg(nadir_window_s > 0.0, "metrics: nadir window must be > 0");
    req_cfg(settle_eps_hz > 0.0, "metrics: settling band must be > 0");
    req_cfg(settle_hold_s > 0.0, "metrics: settling hold must be > 0");
    req_cfg(tail_s > 0.0, "metrics: tail window must be > 0");
    if (tail_after_event)
        req_cfg(tail_after_event->first >= 0.0 && tail_after_event->second > tail_after_event->first,
                "metrics: tail window bounds out of order");
    req_cfg(detect_threshold_mhz_s > 0.0, "metrics: detect threshold must be > 0");
    req_cfg(detect_window_s > 0.0, "metrics: detect window must be > 0");
}

void SuccessThresholds::validate() const {
    req_cfg(nadir > 0.0 && rocof > 0.0 && settling_time > 0.0 && settling_frequency > 0.0,
            "thresholds must all be > 0");
}

double detect_event(FrequencyTrace& trace, const MetricsConfig& cfg, std::size_t col) {
    trace.validate();
    cfg.validate();
    if (col >= trace.columns.size()) throw MetricsError("column index out of range");
    const auto& f = trace.columns[col];
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                std::llround(cfg.detect_window_s / trace.dt)));
    if (k >= f.size()) throw MetricsError("detect window exceeds the trace span");

    const double span = double(k) * trace.dt;
    for (std::size_t i = k; i < f.size(); ++i) {
        const double slope_mhz_s = std::abs(f[i] - f[i - k]) / span * 1000.0;
        if (slope_mhz_s >= cfg.detect_threshold_mhz_s) {
            const double t0 = trace.time(i);
            trace.event_time_s = t0;
            return t0;
        }
    }
    throw NoEventDetected("no slope reached the detection threshold");
}

namespace detail {

std::pair<ResponseMetrics, bool> extract_metrics_partial(const FrequencyTrace& trace, double t0,
                                                         const MetricsConfig& cfg,
                                                         std::size_t col) {
    trace.validate();
    cfg.validate();
    if (col >= trace.columns.size()) throw MetricsError("column index out of range");
    const auto& f = trace.columns[col];
    const std::size_t n = f.size();

    // Point A: mean over [t0 - pre, t0).
    const std::size_t a_from = ceil_index(trace, t0 - cfg.pre_window_s);
    const std::size_t a_to = ceil_index(trace, t0);  // exclusive
    if (a_from >= a_to || a_to > n)
        throw MetricsError("pre-event window lies outside the trace");

    ResponseMetrics m;
    m.point_a = std::accumulate(f.begin() + long(a_from), f.begin() + long(a_to), 0.0) /
                double(a_to - a_from);

    // Nadir: first-occurrence minimum over [t0, t0 + window], clipped to the end.
    const std::size_t n_from = ceil_index(trace, t0);
    const std::size_t n_to = std::min(n - 1, floor_index(trace, t0 + cfg.nadir_window_s));
    if (n_from >= n) throw MetricsError("onset lies beyond the trace");
    std::size_t i_min = n_from;
    for (std::size_t i = n_from + 1; i <= n_to; ++i)
        if (f[i] < f[i_min]) i_min = i;
    m.nadir = f[i_min];
    m.t_nadir = trace.time(i_min);

    if (i_min == n_from || m.t_nadir <= t0)
        throw RocofUndefined("frequency minimum coincides with onset");
    m.rocof = std::abs(m.point_a - m.nadir) / (m.t_nadir - t0) * 1000.0;

    // Settling frequency: tail-window mean.
    std::size_t s_from, s_to;
    if (cfg.tail_after_event) {
        s_from = ceil_index(trace, t0 + cfg.tail_after_event->first);
        s_to = std::min(n - 1, floor_index(trace, t0 + cfg.tail_after_event->second));
    } else {
        s_from = ceil_index(trace, trace.end_s() - cfg.tail_s);
        s_to = n - 1;
    }
    if (s_from > s_to || s_from >= n) throw MetricsError("tail window lies outside the trace");
    m.settling_frequency =
        std::accumulate(f.begin() + long(s_from), f.begin() + long(s_to + 1), 0.0) /
        double(s_to - s_from + 1);

    // Settling time: first sample from which the band holds for settle_hold_s
    // (hold window truncated at the trace end).
    const auto hold = static_cast<std::size_t>(std::llround(cfg.settle_hold_s / trace.dt));
    std::vector<std::size_t> bad_prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        bad_prefix[i + 1] =
            bad_prefix[i] + (std::abs(f[i] - m.settling_frequency) > cfg.settle_eps_hz ? 1 : 0);
    bool settled = false;
    for (std::size_t i = n_from; i < n; ++i) {
        const std::size_t j_end = std::min(n - 1, i + hold);
        if (bad_prefix[j_end + 1] - bad_prefix[i] == 0) {
            m.settling_time = trace.time(i) - t0;
            settled = true;
            break;
        }
    }
    return {m, settled};
}

}  // namespace detail

ResponseMetrics extract_metrics(const FrequencyTrace& trace, double t0, const MetricsConfig& cfg,
                                std::size_t col) {
    auto [m, settled] = detail::extract_metrics_partial(trace, t0, cfg, col);
    if (!settled) throw SettlingNotReached("frequency never holds the settling band");
    return m;
}

MismatchReport score(const ResponseMetrics& measured, const ResponseMetrics& simulated,
                     const SuccessThresholds& th) {
    th.validate();
    auto row = [](std::string name, double mv, double sv, double t) {
        MetricMismatch r;
        r.metric = std::move(name);
        r.measured = mv;
        r.simulated = sv;
        r.mismatch = std::abs(mv - sv);
        r.success_value = t;
        r.pass = r.mismatch <= t;
        return r;
    };
    MismatchReport rep;
    rep.rows[0] = row("nadir", measured.nadir, simulated.nadir, th.nadir);
    rep.rows[1] = row("rocof", measured.rocof, simulated.rocof, th.rocof);
    rep.rows[2] = row("settling_time", measured.settling_time, simulated.settling_time,
                      th.settling_time);
    rep.rows[3] = row("settling_frequency", measured.settling_frequency,
                      simulated.settling_frequency, th.settling_frequency);
    rep.overall_pass = rep.rows[0].pass && rep.rows[1].pass && rep.rows[2].pass && rep.rows[3].pass;
    return rep;
}

FrequencyTrace resample(const FrequencyTrace& trace, double new_rate_hz) {
    trace.validate();
    if (!(new_rate_hz > 0.0)) throw InvalidParameter("resample: rate must be > 0");

    const std::size_t n = trace.size();
    const double span = trace.end_s() - trace.start_s;
    const auto n_new = static_cast<std::size_t>(std::floor(span * new_rate_hz + kIdxEps)) + 1;
    if (n_new < 2) throw InvalidParameter("resample: rate too low for the trace span");

    FrequencyTrace out;
    out.dt = 1.0 / new_rate_hz;
    out.start_s = trace.start_s;
    out.labels = trace.labels;
    out.event_time_s = trace.event_time_s;
    out.columns.assign(trace.columns.size(), std::vector<double>(n_new));
    for (std::size_t c = 0; c < trace.columns.size(); ++c) {
        const auto& src = trace.columns[c];
        for (std::size_t k = 0; k < n_new; ++k) {
            const double p = double(k) * out.dt / trace.dt;
            const auto i_near = static_cast<std::size_t>(std::llround(p));
            if (i_near < n && std::abs(p - double(i_near)) < 1e-6) {
                out.columns[c][k] = src[i_near];
                continue;
            }
            const auto i0 = std::min(n - 2, static_cast<std::size_t>(std::floor(p)));
            const double frac = p - double(i0);
            out.columns[c][k] = src[i0] + frac * (src[i0 + 1] - src[i0]);
        }
    }
    out.validate();
    return out;
}

double round_places(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return std::atof(buf);
}

}  // namespace gridfreq
