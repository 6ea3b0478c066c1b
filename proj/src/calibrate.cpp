#include "gridfreq/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridfreq/neldermead.hpp"

namespace gridfreq {
namespace {

void req(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

std::size_t observe_col(const FrequencyTrace& tr, const std::string& label) {
    if (label.empty()) return 0;
    for (std::size_t j = 0; j < tr.labels.size(); ++j)
        if (tr.labels[j] == label) return j;
    throw InvalidParameter("calibrate: no observation column '" + label + "'");
}

GridModel with_knobs(const GridModel& grid, const KnobVector& k) {
    GridModel g = grid;
    g.knobs.governor_ratio = k.governor_ratio;
    g.knobs.inertia_scale = k.inertia_scale;
    g.knobs.deadband_hz = k.deadband_hz;
    return g;
}

struct Scored {
    ResponseMetrics metrics;
    bool settled = false;
    double objective = 0.0;
};

Scored score_knobs(const KnobVector& k, const GridModel& grid, const EventSpec& event,
                   const ResponseMetrics& target, const SuccessThresholds& th,
                   const CalibrateOptions& opt) {
    const FrequencyTrace tr = simulate(with_knobs(grid, k), event, opt.sim);
    const std::size_t col = observe_col(tr, opt.observe_label);
    auto [m, settled] = detail::extract_metrics_partial(tr, event.t_event, opt.metrics, col);

    Scored s;
    s.metrics = m;
    s.settled = settled;
    auto sq = [](double v) { return v * v; };
    s.objective = sq((m.nadir - target.nadir) / th.nadir) +
                  sq((m.rocof - target.rocof) / th.rocof) +
                  sq((m.settling_frequency - target.settling_frequency) / th.settling_frequency);
    if (settled)
        s.objective += sq((m.settling_time - target.settling_time) / th.settling_time);
    else
        s.objective += opt.settle_penalty;
    return s;
}

bool all_pass(const Scored& s, const ResponseMetrics& target, const SuccessThresholds& th) {
    return s.settled && score(target, s.metrics, th).overall_pass;
}

}  // namespace

void KnobVector::validate() const {
    const auto v = as_array();
    const auto l = lo();
    const auto h = hi();
    for (std::size_t i = 0; i < 3; ++i)
        req(std::isfinite(v[i]) && v[i] >= l[i] && v[i] <= h[i], "knobs out of bounds");
}

double objective(const KnobVector& knobs, const GridModel& grid, const EventSpec& event,
                 const ResponseMetrics& target, const SuccessThresholds& th,
                 const CalibrateOptions& opt) {
    knobs.validate();
    th.validate();
    return score_knobs(knobs, grid, event, target, th, opt).objective;
}

CalibrationResult calibrate(const GridModel& grid, const EventSpec& event,
                            const ResponseMetrics& target, const SuccessThresholds& th,
                            const CalibrateOptions& opt) {
    th.validate();
    req(opt.max_iters > 0, "calibrate: max_iters must be > 0");

    const std::vector<KnobVector> seeds = {
        {1.0, 0.0, 1.0},
        {0.5, 0.036, 1.0},
        {0.8, 0.036, 1.2},
    };
    const auto lo_a = KnobVector::lo();
    const auto hi_a = KnobVector::hi();
    const std::vector<double> lo(lo_a.begin(), lo_a.end());
    const std::vector<double> hi(hi_a.begin(), hi_a.end());

    auto f = [&](std::span<const double> v) {
        return score_knobs(KnobVector::from_array(v), grid, event, target, th, opt).objective;
    };
    auto passes = [&](std::span<const double> v, double) {
        return all_pass(score_knobs(KnobVector::from_array(v), grid, event, target, th, opt),
                        target, th);
    };

    CalibrationResult res;
    double best_f = std::numeric_limits<double>::infinity();
    NmOptions nm;
    nm.max_iters = std::max(1, opt.max_iters / int(seeds.size()));
    for (const auto& seed : seeds) {
        const auto sa = seed.as_array();
        NmResult r = nelder_mead(f, {sa.begin(), sa.end()}, lo, hi, nm, passes);
        res.iterations += std::max(r.iterations, 1);
        for (double h : r.history)  // best-ever view keeps the history monotone
            res.history.push_back(std::min(best_f, h));
        if (r.fx < best_f) {
            best_f = r.fx;
            res.best = KnobVector::from_array(r.x);
        }
        if (r.stopped_early) break;
    }

    const Scored final_s = score_knobs(res.best, grid, event, target, th, opt);
    res.report = score(target, final_s.metrics, th);
    res.converged = final_s.settled && res.report.overall_pass;
    return res;
}

std::vector<SensitivityRow> sensitivity(const GridModel& grid, const EventSpec& event,
                                        const KnobVector& knobs, const KnobVector& deltas,
                                        const CalibrateOptions& opt) {
    knobs.validate();
    const auto x = knobs.as_array();
    const auto d = deltas.as_array();
    const char* names[3] = {"governor_ratio", "deadband_hz", "inertia_scale"};

    std::vector<SensitivityRow> rows;
    for (std::size_t i = 0; i < 3; ++i) {
        auto xp = x, xm = x;
        xp[i] += d[i];
        xm[i] -= d[i];
        const KnobVector kp = KnobVector::from_array(xp);
        const KnobVector km = KnobVector::from_array(xm);
        kp.validate();  // bound violations are the caller's error
        km.validate();

        auto eval = [&](const KnobVector& k) {
            const FrequencyTrace tr = simulate(with_knobs(grid, k), event, opt.sim);
            return detail::extract_metrics_partial(tr, event.t_event, opt.metrics,
                                                   observe_col(tr, opt.observe_label));
        };
        const auto [mp, sp] = eval(kp);
        const auto [mm, sm] = eval(km);

        SensitivityRow row;
        row.knob = names[i];
        row.dmetric[0] = mp.nadir - mm.nadir;
        row.dmetric[1] = mp.rocof - mm.rocof;
        row.dmetric[2] = (sp && sm) ? mp.settling_time - mm.settling_time
                                    : std::numeric_limits<double>::quiet_NaN();
        row.dmetric[3] = mp.settling_frequency - mm.settling_frequency;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace gridfreq
