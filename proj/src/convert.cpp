#include "gridfreq/convert.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>

#include "gridfreq/neldermead.hpp"

namespace gridfreq {
namespace {

void req(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

// Fitting compares governor dynamics only: turbine damping moves to the
// machine's area at conversion time and deadbands are attached afterwards.
GovernorModel strip_for_compare(GovernorModel m) {
    struct V {
        void operator()(Tgov1Params& p) const { p.Dt = 0.0; }
        void operator()(GastParams& p) const { p.Dturb = 0.0; }
        void operator()(Wsieg1Params& p) const { p.db.width = 0.0; }
        void operator()(IeesgoParams&) const {}
        void operator()(Ieeeg1Params&) const {}
    };
    std::visit(V{}, m);
    return m;
}

double source_damping(const GovernorModel& m) {
    if (const auto* t = std::get_if<Tgov1Params>(&m)) return t->Dt;
    if (const auto* g = std::get_if<GastParams>(&m)) return g->Dturb;
    return 0.0;
}

struct ProbeSet {
    std::vector<double> domegas;  // pu
    double pmech0, dt, horizon_s;
};

ProbeSet probe_set(const FitConfig& cfg) {
    ProbeSet ps;
    for (double hz : cfg.probes_hz) ps.domegas.push_back(hz / cfg.f0);
    ps.pmech0 = cfg.pmech0;
    ps.dt = cfg.dt;
    ps.horizon_s = cfg.horizon_s;
    return ps;
}

std::vector<std::vector<double>> probe_responses(const GovernorModel& m, const ProbeSet& ps) {
    std::vector<std::vector<double>> out;
    out.reserve(ps.domegas.size());
    for (double w : ps.domegas)
        out.push_back(governor_step_response(m, w, ps.pmech0, ps.dt, ps.horizon_s));
    return out;
}

std::pair<double, double> response_error(const std::vector<std::vector<double>>& a,
                                         const std::vector<std::vector<double>>& b) {
    double ss = 0.0, mx = 0.0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        for (std::size_t i = 0; i < a[p].size(); ++i) {
            const double d = a[p][i] - b[p][i];
            ss += d * d;
            mx = std::max(mx, std::abs(d));
            ++n;
        }
    }
    return {n ? std::sqrt(ss / double(n)) : 0.0, mx};
}

}  // namespace

void FitConfig::validate() const {
    req(!probes_hz.empty(), "fit: at least one probe required");
    req(f0 > 0.0, "fit: f0 must be > 0");
    req(dt > 0.0 && horizon_s > dt, "fit: need dt > 0 and horizon > dt");
    req(tolerance > 0.0, "fit: tolerance must be > 0");
    req(max_iters > 0, "fit: max_iters must be > 0");
}

Wsieg1Params convert_tgov1(const Tgov1Params& p, const DeadbandSpec& db) {
    p.validate();
    db.validate();
    Wsieg1Params w;
    w.K = 1.0 / p.R;
    w.T1 = 0.0;
    w.T2 = 0.0;
    w.T3 = p.T1;
    w.Uo = 10.0;
    w.Uc = -10.0;
    w.Pmax = p.Vmax;
    w.Pmin = p.Vmin;
    w.T4 = 0.0;
    w.T5 = p.T3;
    w.T6 = 0.0;
    w.T7 = 0.0;
    w.K1 = p.T2 / p.T3;
    w.K3 = 1.0 - p.T2 / p.T3;
    w.K5 = 0.0;
    w.K7 = 0.0;
    w.db = db;
    w.gv_curve.clear();
    return w;
}

Wsieg1Params convert_ieeeg1(const Ieeeg1Params& p, const DeadbandSpec& db) {
    p.validate();
    db.validate();
    Wsieg1Params w;
    w.K = p.K;
    w.T1 = p.T1;
    w.T2 = p.T2;
    w.T3 = p.T3;
    w.Uo = p.Uo;
    w.Uc = p.Uc;
    w.Pmax = p.Pmax;
    w.Pmin = p.Pmin;
    w.T4 = p.T4;
    w.T5 = p.T5;
    w.T6 = p.T6;
    w.T7 = p.T7;
    w.K1 = p.K1;
    w.K3 = p.K3;
    w.K5 = p.K5;
    w.K7 = p.K7;
    w.db = db;
    w.gv_curve.clear();
    return w;
}

std::vector<double> governor_step_response(const GovernorModel& m, double domega, double pmech0,
                                           double dt, double horizon_s) {
    if (!(dt > 0.0) || !(horizon_s > 0.0))
        throw InvalidParameter("step response: need dt > 0 and horizon > 0");
    GovernorState s = governor_init(m, pmech0);
    const auto n = static_cast<std::size_t>(std::llround(horizon_s / dt));
    std::vector<double> out;
    out.reserve(n + 1);
    out.push_back(governor_output(m, s.x, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        auto [ns, pm] = governor_step(m, s, domega, dt);
        s = std::move(ns);
        out.push_back(pm);
    }
    return out;
}

std::pair<double, double> verify_conversion(const GovernorModel& source,
                                            const GovernorModel& converted,
                                            const FitConfig& cfg) {
    cfg.validate();
    const ProbeSet ps = probe_set(cfg);
    return response_error(probe_responses(source, ps), probe_responses(converted, ps));
}

namespace {

struct FitFamily {
    Wsieg1Params base;   // fixed fields; fit overrides K, T3, T5, K1 (and K3)
    double ksum;         // stage-fraction total to preserve
    std::vector<double> seed;  // (K, T3, T5, K1)

    Wsieg1Params make(std::span<const double> v) const {
        Wsieg1Params w = base;
        w.K = v[0];
        w.T3 = v[1];
        w.T5 = v[2] < 0.002 ? 0.0 : v[2];  // snap: sub-dt lags destabilize RK4
        w.K1 = v[3];
        w.K3 = std::max(0.0, ksum - w.K1 - w.K5 - w.K7);
        return w;
    }
};

FitFamily fit_family(const GovernorModel& source, const ProbeSet& ps) {
    FitFamily f;
    f.base.T1 = 0.0;
    f.base.T2 = 0.0;
    f.base.Uo = 10.0;
    f.base.Uc = -10.0;
    f.base.T4 = 0.0;
    f.base.T6 = 0.0;
    f.base.T7 = 0.0;
    f.base.K5 = 0.0;
    f.base.K7 = 0.0;
    f.base.db = DeadbandSpec{};
    f.ksum = 1.0;

    // Steady-state gain from the smallest probe pins the K seed.
    auto gain_estimate = [&](const GovernorModel& m) {
        const double w = ps.domegas.back();
        const auto r = governor_step_response(m, w, ps.pmech0, ps.dt, ps.horizon_s);
        const double k = (r.back() - r.front()) / -w;
        return std::clamp(k, 0.1, 500.0);
    };

    struct V {
        FitFamily& f;
        const ProbeSet& ps;
        const std::function<double(const GovernorModel&)> gain;

        void operator()(const Tgov1Params& p) const {
            const Wsieg1Params a = convert_tgov1(p, DeadbandSpec{});
            f.base.Pmax = a.Pmax;
            f.base.Pmin = a.Pmin;
            f.seed = {a.K, a.T3, a.T5, a.K1};
        }
        void operator()(const GastParams& p) const {
            f.base.Pmax = p.Vmax;
            f.base.Pmin = p.Vmin;
            f.seed = {gain(GovernorModel{p}), p.T1, p.T2, 0.02};
        }
        void operator()(const IeesgoParams& p) const {
            f.base.Pmax = p.Pmax;
            f.base.Pmin = p.Pmin;
            f.base.T4 = p.T4;  // turbine lag carries over; fit covers the controller
            f.seed = {gain(GovernorModel{p}), p.T1 + p.T3, p.T3 + p.K2 * p.T5, 0.02};
        }
        void operator()(const Ieeeg1Params& p) const {
            f.base = convert_ieeeg1(p, DeadbandSpec{});
            f.ksum = p.K1 + p.K3 + p.K5 + p.K7;
            f.seed = {p.K, p.T3, p.T5, p.K1};
        }
        void operator()(const Wsieg1Params& p) const {
            f.base = p;
            f.base.db = DeadbandSpec{};
            f.ksum = p.K1 + p.K3 + p.K5 + p.K7;
            f.seed = {p.K, p.T3, p.T5, p.K1};
        }
    };
    std::visit(V{f, ps, gain_estimate}, source);
    return f;
}

}  // namespace

ConversionReport convert_by_fit(const GovernorModel& source, const DeadbandSpec& db,
                                const FitConfig& cfg) {
    cfg.validate();
    governor_validate(source);
    db.validate();

    const ProbeSet ps = probe_set(cfg);
    const GovernorModel src = strip_for_compare(source);
    const auto target = probe_responses(src, ps);
    FitFamily fam = fit_family(src, ps);

    auto objective = [&](std::span<const double> v) {
        const GovernorModel cand{fam.make(v)};
        try {
            return response_error(target, probe_responses(cand, ps)).first;
        } catch (const Error&) {
            return 1e6;  // unstable or infeasible candidate
        }
    };

    const double k1_max = std::max(1e-6, fam.ksum - fam.base.K5 - fam.base.K7);
    const std::vector<double> lo = {0.0, 0.02, 0.0, 0.0};
    const std::vector<double> hi = {500.0, 10.0, 30.0, k1_max};
    auto clamp_seed = [&](std::vector<double> s) {
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::clamp(s[i], lo[i], hi[i]);
        return s;
    };
    const std::vector<std::vector<double>> seeds = {
        clamp_seed(fam.seed),
        clamp_seed({fam.seed[0], 0.5, 5.0, 0.3}),
    };

    NmOptions opt;
    opt.max_iters = cfg.max_iters / static_cast<int>(seeds.size());
    opt.ftol = 1e-12;
    auto good_enough = [&](std::span<const double>, double fx) { return fx <= 1e-10; };

    NmResult best;
    best.fx = std::numeric_limits<double>::infinity();
    for (const auto& s : seeds) {
        NmResult r = nelder_mead(objective, s, lo, hi, opt, good_enough);
        if (r.fx < best.fx) best = r;
        if (best.fx <= 1e-10) break;
    }

    ConversionReport rep;
    rep.source_kind = std::string(governor_kind_name(source));
    rep.method = ConvertMethod::ResponseFit;
    rep.result = fam.make(best.x);
    rep.result.db = db;
    rep.dt_to_damping = source_damping(source);
    const GovernorModel fitted = strip_for_compare(GovernorModel{rep.result});
    auto [rms, mx] = response_error(target, probe_responses(fitted, ps));
    rep.rms = rms;
    rep.max_abs = mx;
    rep.verified = mx <= cfg.tolerance;
    return rep;
}

ConversionReport convert_model(const GovernorModel& source, const DeadbandSpec& db,
                               const FitConfig& cfg) {
    const GovKind kind = governor_kind(source);
    if (kind == GovKind::Gast || kind == GovKind::Ieesgo) return convert_by_fit(source, db, cfg);

    cfg.validate();
    db.validate();
    ConversionReport rep;
    rep.source_kind = std::string(governor_kind_name(source));
    rep.method = ConvertMethod::Analytic;
    rep.dt_to_damping = source_damping(source);
    if (const auto* t = std::get_if<Tgov1Params>(&source)) {
        rep.result = convert_tgov1(*t, db);
    } else if (const auto* i = std::get_if<Ieeeg1Params>(&source)) {
        rep.result = convert_ieeeg1(*i, db);
    } else {
        rep.result = std::get<Wsieg1Params>(source);
        rep.result.db = db;
    }

    const ProbeSet ps = probe_set(cfg);
    auto [rms, mx] =
        response_error(probe_responses(strip_for_compare(source), ps),
                       probe_responses(strip_for_compare(GovernorModel{rep.result}), ps));
    rep.rms = rms;
    rep.max_abs = mx;
    rep.verified = mx <= cfg.tolerance;
    return rep;
}

}  // namespace gridfreq
