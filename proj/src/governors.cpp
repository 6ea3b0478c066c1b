#include "gridfreq/governors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gridfreq {
namespace {

void req(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

double clampv(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// First-order lag 1/(1 + s T); algebraic passthrough at T = 0.
struct Lag {
    double T;
    double out(double u, double x) const { return T > 0.0 ? x : u; }
    double deriv(double u, double x) const { return T > 0.0 ? (u - x) / T : 0.0; }
};

// (1 + s Tn)/(1 + s Td), canonical state; bypassed (unity) at Td = 0.
struct LeadLag {
    double Tn, Td;
    double out(double u, double x) const {
        if (Td <= 0.0) return u;
        const double a = Tn / Td;
        return a * u + (1.0 - a) * x;
    }
    double deriv(double u, double x) const { return Td > 0.0 ? (u - x) / Td : 0.0; }
};

// Non-windup gate: freeze the derivative when it pushes past a hard limit.
double gate(double x, double dx, double lo, double hi) {
    if (x >= hi && dx > 0.0) return 0.0;
    if (x <= lo && dx < 0.0) return 0.0;
    return dx;
}

using GvCurve = std::vector<std::array<double, 2>>;

double curve_eval(const GvCurve& c, double gv) {
    if (c.empty()) return gv;
    if (gv <= c.front()[0]) return c.front()[1];
    if (gv >= c.back()[0]) return c.back()[1];
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (gv <= c[i][0]) {
            const double t = (gv - c[i - 1][0]) / (c[i][0] - c[i - 1][0]);
            return c[i - 1][1] + t * (c[i][1] - c[i - 1][1]);
        }
    }
    return c.back()[1];
}

double curve_invert(const GvCurve& c, double pgv) {
    if (c.empty()) return pgv;
    if (pgv < c.front()[1] || pgv > c.back()[1])
        throw InfeasibleInit("initial output outside the GV curve range");
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (pgv <= c[i][1]) {
            const double t = (pgv - c[i - 1][1]) / (c[i][1] - c[i - 1][1]);
            return c[i - 1][0] + t * (c[i][0] - c[i - 1][0]);
        }
    }
    return c.back()[0];
}

// IEEEG1 and WSIEG1 share one evaluator; WSIEG1 adds the deadband and the
// optional GV curve.  State layout: [ctl, gv, s4, s5, s6, s7, ref].
struct Ieeeg1View {
    double K, T1, T2, T3, Uo, Uc, Pmax, Pmin;
    double T4, T5, T6, T7, K1, K3, K5, K7;
    const DeadbandSpec* db;    // nullptr = none
    const GvCurve* gv_curve;   // nullptr or empty = identity
};

const GvCurve kNoCurve;

Ieeeg1View view_of(const Ieeeg1Params& p) {
    return {p.K,  p.T1, p.T2, p.T3, p.Uo, p.Uc, p.Pmax, p.Pmin,
            p.T4, p.T5, p.T6, p.T7, p.K1, p.K3, p.K5,   p.K7,
            nullptr, &kNoCurve};
}

Ieeeg1View view_of(const Wsieg1Params& p) {
    return {p.K,  p.T1, p.T2, p.T3, p.Uo, p.Uc, p.Pmax, p.Pmin,
            p.T4, p.T5, p.T6, p.T7, p.K1, p.K3, p.K5,   p.K7,
            &p.db, &p.gv_curve};
}

double ieeeg1_ctl(const Ieeeg1View& v, std::span<const double> x, double domega) {
    double w = domega;
    if (v.db) w = deadband_apply(w, *v.db);
    return LeadLag{v.T2, v.T1}.out(v.K * w, x[0]);
}

void ieeeg1_deriv(const Ieeeg1View& v, std::span<const double> x, double domega,
                  std::span<double> dx) {
    double w = domega;
    if (v.db) w = deadband_apply(w, *v.db);
    const double u = v.K * w;
    const LeadLag ctl{v.T2, v.T1};
    dx[0] = ctl.deriv(u, x[0]);
    const double rate = clampv((x[6] - ctl.out(u, x[0]) - x[1]) / v.T3, v.Uc, v.Uo);
    dx[1] = gate(x[1], rate, v.Pmin, v.Pmax);
    const double pgv = curve_eval(*v.gv_curve, clampv(x[1], v.Pmin, v.Pmax));
    const Lag l4{v.T4}, l5{v.T5}, l6{v.T6}, l7{v.T7};
    const double o4 = l4.out(pgv, x[2]);
    const double o5 = l5.out(o4, x[3]);
    const double o6 = l6.out(o5, x[4]);
    dx[2] = l4.deriv(pgv, x[2]);
    dx[3] = l5.deriv(o4, x[3]);
    dx[4] = l6.deriv(o5, x[4]);
    dx[5] = l7.deriv(o6, x[5]);
    dx[6] = 0.0;
}

double ieeeg1_output(const Ieeeg1View& v, std::span<const double> x) {
    const double pgv = curve_eval(*v.gv_curve, clampv(x[1], v.Pmin, v.Pmax));
    const Lag l4{v.T4}, l5{v.T5}, l6{v.T6}, l7{v.T7};
    const double o4 = l4.out(pgv, x[2]);
    const double o5 = l5.out(o4, x[3]);
    const double o6 = l6.out(o5, x[4]);
    const double o7 = l7.out(o6, x[5]);
    return v.K1 * o4 + v.K3 * o5 + v.K5 * o6 + v.K7 * o7;
}

GovernorState ieeeg1_init(const Ieeeg1View& v, double pmech0) {
    const double ksum = v.K1 + v.K3 + v.K5 + v.K7;
    double pgv0 = 0.0;
    if (ksum > 0.0) {
        pgv0 = pmech0 / ksum;
    } else if (pmech0 != 0.0) {
        throw InfeasibleInit("all stage fractions are zero; cannot hold nonzero output");
    }
    const double gv0 = curve_invert(*v.gv_curve, pgv0);
    if (gv0 < v.Pmin - 1e-12 || gv0 > v.Pmax + 1e-12)
        throw InfeasibleInit("initial valve position outside [Pmin, Pmax]");
    GovernorState s;
    s.x.assign(7, 0.0);
    s.x[1] = clampv(gv0, v.Pmin, v.Pmax);
    s.x[2] = s.x[3] = s.x[4] = s.x[5] = pgv0;
    s.x[6] = s.x[1];
    return s;
}

void ieeeg1_limits(const Ieeeg1View& v, GovernorState& s, double domega) {
    s.x[1] = clampv(s.x[1], v.Pmin, v.Pmax);
    const double raw = (s.x[6] - ieeeg1_ctl(v, s.x, domega) - s.x[1]) / v.T3;
    s.rate_limited = raw > v.Uo || raw < v.Uc;
    s.at_upper = s.x[1] >= v.Pmax && raw > 0.0;
    s.at_lower = s.x[1] <= v.Pmin && raw < 0.0;
}

void check_common(double Pmax, double Pmin) {
    req(std::isfinite(Pmax) && std::isfinite(Pmin), "limits must be finite");
    req(Pmax > Pmin, "Pmax must exceed Pmin");
}

void validate_ieeeg1_core(const Ieeeg1View& v) {
    req(std::isfinite(v.K) && v.K >= 0.0, "K must be >= 0");
    req(v.T1 >= 0.0 && v.T2 >= 0.0, "T1, T2 must be >= 0");
    req(v.T3 > 0.0, "T3 must be > 0");
    req(v.Uo > 0.0, "Uo must be > 0");
    req(v.Uc <= 0.0, "Uc must be <= 0");
    check_common(v.Pmax, v.Pmin);
    req(v.T4 >= 0.0 && v.T5 >= 0.0 && v.T6 >= 0.0 && v.T7 >= 0.0, "T4..T7 must be >= 0");
    req(v.K1 >= 0.0 && v.K3 >= 0.0 && v.K5 >= 0.0 && v.K7 >= 0.0,
        "stage fractions must be >= 0");
    req(v.K1 + v.K3 + v.K5 + v.K7 <= 1.0 + 1e-9, "stage fractions must sum to at most 1");
}

}  // namespace

void Tgov1Params::validate() const {
    req(std::isfinite(R) && R > 0.0, "TGOV1: R must be > 0");
    req(T1 > 0.0, "TGOV1: T1 must be > 0");
    req(T3 > 0.0, "TGOV1: T3 must be > 0");
    req(T2 >= 0.0 && T2 <= T3, "TGOV1: T2 must be in [0, T3]");
    req(Dt >= 0.0, "TGOV1: Dt must be >= 0");
    check_common(Vmax, Vmin);
}

void GastParams::validate() const {
    req(std::isfinite(R) && R > 0.0, "GAST: R must be > 0");
    req(T1 > 0.0 && T2 > 0.0 && T3 > 0.0, "GAST: T1, T2, T3 must be > 0");
    req(AT > 0.0, "GAST: AT must be > 0");
    req(KT >= 0.0, "GAST: KT must be >= 0");
    req(Dturb >= 0.0, "GAST: Dturb must be >= 0");
    check_common(Vmax, Vmin);
}

void IeesgoParams::validate() const {
    req(std::isfinite(K1) && K1 >= 0.0, "IEESGO: K1 must be >= 0");
    req(K2 >= 0.0 && K2 <= 1.0, "IEESGO: K2 must be in [0, 1]");
    req(K3 >= 0.0 && K3 <= 1.0, "IEESGO: K3 must be in [0, 1]");
    req(T1 > 0.0 && T3 > 0.0 && T4 > 0.0, "IEESGO: T1, T3, T4 must be > 0");
    req(T2 >= 0.0 && T5 >= 0.0 && T6 >= 0.0, "IEESGO: T2, T5, T6 must be >= 0");
    check_common(Pmax, Pmin);
}

void Ieeeg1Params::validate() const {
    validate_ieeeg1_core(view_of(*this));
    req(K2 == 0.0 && K4 == 0.0 && K6 == 0.0 && K8 == 0.0,
        "IEEEG1: second-shaft fractions K2/K4/K6/K8 are not supported");
}

void Wsieg1Params::validate() const {
    validate_ieeeg1_core(view_of(*this));
    req(K2 == 0.0 && K4 == 0.0 && K6 == 0.0 && K8 == 0.0,
        "WSIEG1: second-shaft fractions K2/K4/K6/K8 are not supported");
    db.validate();
    if (!gv_curve.empty()) {
        req(gv_curve.size() >= 2, "WSIEG1: GV curve needs at least two points");
        for (std::size_t i = 1; i < gv_curve.size(); ++i) {
            req(gv_curve[i][0] > gv_curve[i - 1][0] && gv_curve[i][1] > gv_curve[i - 1][1],
                "WSIEG1: GV curve must be strictly increasing");
        }
    }
}

GovKind governor_kind(const GovernorModel& m) {
    struct V {
        GovKind operator()(const Tgov1Params&) const { return GovKind::Tgov1; }
        GovKind operator()(const GastParams&) const { return GovKind::Gast; }
        GovKind operator()(const IeesgoParams&) const { return GovKind::Ieesgo; }
        GovKind operator()(const Ieeeg1Params&) const { return GovKind::Ieeeg1; }
        GovKind operator()(const Wsieg1Params&) const { return GovKind::Wsieg1; }
    };
    return std::visit(V{}, m);
}

std::string_view governor_kind_name(const GovernorModel& m) {
    switch (governor_kind(m)) {
        case GovKind::Tgov1: return "TGOV1";
        case GovKind::Gast: return "GAST";
        case GovKind::Ieesgo: return "IEESGO";
        case GovKind::Ieeeg1: return "IEEEG1";
        case GovKind::Wsieg1: return "WSIEG1";
    }
    return "?";
}

std::size_t governor_state_size(const GovernorModel& m) {
    switch (governor_kind(m)) {
        case GovKind::Tgov1: return 3;
        case GovKind::Gast: return 4;
        case GovKind::Ieesgo: return 6;
        case GovKind::Ieeeg1:
        case GovKind::Wsieg1: return 7;
    }
    return 0;
}

void governor_validate(const GovernorModel& m) {
    std::visit([](const auto& p) { p.validate(); }, m);
}

GovernorState governor_init(const GovernorModel& m, double pmech0) {
    governor_validate(m);
    if (!std::isfinite(pmech0)) throw InfeasibleInit("pmech0 must be finite");

    struct V {
        double p0;

        GovernorState operator()(const Tgov1Params& p) const {
            if (p0 < p.Vmin || p0 > p.Vmax)
                throw InfeasibleInit("TGOV1: pmech0 outside valve limits");
            GovernorState s;
            s.x = {p0, p0, p0};
            return s;
        }

        GovernorState operator()(const GastParams& p) const {
            if (p0 < p.Vmin || p0 > p.Vmax)
                throw InfeasibleInit("GAST: pmech0 outside valve limits");
            if (p0 > p.AT)
                throw InfeasibleInit("GAST: pmech0 above the ambient temperature limit");
            GovernorState s;
            s.x = {p0, p0, p0, p0};
            return s;
        }

        GovernorState operator()(const IeesgoParams& p) const {
            if (p0 < p.Pmin || p0 > p.Pmax)
                throw InfeasibleInit("IEESGO: pmech0 outside [Pmin, Pmax]");
            GovernorState s;
            s.x = {0.0, 0.0, p0, p0, p0, p0};
            return s;
        }

        GovernorState operator()(const Ieeeg1Params& p) const {
            return ieeeg1_init(view_of(p), p0);
        }

        GovernorState operator()(const Wsieg1Params& p) const {
            return ieeeg1_init(view_of(p), p0);
        }
    };
    return std::visit(V{pmech0}, m);
}

void governor_derivatives(const GovernorModel& m, std::span<const double> x, double domega,
                          std::span<double> dx) {
    if (x.size() != governor_state_size(m) || dx.size() != x.size())
        throw InvalidParameter("governor_derivatives: state size mismatch");

    struct V {
        std::span<const double> x;
        double w;
        std::span<double> dx;

        void operator()(const Tgov1Params& p) const {
            const double u = x[2] - w / p.R;
            dx[0] = gate(x[0], (u - x[0]) / p.T1, p.Vmin, p.Vmax);
            const double v = clampv(x[0], p.Vmin, p.Vmax);
            dx[1] = LeadLag{p.T2, p.T3}.deriv(v, x[1]);
            dx[2] = 0.0;
        }

        void operator()(const GastParams& p) const {
            const double lv = std::min(x[3] - w / p.R, p.AT + p.KT * (p.AT - x[2]));
            dx[0] = gate(x[0], (lv - x[0]) / p.T1, p.Vmin, p.Vmax);
            const double v = clampv(x[0], p.Vmin, p.Vmax);
            dx[1] = (v - x[1]) / p.T2;
            dx[2] = (x[1] - x[2]) / p.T3;
            dx[3] = 0.0;
        }

        void operator()(const IeesgoParams& p) const {
            const Lag l1{p.T1};
            const LeadLag ll{p.T2, p.T3};
            const double o1 = l1.out(w, x[0]);
            dx[0] = l1.deriv(w, x[0]);
            const double o2 = ll.out(o1, x[1]);
            dx[1] = ll.deriv(o1, x[1]);
            const double u = clampv(x[5] - p.K1 * o2, p.Pmin, p.Pmax);
            const Lag l4{p.T4}, l5{p.T5}, l6{p.T6};
            const double o3 = l4.out(u, x[2]);
            const double o4 = l5.out(o3, x[3]);
            dx[2] = l4.deriv(u, x[2]);
            dx[3] = l5.deriv(o3, x[3]);
            dx[4] = l6.deriv(o4, x[4]);
            dx[5] = 0.0;
        }

        void operator()(const Ieeeg1Params& p) const { ieeeg1_deriv(view_of(p), x, w, dx); }
        void operator()(const Wsieg1Params& p) const { ieeeg1_deriv(view_of(p), x, w, dx); }
    };
    std::visit(V{x, domega, dx}, m);
}

double governor_output(const GovernorModel& m, std::span<const double> x, double domega) {
    if (x.size() != governor_state_size(m))
        throw InvalidParameter("governor_output: state size mismatch");

    struct V {
        std::span<const double> x;
        double w;

        double operator()(const Tgov1Params& p) const {
            const double v = clampv(x[0], p.Vmin, p.Vmax);
            return LeadLag{p.T2, p.T3}.out(v, x[1]) - p.Dt * w;
        }

        double operator()(const GastParams& p) const { return x[1] - p.Dturb * w; }

        double operator()(const IeesgoParams& p) const {
            const double o1 = Lag{p.T1}.out(w, x[0]);
            const double o2 = LeadLag{p.T2, p.T3}.out(o1, x[1]);
            const double u = clampv(x[5] - p.K1 * o2, p.Pmin, p.Pmax);
            const double o3 = Lag{p.T4}.out(u, x[2]);
            const double o4 = Lag{p.T5}.out(o3, x[3]);
            const double o5 = Lag{p.T6}.out(o4, x[4]);
            return (1.0 - p.K2) * o3 + p.K2 * (1.0 - p.K3) * o4 + p.K2 * p.K3 * o5;
        }

        double operator()(const Ieeeg1Params& p) const { return ieeeg1_output(view_of(p), x); }
        double operator()(const Wsieg1Params& p) const { return ieeeg1_output(view_of(p), x); }
    };
    return std::visit(V{x, domega}, m);
}

void governor_apply_limits(const GovernorModel& m, GovernorState& s, double domega) {
    if (s.x.size() != governor_state_size(m))
        throw InvalidParameter("governor_apply_limits: state size mismatch");

    struct V {
        GovernorState& s;
        double w;

        void operator()(const Tgov1Params& p) const {
            s.x[0] = clampv(s.x[0], p.Vmin, p.Vmax);
            const double u = s.x[2] - w / p.R;
            s.at_upper = s.x[0] >= p.Vmax && u > p.Vmax;
            s.at_lower = s.x[0] <= p.Vmin && u < p.Vmin;
            s.rate_limited = false;
        }

        void operator()(const GastParams& p) const {
            s.x[0] = clampv(s.x[0], p.Vmin, p.Vmax);
            const double lv = std::min(s.x[3] - w / p.R, p.AT + p.KT * (p.AT - s.x[2]));
            s.at_upper = s.x[0] >= p.Vmax && lv > p.Vmax;
            s.at_lower = s.x[0] <= p.Vmin && lv < p.Vmin;
            s.rate_limited = false;
        }

        void operator()(const IeesgoParams& p) const {
            const double o1 = Lag{p.T1}.out(w, s.x[0]);
            const double o2 = LeadLag{p.T2, p.T3}.out(o1, s.x[1]);
            const double u = s.x[5] - p.K1 * o2;
            s.at_upper = u > p.Pmax;
            s.at_lower = u < p.Pmin;
            s.rate_limited = false;
        }

        void operator()(const Ieeeg1Params& p) const { ieeeg1_limits(view_of(p), s, w); }
        void operator()(const Wsieg1Params& p) const { ieeeg1_limits(view_of(p), s, w); }
    };
    std::visit(V{s, domega}, m);
}

std::pair<GovernorState, double> governor_step(const GovernorModel& m, const GovernorState& s,
                                               double domega, double dt) {
    if (!std::isfinite(domega) || !std::isfinite(dt) || dt <= 0.0)
        throw NumericError("governor_step: inputs must be finite and dt > 0");
    const std::size_t n = governor_state_size(m);
    if (s.x.size() != n) throw InvalidParameter("governor_step: state size mismatch");

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    governor_derivatives(m, s.x, domega, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.x[i] + 0.5 * dt * k1[i];
    governor_derivatives(m, tmp, domega, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.x[i] + 0.5 * dt * k2[i];
    governor_derivatives(m, tmp, domega, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.x[i] + dt * k3[i];
    governor_derivatives(m, tmp, domega, k4);

    GovernorState out = s;
    for (std::size_t i = 0; i < n; ++i)
        out.x[i] = s.x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    governor_apply_limits(m, out, domega);

    const double pm = governor_output(m, out.x, domega);
    if (!std::isfinite(pm)) throw NumericError("governor_step: output diverged");
    return {out, pm};
}

}  // namespace gridfreq
