#include "gridfreq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gridfreq {
namespace {

void req(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

}  // namespace

void SimConfig::validate() const {
    req(std::isfinite(dt) && dt > 0.0, "simcfg: dt must be > 0");
    req(std::isfinite(horizon_s) && horizon_s > dt, "simcfg: horizon must exceed dt");
    req(std::isfinite(report_rate_hz) && report_rate_hz > 0.0,
        "simcfg: report rate must be > 0");
}

SwingSystem::SwingSystem(const GridModel& grid, std::span<const EventSpec> events,
                         const SimConfig& cfg)
    : grid_(apply_knobs(grid)), cfg_(cfg) {
    cfg_.validate();

    areas_.reserve(grid_.areas.size());
    for (const auto& a : grid_.areas)
        areas_.push_back({a.id, a.label.empty() ? a.id : a.label, a.D, 0.0});
    auto area_index = [&](const std::string& id) {
        for (std::size_t i = 0; i < areas_.size(); ++i)
            if (areas_[i].id == id) return i;
        throw InvalidParameter("unknown area '" + id + "'");
    };

    state_size_ = 2 * areas_.size();
    for (const auto& m : grid_.machines) {
        const std::size_t ai = area_index(m.area);
        areas_[ai].h_sys += m.H * m.mva / grid_.sbase;
        if (!m.governor || !m.governor_enabled) continue;
        MachineSlot slot;
        slot.gov = &*m.governor;
        slot.area = ai;
        slot.offset = state_size_;
        slot.nx = governor_state_size(*slot.gov);
        slot.scale = m.mva / grid_.sbase;
        slot.init = governor_init(*slot.gov, m.pmech0);
        slot.pm0 = governor_output(*slot.gov, slot.init.x, 0.0);
        machines_.push_back(std::move(slot));
        state_size_ += machines_.back().nx;
    }

    for (const auto& a : areas_)
        req(a.h_sys > 0.0, "area '" + a.id + "' has zero inertia");

    for (const auto& t : grid_.ties)
        ties_.push_back({area_index(t.area_a), area_index(t.area_b), t.coeff});

    for (const auto& e : events) {
        e.validate();
        req(e.t_event < cfg_.horizon_s, "event at or beyond the simulation horizon");
        events_.push_back({area_index(e.area), e.t_event, e.trip_mw / grid_.sbase});
    }
}

std::vector<double> SwingSystem::initial_state() const {
    std::vector<double> x(state_size_, 0.0);
    for (const auto& m : machines_)
        std::copy(m.init.x.begin(), m.init.x.end(), x.begin() + long(m.offset));
    return x;
}

SwingSystem::AreaPower SwingSystem::area_power(double t, std::span<const double> x,
                                               std::size_t i) const {
    AreaPower ap;
    const std::size_t n = areas_.size();
    for (const auto& m : machines_) {
        if (m.area != i) continue;
        const double pm = governor_output(*m.gov, x.subspan(m.offset, m.nx), x[m.area]);
        ap.dpm += (pm - m.pm0) * m.scale;
    }
    ap.damping = areas_[i].D * x[i];
    for (const auto& tie : ties_) {
        if (tie.a == i) ap.tie += tie.coeff * (x[n + tie.a] - x[n + tie.b]);
        if (tie.b == i) ap.tie += tie.coeff * (x[n + tie.b] - x[n + tie.a]);
    }
    for (const auto& e : events_)
        if (e.area == i && t >= e.t) ap.pevent += e.p;
    return ap;
}

void SwingSystem::derivatives(double t, std::span<const double> x, std::span<double> dx) const {
    const std::size_t n = areas_.size();
    std::fill(dx.begin(), dx.end(), 0.0);

    // Governor dynamics and per-area mechanical power deviation.
    std::vector<double> dpm(n, 0.0);
    for (const auto& m : machines_) {
        const double w = x[m.area];
        governor_derivatives(*m.gov, x.subspan(m.offset, m.nx), w,
                             dx.subspan(m.offset, m.nx));
        const double pm = governor_output(*m.gov, x.subspan(m.offset, m.nx), w);
        dpm[m.area] += (pm - m.pm0) * m.scale;
    }

    // Tie-line exchange (pairwise equal and opposite).
    std::vector<double> tie(n, 0.0);
    for (const auto& s : ties_) {
        const double flow = s.coeff * (x[n + s.a] - x[n + s.b]);
        tie[s.a] += flow;
        tie[s.b] -= flow;
    }

    const double two_pi_f0 = 2.0 * std::numbers::pi * grid_.f0;
    for (std::size_t i = 0; i < n; ++i) {
        double pev = 0.0;
        for (const auto& e : events_)
            if (e.area == i && t >= e.t) pev += e.p;
        dx[i] = (dpm[i] - areas_[i].D * x[i] - tie[i] - pev) / (2.0 * areas_[i].h_sys);
        dx[n + i] = two_pi_f0 * x[i];
    }
}

void SwingSystem::step(double t, std::vector<double>& x) const {
    const std::size_t n = x.size();
    const double dt = cfg_.dt;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    derivatives(t, x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    derivatives(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    derivatives(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    derivatives(t + dt, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    // Project non-windup states back inside their limits.
    GovernorState gs;
    for (const auto& m : machines_) {
        gs.x.assign(x.begin() + long(m.offset), x.begin() + long(m.offset + m.nx));
        governor_apply_limits(*m.gov, gs, x[m.area]);
        std::copy(gs.x.begin(), gs.x.end(), x.begin() + long(m.offset));
    }

    for (double v : x)
        if (!std::isfinite(v)) throw NumericError("simulation state diverged");
}

FrequencyTrace simulate_events(const GridModel& grid, std::span<const EventSpec> events,
                               const SimConfig& cfg) {
    const SwingSystem sys(grid, events, cfg);
    const std::size_t n_areas = sys.n_areas();

    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.horizon_s / cfg.dt - 1e-9));
    const auto stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(1.0 / (cfg.report_rate_hz * cfg.dt))));

    FrequencyTrace trace;
    trace.dt = cfg.dt * double(stride);
    trace.start_s = 0.0;
    if (!events.empty()) {
        double t_first = events[0].t_event;
        for (const auto& e : events) t_first = std::min(t_first, e.t_event);
        trace.event_time_s = t_first;
    }
    trace.labels.reserve(n_areas);
    trace.columns.assign(n_areas, {});
    for (std::size_t i = 0; i < n_areas; ++i) trace.labels.push_back(sys.area_label(i));

    std::vector<double> x = sys.initial_state();
    for (std::size_t i = 0; i < n_areas; ++i)
        trace.columns[i].push_back(grid.f0 * (1.0 + x[i]));
    for (std::size_t k = 0; k < n_steps; ++k) {
        sys.step(double(k) * cfg.dt, x);
        if ((k + 1) % stride == 0) {
            for (std::size_t i = 0; i < n_areas; ++i)
                trace.columns[i].push_back(grid.f0 * (1.0 + x[i]));
        }
    }
    trace.validate();
    return trace;
}

FrequencyTrace simulate(const GridModel& grid, const EventSpec& event, const SimConfig& cfg) {
    return simulate_events(grid, std::span<const EventSpec>{&event, 1}, cfg);
}

TracePair simulate_pair(const GridModel& grid, const EventSpec& event, const SimConfig& cfg) {
    GridModel zero_db = grid;
    for (auto& m : zero_db.machines) {
        if (!m.governor) continue;
        if (auto* w = std::get_if<Wsieg1Params>(&*m.governor)) w->db.width = 0.0;
    }
    zero_db.knobs.deadband_hz.reset();
    TracePair pair;
    pair.with_db = simulate(grid, event, cfg);
    pair.without_db = simulate(zero_db, event, cfg);
    return pair;
}

}  // namespace gridfreq
