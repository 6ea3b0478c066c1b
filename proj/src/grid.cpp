#include "gridfreq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace gridfreq {
namespace {

void req(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

}  // namespace

void GridModel::validate() const {
    req(std::isfinite(sbase) && sbase > 0.0, "grid: system base must be > 0");
    req(std::isfinite(f0) && f0 > 0.0, "grid: nominal frequency must be > 0");
    req(!areas.empty(), "grid: at least one area required");
    req(!machines.empty(), "grid: at least one machine required");

    std::set<std::string> area_ids;
    for (const auto& a : areas) {
        req(!a.id.empty(), "grid: area id must be non-empty");
        req(area_ids.insert(a.id).second, "grid: duplicate area id '" + a.id + "'");
        req(std::isfinite(a.D) && a.D >= 0.0, "grid: area damping must be >= 0");
    }

    std::set<std::string> machine_ids;
    for (const auto& m : machines) {
        req(!m.id.empty(), "grid: machine id must be non-empty");
        req(machine_ids.insert(m.id).second, "grid: duplicate machine id '" + m.id + "'");
        req(area_ids.count(m.area) > 0, "grid: machine '" + m.id + "' references unknown area");
        req(std::isfinite(m.mva) && m.mva > 0.0, "grid: machine mva must be > 0");
        req(std::isfinite(m.H) && m.H > 0.0, "grid: machine H must be > 0");
        req(m.pmech0 >= 0.0 && m.pmech0 <= 1.2, "grid: pmech0 must be in [0, 1.2]");
        if (m.governor) governor_validate(*m.governor);
    }

    // Tie graph must connect every area (union-find).
    std::map<std::string, std::string> parent;
    for (const auto& a : areas) parent[a.id] = a.id;
    auto find = [&](std::string x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    for (const auto& t : ties) {
        req(area_ids.count(t.area_a) > 0 && area_ids.count(t.area_b) > 0,
            "grid: tie references unknown area");
        req(t.area_a != t.area_b, "grid: self-tie on area '" + t.area_a + "'");
        req(std::isfinite(t.coeff) && t.coeff > 0.0, "grid: tie coefficient must be > 0");
        parent[find(t.area_a)] = find(t.area_b);
    }
    const std::string root = find(areas.front().id);
    for (const auto& a : areas)
        req(find(a.id) == root, "grid: tie graph does not connect all areas");

    req(knobs.governor_ratio >= 0.0 && knobs.governor_ratio <= 1.0,
        "grid: governor_ratio must be in [0, 1]");
    req(knobs.inertia_scale > 0.0 && knobs.inertia_scale <= 10.0,
        "grid: inertia_scale must be in (0, 10]");
    if (knobs.deadband_hz)
        req(std::isfinite(*knobs.deadband_hz) && *knobs.deadband_hz >= 0.0,
            "grid: deadband override must be >= 0");
}

void EventSpec::validate() const {
    req(std::isfinite(t_event) && t_event >= 0.0, "event: t_event must be >= 0");
    req(std::isfinite(trip_mw) && trip_mw >= 0.0, "event: trip_mw must be >= 0");
}

namespace {

// Scale a governor's steady-state gain by rho (aggregate knob mode).  rho = 0
// is handled by the caller (governor disabled outright).
void scale_gain(GovernorModel& g, double rho) {
    struct V {
        double rho;
        void operator()(Tgov1Params& p) const { p.R /= rho; }
        void operator()(GastParams& p) const { p.R /= rho; }
        void operator()(IeesgoParams& p) const { p.K1 *= rho; }
        void operator()(Ieeeg1Params& p) const { p.K *= rho; }
        void operator()(Wsieg1Params& p) const { p.K *= rho; }
    };
    std::visit(V{rho}, g);
}

}  // namespace

GridModel apply_knobs(const GridModel& grid) {
    grid.validate();
    GridModel out = grid;

    for (auto& m : out.machines) m.H *= out.knobs.inertia_scale;

    if (out.knobs.deadband_hz) {
        for (auto& m : out.machines) {
            if (!m.governor) continue;
            if (auto* w = std::get_if<Wsieg1Params>(&*m.governor)) {
                const auto shape = w->db.shape;
                w->db = DeadbandSpec::from_hz(*out.knobs.deadband_hz, out.f0, shape);
            }
        }
    }

    const double rho = out.knobs.governor_ratio;
    if (out.aggregate) {
        for (auto& m : out.machines) {
            if (!m.governor || !m.governor_enabled) continue;
            if (rho <= 0.0)
                m.governor_enabled = false;
            else
                scale_gain(*m.governor, rho);
        }
    } else if (rho < 1.0) {
        std::vector<MachineSpec*> governed;
        double total = 0.0;
        for (auto& m : out.machines) {
            if (m.governor && m.governor_enabled) {
                governed.push_back(&m);
                total += m.mva;
            }
        }
        std::sort(governed.begin(), governed.end(), [](const MachineSpec* a, const MachineSpec* b) {
            if (a->mva != b->mva) return a->mva < b->mva;
            return a->id < b->id;
        });
        double enabled = total;
        // Largest units drop out first until the governed fraction fits.
        for (auto it = governed.rbegin(); it != governed.rend() && enabled > rho * total; ++it) {
            (*it)->governor_enabled = false;
            enabled -= (*it)->mva;
        }
    }

    out.knobs = GridKnobs{};
    return out;
}

}  // namespace gridfreq
