#pragma once

// Multi-area linearized swing simulator.  Each area carries one lumped
// rotor (system-base inertia = sum of member machine inertias), a load
// damping term, linear tie-line coupling, and the governor fleet of its
// member machines driven by the local speed deviation.

#include <span>
#include <vector>

#include "gridfreq/grid.hpp"
#include "gridfreq/trace.hpp"

namespace gridfreq {

struct SimConfig {
    double dt = 0.005;           // integration step, s
    double horizon_s = 60.0;     // s
    double report_rate_hz = 10;  // trace sampling rate

    void validate() const;
};

// The assembled ODE system.  State layout: [domega per area | delta per
// area | governor states, machine by machine].  Exposed mainly so property
// tests can probe the right-hand side directly.
class SwingSystem {
public:
    SwingSystem(const GridModel& grid, std::span<const EventSpec> events, const SimConfig& cfg);

    // Machine slots point into the owned grid copy.
    SwingSystem(const SwingSystem&) = delete;
    SwingSystem& operator=(const SwingSystem&) = delete;

    std::size_t n_areas() const { return areas_.size(); }
    std::size_t state_size() const { return state_size_; }
    std::vector<double> initial_state() const;

    void derivatives(double t, std::span<const double> x, std::span<double> dx) const;

    // Net power pieces for area i at (t, x), system base; the swing equation
    // reads 2*H*ddomega = dpm - damping - tie - pevent.
    struct AreaPower {
        double dpm = 0.0;
        double damping = 0.0;
        double tie = 0.0;
        double pevent = 0.0;
    };
    AreaPower area_power(double t, std::span<const double> x, std::size_t i) const;

    double h_sys(std::size_t i) const { return areas_[i].h_sys; }
    const std::string& area_label(std::size_t i) const { return areas_[i].label; }

    // One RK4 step from t; clamps non-windup governor states afterwards.
    void step(double t, std::vector<double>& x) const;

    double dt() const { return cfg_.dt; }
    double f0() const { return grid_.f0; }

private:
    struct AreaSlot {
        std::string id;
        std::string label;
        double D = 0.0;
        double h_sys = 0.0;
    };
    struct MachineSlot {
        const GovernorModel* gov = nullptr;
        std::size_t area = 0;
        std::size_t offset = 0;  // into the packed state vector
        std::size_t nx = 0;
        double scale = 0.0;      // mva / sbase
        double pm0 = 0.0;        // output at equilibrium (deviation baseline)
        GovernorState init;
    };
    struct EventSlot {
        std::size_t area = 0;
        double t = 0.0;
        double p = 0.0;  // pu on system base
    };
    struct TieSlot {
        std::size_t a = 0;
        std::size_t b = 0;
        double coeff = 0.0;
    };

    GridModel grid_;  // effective (knobs resolved)
    SimConfig cfg_;
    std::vector<AreaSlot> areas_;
    std::vector<MachineSlot> machines_;
    std::vector<TieSlot> ties_;
    std::vector<EventSlot> events_;
    std::size_t state_size_ = 0;
};

// Apply the grid's knobs, integrate the event, and sample every area's
// frequency at the reporting rate (trace dt snaps to a whole number of
// integration steps).
FrequencyTrace simulate(const GridModel& grid, const EventSpec& event, const SimConfig& cfg = {});

// Several simultaneous or staggered events (used by symmetry tests).
FrequencyTrace simulate_events(const GridModel& grid, std::span<const EventSpec> events,
                               const SimConfig& cfg = {});

// The same event with the grid's deadbands as given and forced to zero.
struct TracePair {
    FrequencyTrace with_db;
    FrequencyTrace without_db;
};
TracePair simulate_pair(const GridModel& grid, const EventSpec& event, const SimConfig& cfg = {});

}  // namespace gridfreq
