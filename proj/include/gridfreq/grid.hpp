#pragma once

// Interconnection description: machines with optional governors grouped into
// areas, linearized tie lines between areas, and the three tuning knobs
// (governor ratio, deadband override, inertia scale) that calibration moves.

#include <optional>
#include <string>
#include <vector>

#include "gridfreq/governors.hpp"

namespace gridfreq {

struct MachineSpec {
    std::string id;
    double mva = 0.0;     // machine MVA rating
    double H = 0.0;       // inertia constant, s on machine base
    std::string area;
    std::optional<GovernorModel> governor;
    bool governor_enabled = true;
    double pmech0 = 0.0;  // initial mechanical power, pu on machine base
};

struct AreaSpec {
    std::string id;
    double D = 0.0;       // load damping, pu power per pu frequency on system base
    std::string label;    // observation label; defaults to id
};

struct TieSpec {
    std::string area_a;
    std::string area_b;
    double coeff = 0.0;   // synchronizing coefficient, pu power per radian on system base
};

struct GridKnobs {
    double governor_ratio = 1.0;            // fraction of governed capacity responding
    double inertia_scale = 1.0;             // multiplies every machine H
    std::optional<double> deadband_hz;      // uniform WSIEG1 deadband width override
};

struct GridModel {
    std::string name;
    double sbase = 100.0;  // system base, MVA
    double f0 = 60.0;      // nominal frequency, Hz
    std::vector<MachineSpec> machines;
    std::vector<AreaSpec> areas;
    std::vector<TieSpec> ties;
    GridKnobs knobs;
    bool aggregate = false;  // knob mode: scale the equivalent governor gain by rho
                             // instead of disabling discrete units

    void validate() const;  // throws InvalidParameter
};

struct EventSpec {
    double t_event = 5.0;  // s
    double trip_mw = 0.0;  // generation lost, MW (enters as a load-side step)
    std::string area;

    void validate() const;
};

// Resolve the knobs into a concrete grid: H scaled, deadband widths replaced,
// and governors disabled (or the aggregate gain scaled) until the governed
// capacity fraction is at most rho.  The returned grid has identity knobs.
GridModel apply_knobs(const GridModel& grid);

}  // namespace gridfreq
