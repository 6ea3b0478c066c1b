#pragma once

// Turbine-governor models as continuous-time state machines.  Each model
// provides an equilibrium initializer, a derivative function with the rate
// and non-windup position limiters folded in, an output map, and a post-step
// state projection.  Integration is left to the caller (standalone stepping
// uses governor_step; the swing simulator folds the states into its own
// integration loop).
//
// All signals are per-unit on the machine base.  Speed deviation enters as
// domega = (w - w0)/w0; a positive deviation closes the valve.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gridfreq/deadband.hpp"
#include "gridfreq/errors.hpp"

namespace gridfreq {

// Droop governor with a single valve lag and a lead-lag reheater stage.
// The load reference is held in power units, so the valve target is
// ref - domega/R.
//
//                       1          1 + s T2
//   (ref - domega/R)--> ------ --> ---------- --(- Dt*domega)--> pmech
//                       1+s T1      1 + s T3
struct Tgov1Params {
    double R = 0.05;    // droop, pu
    double T1 = 0.5;    // valve servo lag, s
    double T2 = 1.0;    // lead, s
    double T3 = 3.0;    // reheater lag, s
    double Dt = 0.0;    // turbine damping, pu
    double Vmax = 1.0;  // valve position limits, pu
    double Vmin = 0.0;

    void validate() const;
};

// Gas turbine with droop feedback, two fuel lags, and a low-value gate
// against the temperature-limit path (AT, KT, T3).
struct GastParams {
    double R = 0.05;    // droop, pu
    double T1 = 0.4;    // fuel valve lag, s
    double T2 = 0.1;    // fuel system lag, s
    double T3 = 3.0;    // load limiter lag, s
    double AT = 1.0;    // ambient load limit, pu
    double KT = 2.0;    // temperature loop gain, pu
    double Vmax = 1.0;  // fuel valve limits, pu
    double Vmin = 0.0;
    double Dturb = 0.0; // turbine damping, pu

    void validate() const;
};

// General-purpose governor: K1 (1+s T2)/((1+s T1)(1+s T3)) controller, a
// position-limited 1/(1+s T4) turbine, and K2/K3 output branches through
// the T5/T6 lags.
struct IeesgoParams {
    double K1 = 20.0;  // controller gain, pu
    double K2 = 0.0;   // first branch fraction, pu
    double K3 = 0.0;   // second branch fraction, pu
    double T1 = 0.05;  // controller lags/lead, s
    double T2 = 0.0;
    double T3 = 0.1;
    double T4 = 0.3;   // turbine lag, s
    double T5 = 8.0;   // branch lags, s
    double T6 = 0.4;
    double Pmax = 1.0;
    double Pmin = 0.0;

    void validate() const;
};

// Steam turbine-governor: gain + lead-lag controller, rate-limited servo
// integrator with non-windup position limits, and a four-stage turbine with
// per-stage output fractions K1/K3/K5/K7 (K2/K4/K6/K8 feed a second shaft
// and must be zero here).
struct Ieeeg1Params {
    double K = 20.0;    // gain, = 1/droop
    double T1 = 0.0;    // controller lag, s
    double T2 = 0.0;    // controller lead, s
    double T3 = 0.4;    // servo integrator, s
    double Uo = 0.1;    // valve open rate limit, pu/s
    double Uc = -0.1;   // valve close rate limit, pu/s
    double Pmax = 1.0;  // valve position limits, pu
    double Pmin = 0.0;
    double T4 = 0.3;    // turbine stage lags, s
    double T5 = 8.0;
    double T6 = 0.4;
    double T7 = 0.0;
    double K1 = 0.3;    // stage fractions, pu
    double K2 = 0.0;
    double K3 = 0.4;
    double K4 = 0.0;
    double K5 = 0.3;
    double K6 = 0.0;
    double K7 = 0.0;
    double K8 = 0.0;

    void validate() const;
};

// IEEEG1 structure plus a deadband on the speed input and an optional
// piecewise-linear valve-position (GV -> PGV) curve, identity by default.
struct Wsieg1Params {
    double K = 20.0;
    double T1 = 0.0;
    double T2 = 0.0;
    double T3 = 0.4;
    double Uo = 0.1;
    double Uc = -0.1;
    double Pmax = 1.0;
    double Pmin = 0.0;
    double T4 = 0.3;
    double T5 = 8.0;
    double T6 = 0.4;
    double T7 = 0.0;
    double K1 = 0.3;
    double K2 = 0.0;
    double K3 = 0.4;
    double K4 = 0.0;
    double K5 = 0.3;
    double K6 = 0.0;
    double K7 = 0.0;
    double K8 = 0.0;
    DeadbandSpec db;
    std::vector<std::array<double, 2>> gv_curve;  // empty = identity

    void validate() const;
};

using GovernorModel =
    std::variant<Tgov1Params, GastParams, IeesgoParams, Ieeeg1Params, Wsieg1Params>;

enum class GovKind { Tgov1, Gast, Ieesgo, Ieeeg1, Wsieg1 };

GovKind governor_kind(const GovernorModel& m);
std::string_view governor_kind_name(const GovernorModel& m);

// Continuous state plus latched limiter flags.  The last slot always holds
// the load reference computed at initialization; its derivative is zero.
struct GovernorState {
    std::vector<double> x;
    bool at_upper = false;
    bool at_lower = false;
    bool rate_limited = false;
};

std::size_t governor_state_size(const GovernorModel& m);

void governor_validate(const GovernorModel& m);

// Equilibrium for zero speed deviation and output pmech0.  Throws
// InfeasibleInit when pmech0 cannot be held within the model's limits.
GovernorState governor_init(const GovernorModel& m, double pmech0);

// Time derivative of the state.  Rate limits and non-windup gating are
// evaluated inside; dx.size() must equal x.size().
void governor_derivatives(const GovernorModel& m, std::span<const double> x, double domega,
                          std::span<double> dx);

// Mechanical power for the given state and speed deviation.
double governor_output(const GovernorModel& m, std::span<const double> x, double domega);

// Clamp position-limited states back inside their limits and refresh the
// limiter flags.  Call after each integration step.
void governor_apply_limits(const GovernorModel& m, GovernorState& s, double domega);

// One classical RK4 step with domega held constant.  Throws NumericError on
// non-finite inputs.
std::pair<GovernorState, double> governor_step(const GovernorModel& m, const GovernorState& s,
                                               double domega, double dt);

}  // namespace gridfreq
