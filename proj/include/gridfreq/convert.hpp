#pragma once

// Legacy-governor conversion to WSIEG1: exact parameter maps for TGOV1 and
// IEEEG1, response fitting for the rest, plus simulation-based equivalence
// checks that back every conversion with an error norm.

#include <string>
#include <utility>
#include <vector>

#include "gridfreq/governors.hpp"

namespace gridfreq {

enum class ConvertMethod { Analytic, ResponseFit };

struct FitConfig {
    std::vector<double> probes_hz = {-0.2, -0.05, -0.01};  // speed-step probes, Hz-equivalent
    double f0 = 60.0;        // Hz, converts probes to per-unit speed
    double pmech0 = 0.5;     // operating point for probe responses, pu
    double dt = 0.005;       // s
    double horizon_s = 60.0; // s
    double tolerance = 1e-3; // verified = (max abs response error <= tolerance), pu
    int max_iters = 300;     // simplex budget across seeds

    void validate() const;
};

struct ConversionReport {
    std::string source_kind;
    ConvertMethod method = ConvertMethod::Analytic;
    Wsieg1Params result;
    double rms = 0.0;           // pu, over all probes (deadbands and source
    double max_abs = 0.0;       // damping removed for the comparison)
    bool verified = false;
    double dt_to_damping = 0.0; // source turbine damping displaced onto the
                                // owning machine's area load damping, pu
};

// Exact parameter maps.
Wsieg1Params convert_tgov1(const Tgov1Params& p, const DeadbandSpec& db);
Wsieg1Params convert_ieeeg1(const Ieeeg1Params& p, const DeadbandSpec& db);

// Step response of a standalone governor: pmech sampled every dt from t = 0
// (equilibrium at pmech0) under a constant speed deviation applied at t = 0+.
std::vector<double> governor_step_response(const GovernorModel& m, double domega, double pmech0,
                                           double dt, double horizon_s);

// (rms, max_abs) response difference between two models under cfg's probe
// set, both taken exactly as given.
std::pair<double, double> verify_conversion(const GovernorModel& source,
                                            const GovernorModel& converted,
                                            const FitConfig& cfg = {});

// Fit a WSIEG1 to the source's probe responses over {K, T3, T5, K1} with the
// stage-fraction total preserved.  Deadbands are disabled while fitting; db
// is attached to the result afterwards.
ConversionReport convert_by_fit(const GovernorModel& source, const DeadbandSpec& db,
                                const FitConfig& cfg = {});

// Analytic map when one exists (TGOV1, IEEEG1, WSIEG1 re-banding), response
// fit otherwise (GAST, IEESGO).  Always returns a verified-or-not report.
ConversionReport convert_model(const GovernorModel& source, const DeadbandSpec& db,
                               const FitConfig& cfg = {});

}  // namespace gridfreq
