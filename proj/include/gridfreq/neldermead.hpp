#pragma once

// Bounded derivative-free simplex minimizer (Nelder-Mead with box clamping).
// Deterministic: no randomness anywhere, so identical inputs give identical
// iterates.  Used by the response-fit converter and the knob calibrator.

#include <functional>
#include <span>
#include <vector>

namespace gridfreq {

struct NmOptions {
    int max_iters = 200;
    double ftol = 1e-6;       // stop when simplex objective spread falls below
    double init_step = 0.15;  // initial simplex step, fraction of each box extent
};

struct NmResult {
    std::vector<double> x;        // best point found
    double fx = 0.0;              // objective at best point
    int iterations = 0;
    bool stopped_early = false;   // accept callback fired
    std::vector<double> history;  // best objective after each iteration (non-increasing)
};

using NmObjective = std::function<double(std::span<const double>)>;

// `accept` (optional) sees every new best point; returning true stops the
// search immediately with that point.
NmResult nelder_mead(const NmObjective& f, std::vector<double> x0,
                     const std::vector<double>& lo, const std::vector<double>& hi,
                     const NmOptions& opt = {},
                     const std::function<bool(std::span<const double>, double)>& accept = {});

}  // namespace gridfreq
