#pragma once

#include <cmath>

#include "gridfreq/errors.hpp"

namespace gridfreq {

enum class DeadbandShape {
    ContinuousOffset,  // output continuous in the input, shifted toward zero
    Step               // raw pass-through once outside the dead zone
};

// Intentional no-response zone on a governor's per-unit speed-deviation
// input.  The width is stored in per-unit speed; convert to/from a
// frequency width with from_hz()/width_hz() at a given nominal frequency.
struct DeadbandSpec {
    double width = 0.0;  // per-unit speed, >= 0
    DeadbandShape shape = DeadbandShape::ContinuousOffset;

    static DeadbandSpec from_hz(double width_hz, double f0_hz,
                                DeadbandShape shape = DeadbandShape::ContinuousOffset) {
        return DeadbandSpec{width_hz / f0_hz, shape};
    }

    double width_hz(double f0_hz) const { return width * f0_hz; }

    void validate() const {
        if (!(width >= 0.0)) {
            throw InvalidParameter("deadband width must be >= 0");
        }
    }
};

// |x| <= width maps to exactly zero for both shapes.
inline double deadband_apply(double x, const DeadbandSpec& db) {
    const double a = std::abs(x);
    if (a <= db.width) {
        return 0.0;
    }
    if (db.shape == DeadbandShape::Step) {
        return x;
    }
    return x > 0.0 ? a - db.width : db.width - a;
}

}  // namespace gridfreq
