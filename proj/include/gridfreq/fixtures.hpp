#pragma once

// Bundled synthetic grids: a one-machine aggregate sized so a ~1,000 MW trip
// stays in the shallow-excursion regime (nadir around 59.96 Hz), and a small
// two-area system with a mixed governor fleet that produces the deeper-nadir,
// faster-RoCoF regime of a minor interconnection.

#include "gridfreq/grid.hpp"

namespace gridfreq {

GridModel pseudo_ei();
GridModel pseudo_ercot();

EventSpec pseudo_ei_event();     // 1,016 MW trip at t = 5 s
EventSpec pseudo_ercot_event();  // 390 MW trip at t = 5 s

}  // namespace gridfreq
