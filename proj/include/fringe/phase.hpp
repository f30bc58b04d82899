#pragma once

#include "fringe/field.hpp"
#include "fringe/normalize.hpp"

namespace fringe {

/// Two-step phase reconstruction:
/// phi = atan2(n1*cos(delta) - n2, n1*sin(delta)), wrapped to [-pi, pi).
/// delta must lie strictly inside (0, pi); sin(delta) = 0 is singular.
PhaseMap compute_phase(const NormalizedPair& pair, double delta);

/// Per-pixel wrapped difference W(estimated - truth), range [-pi, pi).
RealField phase_error_map(const PhaseMap& estimated, const PhaseMap& truth);

}  // namespace fringe
