#pragma once

#include <algorithm>
#include <cmath>

#include "fringe/estimators.hpp"

namespace fringe::detail {

inline double clamp_unit(double x, long& clamp_count) {
    if (x < -1.0) { ++clamp_count; return -1.0; }
    if (x > 1.0) { ++clamp_count; return 1.0; }
    return x;
}

inline double safe_acos(double x, long& clamp_count) {
    return std::acos(clamp_unit(x, clamp_count));
}

inline double safe_asin(double x, long& clamp_count) {
    return std::asin(clamp_unit(x, clamp_count));
}

/// Folds an angle into the [0, pi] magnitude convention shared by all
/// estimators: two normalized frames fix the step only up to sign.
inline double fold_magnitude(double delta) {
    return std::fabs(wrap(delta));
}

inline void check_pair(const NormalizedPair& pair) {
    if (!pair.n1.same_dims(pair.n2))
        throw ConfigError("estimator: frame dimensions differ");
}

inline const AnalyticMaps& require_analytic(const NormalizedPair& pair,
                                            const char* method) {
    if (!pair.analytic)
        throw ConfigError(std::string(method) +
                          ": analytic phase maps absent (use a GFB-style normalizer)");
    return *pair.analytic;
}

inline void flag_if_degenerate(StepEstimate& e) {
    if (e.delta < kDegenerateStepThreshold || e.delta > kPi - kDegenerateStepThreshold)
        e.diagnostics.degenerate = true;
}

}  // namespace fringe::detail
