#include "fringe/phase.hpp"

#include <cmath>

namespace fringe {

PhaseMap compute_phase(const NormalizedPair& pair, double delta) {
    if (!(delta > 0.0 && delta < kPi))
        throw ConfigError("compute_phase: delta must lie in (0, pi); sin(delta)=0 is singular");
    if (!pair.n1.same_dims(pair.n2))
        throw ConfigError("compute_phase: frame dimensions differ");
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    RealField phi(pair.n1.height(), pair.n1.width());
    for (size_t i = 0; i < phi.size(); ++i) {
        // atan2 returns (-pi, pi]; fold the closed boundary into [-pi, pi)
        double v = std::atan2(pair.n1[i] * c - pair.n2[i], pair.n1[i] * s);
        if (v >= kPi) v -= kTwoPi;
        phi[i] = v;
    }
    return PhaseMap{std::move(phi)};
}

RealField phase_error_map(const PhaseMap& estimated, const PhaseMap& truth) {
    if (!estimated.phi.same_dims(truth.phi))
        throw ConfigError("phase_error_map: dimension mismatch");
    RealField out(estimated.phi.height(), estimated.phi.width());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = wrap(estimated.phi[i] - truth.phi[i]);
    return out;
}

}  // namespace fringe
