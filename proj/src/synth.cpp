#include "fringe/synth.hpp"

#include <algorithm>
#include <cmath>

#include "fringe/rng.hpp"

namespace fringe {

namespace {

// seed-derivation tags; one stream per concern so draws never interleave
constexpr uint64_t kTagBlobs = 1;
constexpr uint64_t kTagBackground = 2;
constexpr uint64_t kTagContrast = 3;
constexpr uint64_t kTagNoise = 4;

RealField ramp_phase(double fringes, double orientation, double offset, int h, int w) {
    RealField phi(h, w);
    const double gx = kTwoPi * fringes * std::cos(orientation) / w;
    const double gy = kTwoPi * fringes * std::sin(orientation) / w;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            phi.at(y, x) = offset + gx * x + gy * y;
    return phi;
}

RealField quadratic_phase(const PhaseSpec& s, int h, int w) {
    RealField phi(h, w);
    const double cx = s.center_x * (w - 1);
    const double cy = s.center_y * (h - 1);
    const double R = 0.5 * std::min(h, w);
    const double alpha = s.peak / (R * R);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = x - cx, dy = y - cy;
            phi.at(y, x) = s.offset + alpha * (dx * dx + dy * dy);
        }
    return phi;
}

RealField gaussmix_phase(const PhaseSpec& s, int h, int w, uint64_t seed) {
    CounterRng rng(derive_seed(seed, {kTagBlobs}));
    struct Blob { double cx, cy, sg, amp; };
    Blob blobs[3];
    for (Blob& b : blobs) {
        b.cx = rng.uniform(0.2, 0.8) * w;
        b.cy = rng.uniform(0.2, 0.8) * h;
        b.sg = rng.uniform(0.12, 0.25) * std::min(h, w);
        b.amp = rng.uniform(-1.0, 1.0);
    }
    RealField bumps(h, w);
    double lo = 0.0, hi = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 0.0;
            for (const Blob& b : blobs) {
                const double dx = x - b.cx, dy = y - b.cy;
                v += b.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sg * b.sg));
            }
            bumps.at(y, x) = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double scale = hi > lo ? s.peak_to_valley / (hi - lo) : 0.0;
    RealField phi = ramp_phase(s.carrier_fringes, s.orientation, s.offset, h, w);
    for (size_t i = 0; i < phi.size(); ++i)
        phi[i] += scale * (bumps[i] - lo);
    return phi;
}

// constant plus centered Gaussian bump; amplitude drawn once per frame
RealField smooth_field(const SmoothFieldSpec& s, bool subtract_bump, double floor,
                       int h, int w, uint64_t stream) {
    CounterRng rng(stream);
    const double amp = rng.uniform(s.bump_min, s.bump_max);
    const double cx = 0.5 * (w - 1), cy = 0.5 * (h - 1);
    const double sg = s.bump_sigma_frac * std::min(h, w);
    RealField f(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double bump = amp * std::exp(-(dx * dx + dy * dy) / (2.0 * sg * sg));
            double v = subtract_bump ? s.base - bump : s.base + bump;
            if (subtract_bump && v < floor) v = floor;
            f.at(y, x) = v;
        }
    return f;
}

}  // namespace

void FringeModel::validate() const {
    if (!(delta > 0.0 && delta < kPi))
        throw ConfigError("delta must lie in the open interval (0, pi)");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw ConfigError("noise_sigma must be nonnegative");
    if (contrast_floor < 0.2)
        throw ConfigError("contrast floor below 0.2 violates the model contract");
    if (contrast.base - contrast.bump_max < contrast_floor &&
        contrast.bump_max > 0.0 && contrast_floor <= 0.0)
        throw ConfigError("contrast spec admits nonpositive values");
    if (background.bump_min > background.bump_max ||
        contrast.bump_min > contrast.bump_max)
        throw ConfigError("bump amplitude range is inverted");
    if (phase.fringes <= 0.0 && phase.kind == PhaseKind::LinearRamp)
        throw ConfigError("ramp fringe count must be positive");
}

RealField synth_phase(const PhaseSpec& spec, int height, int width, uint64_t seed) {
    switch (spec.kind) {
        case PhaseKind::LinearRamp:
            return ramp_phase(spec.fringes, spec.orientation, spec.offset, height, width);
        case PhaseKind::Quadratic:
            return quadratic_phase(spec, height, width);
        case PhaseKind::GaussianMix:
            return gaussmix_phase(spec, height, width, seed);
    }
    throw ConfigError("unknown phase kind");
}

FringePair synth_pair(const FringeModel& model, int height, int width) {
    model.validate();
    RealField phi = synth_phase(model.phase, height, width, model.seed);

    FringePair pair;
    const double d[2] = {0.0, model.delta};
    RealField* frames[2];
    pair.i1 = RealField(height, width);
    pair.i2 = RealField(height, width);
    frames[0] = &pair.i1;
    frames[1] = &pair.i2;

    for (int k = 0; k < 2; ++k) {
        RealField a = smooth_field(model.background, false, 0.0, height, width,
                                   derive_seed(model.seed, {kTagBackground, uint64_t(k)}));
        RealField b = smooth_field(model.contrast, true, model.contrast_floor, height,
                                   width,
                                   derive_seed(model.seed, {kTagContrast, uint64_t(k)}));
        RealField& out = *frames[k];
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                out.at(y, x) = a.at(y, x) + b.at(y, x) * std::cos(phi.at(y, x) + d[k]);
    }
    if (model.noise_sigma > 0.0)
        add_noise(pair, model.noise_sigma, model.seed);
    pair.ground_truth = GroundTruth{std::move(phi), model.delta};
    return pair;
}

void add_noise(FringePair& pair, double sigma, uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw ConfigError("add_noise: sigma must be nonnegative");
    if (sigma == 0.0)
        return;
    RealField* frames[2] = {&pair.i1, &pair.i2};
    for (int k = 0; k < 2; ++k) {
        CounterRng noise(derive_seed(seed, {kTagNoise, uint64_t(k)}));
        RealField& f = *frames[k];
        for (size_t i = 0; i < f.size(); ++i)
            f[i] += sigma * noise.gaussian();
    }
}

std::array<double, 6> quadratic_coefficients_at(const PhaseSpec& spec, int height,
                                                int width, double x0, double y0) {
    if (spec.kind != PhaseKind::Quadratic)
        throw ConfigError("quadratic_coefficients_at requires the quadratic generator");
    const double cx = spec.center_x * (width - 1);
    const double cy = spec.center_y * (height - 1);
    const double R = 0.5 * std::min(height, width);
    const double alpha = spec.peak / (R * R);
    const double dx = x0 - cx, dy = y0 - cy;
    return {spec.offset + alpha * (dx * dx + dy * dy),
            2.0 * alpha * dx,
            2.0 * alpha * dy,
            alpha,
            0.0,
            alpha};
}

PhaseKind phase_kind_from_string(const std::string& s) {
    if (s == "ramp" || s == "linear-ramp") return PhaseKind::LinearRamp;
    if (s == "quadratic") return PhaseKind::Quadratic;
    if (s == "gaussmix" || s == "gaussian-mix") return PhaseKind::GaussianMix;
    throw ConfigError("unknown phase kind: " + s);
}

std::string to_string(PhaseKind k) {
    switch (k) {
        case PhaseKind::LinearRamp: return "ramp";
        case PhaseKind::Quadratic: return "quadratic";
        case PhaseKind::GaussianMix: return "gaussmix";
    }
    return "?";
}

}  // namespace fringe
