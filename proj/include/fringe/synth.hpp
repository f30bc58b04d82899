#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "fringe/field.hpp"

namespace fringe {

enum class PhaseKind { LinearRamp, Quadratic, GaussianMix };

/// Phase generator parameters. Units are radians over the field.
struct PhaseSpec {
    PhaseKind kind = PhaseKind::LinearRamp;

    // linear-ramp: fringe count across the width, carrier orientation, offset
    double fringes = 12.0;
    double orientation = 0.3;
    double offset = 0.0;

    // quadratic: peak value at the reference radius min(h,w)/2, fractional center
    double peak = 35.0;
    double center_x = 0.5;
    double center_y = 0.5;

    // gaussian-mix: carrier ramp plus 3 seeded Gaussian blobs scaled to a
    // target peak-to-valley
    double carrier_fringes = 10.0;
    double peak_to_valley = 20.0;
};

/// One smooth low-order field: a constant plus a centered Gaussian bump whose
/// amplitude is drawn per frame from [bump_min, bump_max].
struct SmoothFieldSpec {
    double base = 0.0;
    double bump_min = 0.0;
    double bump_max = 0.0;
    double bump_sigma_frac = 0.35;  // bump sigma as a fraction of min(h, w)
};

/// Generative parameters of the two-frame intensity model
/// I_k = a_k + b_k cos(phi + d_k) + eta_k with d_1 = 0, d_2 = delta.
struct FringeModel {
    PhaseSpec phase;
    SmoothFieldSpec background;                       // a_k
    SmoothFieldSpec contrast{1.0, 0.0, 0.0, 0.35};    // b_k
    double contrast_floor = 0.2;
    double delta = kPi / 3.0;   // in (0, pi)
    double noise_sigma = 0.0;   // additive i.i.d. Gaussian, per pixel per frame
    uint64_t seed = 1;

    void validate() const;
};

struct GroundTruth {
    RealField phi;  // unwrapped phase, radians
    double delta;
};

struct FringePair {
    RealField i1;
    RealField i2;
    std::optional<GroundTruth> ground_truth;
};

/// Evaluates the phase generator alone (no background/contrast/noise).
RealField synth_phase(const PhaseSpec& spec, int height, int width, uint64_t seed);

/// Synthesizes a two-frame pair from the intensity model. Deterministic for a
/// fixed seed; ground truth is always populated.
FringePair synth_pair(const FringeModel& model, int height, int width);

/// Adds i.i.d. Gaussian noise to both frames, independently per frame.
/// synth_pair uses this same stream keyed on the model seed; the benchmark
/// keys it on the cell indices so one pattern can carry fresh noise per cell.
void add_noise(FringePair& pair, double sigma, uint64_t seed);

/// Expands the quadratic generator's phase around (x0, y0) as
/// c0 + c1*dx + c2*dy + c3*dx^2 + c4*dx*dy + c5*dy^2 (exact for quadratic).
std::array<double, 6> quadratic_coefficients_at(const PhaseSpec& spec, int height,
                                                int width, double x0, double y0);

PhaseKind phase_kind_from_string(const std::string& s);
std::string to_string(PhaseKind k);

}  // namespace fringe
