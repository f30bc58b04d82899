#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fringe/field.hpp"
#include "fringe/synth.hpp"

namespace fringe {

/// Gabor filter bank parameters. Orientations are theta_k = k*pi/orientations;
/// each period tau gets an analytic (single-lobe) filter with spatial envelope
/// sigma = envelope_ratio * tau.
struct GfbConfig {
    int orientations = 8;
    std::vector<double> periods = {20.0, 35.0, 45.0, 55.0};
    double envelope_ratio = 0.4;
    double dc_removal_sigma = 32.0;

    void validate() const;
    double max_period() const;
};

struct AnalyticMaps {
    RealField psi1, psi2;  // local phase, wrapped to [-pi, pi)
    RealField mag1, mag2;  // response magnitude, nonnegative
};

/// Two normalized interferograms plus, for the GFB path, per-pixel analytic
/// phase/magnitude maps. border_margin flags the edge band that estimators
/// must exclude from statistics.
struct NormalizedPair {
    RealField n1, n2;
    std::optional<AnalyticMaps> analytic;
    int border_margin = 0;
    long clamped_pixels = 0;  // populated by ingest_normalized

    bool has_analytic() const { return analytic.has_value(); }
};

/// Border band (pixels) excluded from statistics after convolution-based
/// normalization.
inline constexpr int kNormalizeBorderMargin = 8;

/// Gabor-filter-bank normalization: DC suppression, complex filtering in the
/// frequency domain with reflect padding, per-pixel argmax over the bank,
/// n_k = cos(angle of the selected response). Analytic maps always populated.
NormalizedPair gfb_normalize(const FringePair& pair, const GfbConfig& cfg = {});

/// Cheap reference normalizer: Gaussian background subtraction, then division
/// by the local sinusoid amplitude estimated from the smoothed squared signal.
/// Analytic maps absent.
NormalizedPair baseline_normalize(const FringePair& pair, double bg_sigma = 32.0,
                                  double env_sigma = 16.0);

/// Loads a pair normalized by an external tool (PFM files). Values are clamped
/// to [-1.05, 1.05] and the clamp count is reported.
NormalizedPair ingest_normalized(const std::string& path1, const std::string& path2);

/// Exactly-normalized pair from the generator's ground truth: n_k = cos(phi + d_k),
/// psi_k = wrap(phi + d_k), mag_k = 1. Requires ground truth.
NormalizedPair ideal_normalize(const FringePair& pair);

/// Separable Gaussian smoothing with mirrored boundaries.
RealField gaussian_blur(const RealField& f, double sigma);

}  // namespace fringe
