#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fringe/field.hpp"
#include "fringe/normalize.hpp"

namespace fringe {

/// Estimates below 0.05 rad are flagged as degenerate: two frames cannot
/// resolve a vanishing step.
inline constexpr double kDegenerateStepThreshold = 0.05;

struct Diagnostics {
    long iterations = 0;
    long samples_used = 0;
    long clamp_count = 0;               // out-of-domain arccos/arcsin/sqrt arguments
    bool degenerate = false;
    std::vector<double> root_candidates;        // gpsi
    std::array<int, 2> window_origin{-1, -1};   // qpp, (x, y) of window top-left
    std::vector<double> coefficients;           // qpp final state c0..c6
};

/// A phase-step estimate: scalar step in radians, an optional per-pixel step
/// map (interior-cropped), and estimator diagnostics.
struct StepEstimate {
    double delta = 0.0;
    std::optional<RealField> step_map;
    Diagnostics diagnostics;
};

struct IreConfig {
    double kappa = kPi / 10.0;
    int max_iterations = 100;
    double tolerance = 1e-6;
};

// --- the twelve estimators -------------------------------------------------

/// Fourier method: DC disk and one spectral half-plane removed, step map from
/// the angle between the resulting complex fields.
StepEstimate estimate_kreis(const NormalizedPair& pair, int lowcut_radius = 3);

/// Phase-step calibration: arccos of the Pearson correlation of the frames.
StepEstimate estimate_psc(const NormalizedPair& pair);

/// Gram-Schmidt orthonormalization with the ratio-based step formula.
/// Errors out when the frames are parallel (unresolvable step).
StepEstimate estimate_gs(const NormalizedPair& pair);

/// Extreme value of interference: arccos of the frame ratio at strict 3x3
/// extrema of the first frame.
StepEstimate estimate_evi(const NormalizedPair& pair, double extremum_guard = 0.95);

/// Random-points estimation over seeded pixel pairs.
StepEstimate estimate_rp(const NormalizedPair& pair, int n_samples = 10000,
                         uint64_t seed = 1);

/// Iterative robust estimator over the absolute wrapped phase difference of
/// the analytic maps (requires them).
StepEstimate estimate_ire(const NormalizedPair& pair, const IreConfig& cfg = {});

/// Median of the same phase-difference map (requires analytic maps).
StepEstimate estimate_mre(const NormalizedPair& pair);

/// Tilt-shift error method: arccos of the ratio of Gaussian-smoothed products.
StepEstimate estimate_tse(const NormalizedPair& pair, double gauss_sigma = 8.0);

/// Diamond diagonal vectors: step from the norms of the frame sum/difference.
StepEstimate estimate_ddv(const NormalizedPair& pair);

/// Generalized PSI: quadratic in cos(delta) built from frame moments.
StepEstimate estimate_gpsi(const NormalizedPair& pair);

/// Simplified Lissajous ellipse fit (two coefficients), optionally robust.
StepEstimate estimate_slef(const NormalizedPair& pair, bool robust = true,
                           double kappa = 0.5);

/// Full five-coefficient conic fit for imperfectly normalized pairs.
StepEstimate estimate_lef_full(const NormalizedPair& pair);

/// Quadratic phase parameter estimation: extended Kalman filter over a window
/// anchored at a seeded local intensity maximum.
StepEstimate estimate_qpp(const NormalizedPair& pair, int window = 64,
                          uint64_t seed = 1);

/// Per-pixel step map from the cos/sin product form of the Fourier method
/// evaluated on the analytic phases; equals |wrap(psi2 - psi1)| identically.
RealField rk_step_map(const NormalizedPair& pair);

// --- registry ---------------------------------------------------------------

struct EstimatorParams {
    // superset of per-method knobs; each method reads its own subset
    int lowcut_radius = 3;
    double extremum_guard = 0.95;
    int n_samples = 10000;
    IreConfig ire;
    double tse_sigma = 8.0;
    bool slef_robust = true;
    double slef_kappa = 0.5;
    int qpp_window = 64;
    uint64_t seed = 1;
};

/// Ids of the twelve benchmarked estimators, in report order.
const std::vector<std::string>& estimator_ids();

/// True for methods that need the analytic psi/mag maps (ire, mre).
bool estimator_needs_analytic(const std::string& id);

/// Dispatches by id; throws ConfigError for unknown ids and DegenerateInputError
/// when a required analytic map is missing.
StepEstimate run_estimator(const std::string& id, const NormalizedPair& pair,
                           const EstimatorParams& params = {});

}  // namespace fringe
