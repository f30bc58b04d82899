#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fringe/estimators.hpp"
#include "fringe/normalize.hpp"
#include "fringe/synth.hpp"

namespace fringe {

struct NormalizerSpec {
    std::string id = "gfb";  // ideal | gfb | baseline | ingest
    GfbConfig gfb;
    double baseline_bg_sigma = 32.0;
    double baseline_env_sigma = 16.0;
    // ingest: files found at <dir>/p{pattern}_s{sigma_idx}_d{delta_idx}_{1|2}.pfm
    std::string ingest_dir;

    bool provides_analytic() const { return id == "gfb" || id == "ideal"; }
};

struct EstimatorSpec {
    std::string id;
    EstimatorParams params;
};

/// The evaluation protocol: a pattern set crossed with noise levels, steps,
/// normalizers and estimators. Sweep A varies noise at one step; sweep B
/// varies the step at sigma = 0.5.
struct ExperimentSpec {
    int pattern_count = 10;
    std::vector<double> noise_levels = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> steps = {kPi / 3.0};
    std::vector<NormalizerSpec> normalizers = {NormalizerSpec{}};
    std::vector<EstimatorSpec> estimators;  // empty = all twelve with defaults
    int field_size = 512;
    uint64_t master_seed = 20240101;
    bool record_timing = true;     // false writes 0 in the seconds column
    int threads = 0;               // 0 = hardware concurrency
    bool pairing_strict = false;   // error instead of skipping incompatible cells

    void validate() const;
};

struct BenchRow {
    std::string estimator;
    std::string normalizer;
    int pattern = 0;
    double sigma = 0.0;
    double delta_true = 0.0;
    std::optional<double> delta_est;  // absent on failure
    std::optional<double> abs_error;
    double seconds = 0.0;
    std::string status;  // ok | degenerate_input | estimator_failure | io_error | config_error
};

struct CellAggregate {
    std::string estimator;
    std::string normalizer;
    double sigma = 0.0;
    double delta_true = 0.0;
    int n_ok = 0;
    int n_failed = 0;
    double mae = 0.0;
    double q1 = 0.0, median = 0.0, q3 = 0.0;
    double min = 0.0, max = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;            // sorted by (estimator, normalizer, pattern, sigma, delta)
    std::vector<CellAggregate> aggregates; // per (estimator, normalizer, sigma, delta)
};

inline constexpr const char* kResultsCsvHeader =
    "estimator,normalizer,pattern,sigma,delta_true,delta_est,abs_error,seconds,status";

/// The pattern model for one bench cell. Pattern geometry depends only on
/// (master_seed, pattern index); the noise stream also keys on the sigma and
/// step indices.
FringeModel bench_pattern_model(const ExperimentSpec& spec, int pattern_idx,
                                int sigma_idx, int step_idx);

NormalizedPair apply_normalizer(const NormalizerSpec& norm, const FringePair& pair,
                                int pattern_idx = 0, int sigma_idx = 0,
                                int step_idx = 0);

/// Runs the full matrix. Incompatible (estimator, normalizer) combinations are
/// skipped like the NA cells of the protocol unless pairing_strict is set.
/// Failed estimates become failed rows, never silently dropped.
BenchReport run_experiment(const ExperimentSpec& spec);

void write_results_csv(const BenchReport& report, const std::string& path);
void write_summary_csv(const BenchReport& report, const std::string& path);

/// Brute-force reference: grid search over delta in [0.01, pi-0.01] followed
/// by three golden-section rounds on the reconstruction residual
/// sum((n2 - cos(phi_hat(delta) + delta))^2). Independent of every estimator.
/// Fields larger than 64k interior pixels are subsampled on a deterministic
/// stride grid.
double oracle_step(const NormalizedPair& pair, double grid_step = 1e-4);

/// Emits wrapped phase-error maps (PFM + 8-bit PGM preview scaled from
/// [-pi/2, pi/2]) for every (estimator, normalizer) pair at sigma = 0.5,
/// delta = pi/3. The pseudo-estimator ids "true-step" and "detuned" use the
/// ground-truth step (the latter offset by +0.1 rad).
void error_map_experiment(const ExperimentSpec& spec, const std::string& out_dir);

struct TimingRow {
    std::string kind;  // "normalizer" | "estimator"
    std::string id;
    double seconds_median = 0.0;
};

/// Median-of-5 wall time per normalizer and per estimator at the spec's field
/// size. Reported, not asserted: absolute timings are hardware-dependent.
std::vector<TimingRow> timing_report(const ExperimentSpec& spec);

void write_timing_csv(const std::vector<TimingRow>& rows, const std::string& path);

/// Writes the raw synthesized pairs (and ground-truth phase) for every cell so
/// external normalizers can process them for later ingestion.
void export_raw(const ExperimentSpec& spec, const std::string& out_dir);

}  // namespace fringe
