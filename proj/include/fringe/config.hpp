#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fringe/bench.hpp"
#include "fringe/estimators.hpp"
#include "fringe/synth.hpp"

namespace fringe {

// JSON <-> domain structs with strict schema validation: every key is checked
// against a whitelist and unknown keys are rejected before any computation.

struct SynthConfig {
    FringeModel model;
    int height = 512;
    int width = 512;
};

SynthConfig parse_synth_config(const nlohmann::json& j);
nlohmann::json synth_config_to_json(const SynthConfig& cfg);

NormalizerSpec parse_normalizer(const nlohmann::json& j);
nlohmann::json normalizer_to_json(const NormalizerSpec& spec);

EstimatorSpec parse_estimator(const nlohmann::json& j);
nlohmann::json estimator_to_json(const EstimatorSpec& spec);

ExperimentSpec parse_experiment(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentSpec& spec);

/// The published defaults document: a full experiment spec with the noise
/// sweep, the twelve estimators and the GFB normalizer.
nlohmann::json default_experiment_json();

/// Sweep B: the step sweep at constant sigma = 0.5.
void apply_step_sweep(ExperimentSpec& spec);

nlohmann::json parse_json_text(const std::string& text, const std::string& what);

}  // namespace fringe
