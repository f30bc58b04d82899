#include "fringe/config.hpp"

#include <nlohmann/json.hpp>

#include <set>

namespace fringe {

using nlohmann::json;

namespace {

// strict schema walk: every object must contain only whitelisted keys
void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& context) {
    if (!j.is_object())
        throw ConfigError(context + ": expected a JSON object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw ConfigError(context + ": unknown key '" + item.key() + "'");
}

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw ConfigError(std::string("key '") + key + "' must be a number");
    return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer())
        throw ConfigError(std::string("key '") + key + "' must be an integer");
    return j[key].get<int>();
}

uint64_t get_u64(const json& j, const char* key, uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer())
        throw ConfigError(std::string("key '") + key + "' must be an integer");
    return j[key].get<uint64_t>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean())
        throw ConfigError(std::string("key '") + key + "' must be a boolean");
    return j[key].get<bool>();
}

std::string get_str(const json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string())
        throw ConfigError(std::string("key '") + key + "' must be a string");
    return j[key].get<std::string>();
}

std::vector<double> get_num_list(const json& j, const char* key,
                                 std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array())
        throw ConfigError(std::string("key '") + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number())
            throw ConfigError(std::string("key '") + key + "' must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

SmoothFieldSpec parse_smooth(const json& j, const SmoothFieldSpec& defaults,
                             const std::string& context, bool with_floor,
                             double* floor_out) {
    std::set<std::string> keys = {"base", "bump_min", "bump_max", "bump_sigma_frac"};
    if (with_floor) keys.insert("floor");
    check_keys(j, keys, context);
    SmoothFieldSpec s = defaults;
    s.base = get_num(j, "base", s.base);
    s.bump_min = get_num(j, "bump_min", s.bump_min);
    s.bump_max = get_num(j, "bump_max", s.bump_max);
    s.bump_sigma_frac = get_num(j, "bump_sigma_frac", s.bump_sigma_frac);
    if (with_floor && floor_out)
        *floor_out = get_num(j, "floor", *floor_out);
    return s;
}

json smooth_to_json(const SmoothFieldSpec& s) {
    return json{{"base", s.base},
                {"bump_min", s.bump_min},
                {"bump_max", s.bump_max},
                {"bump_sigma_frac", s.bump_sigma_frac}};
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(what + ": invalid JSON: " + e.what());
    }
}

SynthConfig parse_synth_config(const json& j) {
    check_keys(j, {"kind", "height", "width", "delta", "noise_sigma", "seed", "phase",
                   "background", "contrast"},
               "synth config");
    SynthConfig cfg;
    cfg.height = get_int(j, "height", cfg.height);
    cfg.width = get_int(j, "width", cfg.width);
    cfg.model.phase.kind = phase_kind_from_string(get_str(j, "kind", "ramp"));
    cfg.model.delta = get_num(j, "delta", cfg.model.delta);
    cfg.model.noise_sigma = get_num(j, "noise_sigma", cfg.model.noise_sigma);
    cfg.model.seed = get_u64(j, "seed", cfg.model.seed);
    if (j.contains("phase")) {
        const json& p = j["phase"];
        check_keys(p,
                   {"fringes", "orientation", "offset", "peak", "center_x", "center_y",
                    "carrier_fringes", "peak_to_valley"},
                   "synth config phase");
        PhaseSpec& ps = cfg.model.phase;
        ps.fringes = get_num(p, "fringes", ps.fringes);
        ps.orientation = get_num(p, "orientation", ps.orientation);
        ps.offset = get_num(p, "offset", ps.offset);
        ps.peak = get_num(p, "peak", ps.peak);
        ps.center_x = get_num(p, "center_x", ps.center_x);
        ps.center_y = get_num(p, "center_y", ps.center_y);
        ps.carrier_fringes = get_num(p, "carrier_fringes", ps.carrier_fringes);
        ps.peak_to_valley = get_num(p, "peak_to_valley", ps.peak_to_valley);
    }
    if (j.contains("background"))
        cfg.model.background = parse_smooth(j["background"], cfg.model.background,
                                            "synth config background", false, nullptr);
    if (j.contains("contrast"))
        cfg.model.contrast = parse_smooth(j["contrast"], cfg.model.contrast,
                                          "synth config contrast", true,
                                          &cfg.model.contrast_floor);
    cfg.model.validate();
    if (cfg.height < kMinFieldSide || cfg.width < kMinFieldSide)
        throw ConfigError("synth config: dimensions must be at least 16x16");
    return cfg;
}

json synth_config_to_json(const SynthConfig& cfg) {
    const PhaseSpec& ps = cfg.model.phase;
    json phase;
    switch (ps.kind) {
        case PhaseKind::LinearRamp:
            phase = {{"fringes", ps.fringes},
                     {"orientation", ps.orientation},
                     {"offset", ps.offset}};
            break;
        case PhaseKind::Quadratic:
            phase = {{"peak", ps.peak},
                     {"center_x", ps.center_x},
                     {"center_y", ps.center_y},
                     {"offset", ps.offset}};
            break;
        case PhaseKind::GaussianMix:
            phase = {{"carrier_fringes", ps.carrier_fringes},
                     {"orientation", ps.orientation},
                     {"peak_to_valley", ps.peak_to_valley},
                     {"offset", ps.offset}};
            break;
    }
    json contrast = smooth_to_json(cfg.model.contrast);
    contrast["floor"] = cfg.model.contrast_floor;
    return json{{"kind", to_string(ps.kind)},
                {"height", cfg.height},
                {"width", cfg.width},
                {"delta", cfg.model.delta},
                {"noise_sigma", cfg.model.noise_sigma},
                {"seed", cfg.model.seed},
                {"phase", phase},
                {"background", smooth_to_json(cfg.model.background)},
                {"contrast", contrast}};
}

NormalizerSpec parse_normalizer(const json& j) {
    NormalizerSpec spec;
    spec.id = get_str(j, "id", "");
    if (spec.id == "gfb") {
        check_keys(j, {"id", "orientations", "periods", "envelope_ratio",
                       "dc_removal_sigma"},
                   "normalizer gfb");
        spec.gfb.orientations = get_int(j, "orientations", spec.gfb.orientations);
        spec.gfb.periods = get_num_list(j, "periods", spec.gfb.periods);
        spec.gfb.envelope_ratio = get_num(j, "envelope_ratio", spec.gfb.envelope_ratio);
        spec.gfb.dc_removal_sigma =
            get_num(j, "dc_removal_sigma", spec.gfb.dc_removal_sigma);
        spec.gfb.validate();
    } else if (spec.id == "baseline") {
        check_keys(j, {"id", "bg_sigma", "env_sigma"}, "normalizer baseline");
        spec.baseline_bg_sigma = get_num(j, "bg_sigma", spec.baseline_bg_sigma);
        spec.baseline_env_sigma = get_num(j, "env_sigma", spec.baseline_env_sigma);
    } else if (spec.id == "ideal") {
        check_keys(j, {"id"}, "normalizer ideal");
    } else if (spec.id == "ingest") {
        check_keys(j, {"id", "dir"}, "normalizer ingest");
        spec.ingest_dir = get_str(j, "dir", "");
    } else {
        throw ConfigError("unknown normalizer id: '" + spec.id + "'");
    }
    return spec;
}

json normalizer_to_json(const NormalizerSpec& spec) {
    if (spec.id == "gfb")
        return json{{"id", "gfb"},
                    {"orientations", spec.gfb.orientations},
                    {"periods", spec.gfb.periods},
                    {"envelope_ratio", spec.gfb.envelope_ratio},
                    {"dc_removal_sigma", spec.gfb.dc_removal_sigma}};
    if (spec.id == "baseline")
        return json{{"id", "baseline"},
                    {"bg_sigma", spec.baseline_bg_sigma},
                    {"env_sigma", spec.baseline_env_sigma}};
    if (spec.id == "ingest")
        return json{{"id", "ingest"}, {"dir", spec.ingest_dir}};
    return json{{"id", spec.id}};
}

EstimatorSpec parse_estimator(const json& j) {
    EstimatorSpec spec;
    spec.id = get_str(j, "id", "");
    static const std::set<std::string> known = {
        "kreis", "psc", "gs",  "evi",  "rp",   "ire", "mre",
        "tse",   "ddv", "gpsi", "slef", "lef", "qpp"};
    if (!known.count(spec.id))
        throw ConfigError("unknown estimator id: '" + spec.id + "'");

    std::set<std::string> keys = {"id"};
    if (spec.id == "kreis") keys.insert("lowcut_radius");
    if (spec.id == "evi") keys.insert("extremum_guard");
    if (spec.id == "rp") { keys.insert("n_samples"); keys.insert("seed"); }
    if (spec.id == "ire") {
        keys.insert("kappa");
        keys.insert("max_iterations");
        keys.insert("tolerance");
    }
    if (spec.id == "tse") keys.insert("gauss_sigma");
    if (spec.id == "slef") { keys.insert("robust"); keys.insert("kappa"); }
    if (spec.id == "qpp") { keys.insert("window"); keys.insert("seed"); }
    check_keys(j, keys, "estimator " + spec.id);

    EstimatorParams& p = spec.params;
    p.lowcut_radius = get_int(j, "lowcut_radius", p.lowcut_radius);
    p.extremum_guard = get_num(j, "extremum_guard", p.extremum_guard);
    p.n_samples = get_int(j, "n_samples", p.n_samples);
    p.ire.kappa = get_num(j, "kappa", p.ire.kappa);
    p.ire.max_iterations = get_int(j, "max_iterations", p.ire.max_iterations);
    p.ire.tolerance = get_num(j, "tolerance", p.ire.tolerance);
    p.tse_sigma = get_num(j, "gauss_sigma", p.tse_sigma);
    p.slef_robust = get_bool(j, "robust", p.slef_robust);
    if (spec.id == "slef")
        p.slef_kappa = get_num(j, "kappa", p.slef_kappa);
    p.qpp_window = get_int(j, "window", p.qpp_window);
    p.seed = get_u64(j, "seed", p.seed);
    return spec;
}

json estimator_to_json(const EstimatorSpec& spec) {
    json j{{"id", spec.id}};
    const EstimatorParams& p = spec.params;
    if (spec.id == "kreis") j["lowcut_radius"] = p.lowcut_radius;
    if (spec.id == "evi") j["extremum_guard"] = p.extremum_guard;
    if (spec.id == "rp") j["n_samples"] = p.n_samples;
    if (spec.id == "ire") {
        j["kappa"] = p.ire.kappa;
        j["max_iterations"] = p.ire.max_iterations;
        j["tolerance"] = p.ire.tolerance;
    }
    if (spec.id == "tse") j["gauss_sigma"] = p.tse_sigma;
    if (spec.id == "slef") {
        j["robust"] = p.slef_robust;
        j["kappa"] = p.slef_kappa;
    }
    if (spec.id == "qpp") j["window"] = p.qpp_window;
    return j;
}

ExperimentSpec parse_experiment(const json& j) {
    check_keys(j,
               {"pattern_count", "noise_levels", "steps", "normalizers", "estimators",
                "field_size", "master_seed", "record_timing", "threads",
                "pairing_strict"},
               "experiment");
    ExperimentSpec spec;
    spec.pattern_count = get_int(j, "pattern_count", spec.pattern_count);
    spec.noise_levels = get_num_list(j, "noise_levels", spec.noise_levels);
    spec.steps = get_num_list(j, "steps", spec.steps);
    spec.field_size = get_int(j, "field_size", spec.field_size);
    spec.master_seed = get_u64(j, "master_seed", spec.master_seed);
    spec.record_timing = get_bool(j, "record_timing", spec.record_timing);
    spec.threads = get_int(j, "threads", spec.threads);
    spec.pairing_strict = get_bool(j, "pairing_strict", spec.pairing_strict);
    if (j.contains("normalizers")) {
        if (!j["normalizers"].is_array())
            throw ConfigError("experiment: 'normalizers' must be an array");
        spec.normalizers.clear();
        for (const auto& n : j["normalizers"])
            spec.normalizers.push_back(parse_normalizer(n));
    }
    if (j.contains("estimators")) {
        if (!j["estimators"].is_array())
            throw ConfigError("experiment: 'estimators' must be an array");
        spec.estimators.clear();
        for (const auto& e : j["estimators"])
            spec.estimators.push_back(parse_estimator(e));
    }
    spec.validate();
    return spec;
}

json experiment_to_json(const ExperimentSpec& spec) {
    json normalizers = json::array();
    for (const auto& n : spec.normalizers)
        normalizers.push_back(normalizer_to_json(n));
    json estimators = json::array();
    for (const auto& e : spec.estimators)
        estimators.push_back(estimator_to_json(e));
    return json{{"pattern_count", spec.pattern_count},
                {"noise_levels", spec.noise_levels},
                {"steps", spec.steps},
                {"normalizers", normalizers},
                {"estimators", estimators},
                {"field_size", spec.field_size},
                {"master_seed", spec.master_seed},
                {"record_timing", spec.record_timing},
                {"threads", spec.threads},
                {"pairing_strict", spec.pairing_strict}};
}

json default_experiment_json() {
    ExperimentSpec spec;
    for (const auto& id : estimator_ids())
        spec.estimators.push_back(EstimatorSpec{id, EstimatorParams{}});
    return experiment_to_json(spec);
}

void apply_step_sweep(ExperimentSpec& spec) {
    spec.noise_levels = {0.5};
    spec.steps = {kPi / 10.0, kPi / 6.0, kPi / 4.0, kPi / 3.0, kPi / 2.0};
}

}  // namespace fringe
