// fringe: command-line front end for two-step fringe-pattern analysis.
// Built entirely on the C API of libfringe.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "fringe/c_api.h"

using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct FieldDeleter {
    void operator()(fringe_field* f) const { fringe_field_free(f); }
};
struct PairDeleter {
    void operator()(fringe_pair* p) const { fringe_pair_free(p); }
};
struct NormDeleter {
    void operator()(fringe_normpair* n) const { fringe_normpair_free(n); }
};
struct EstDeleter {
    void operator()(fringe_estimate* e) const { fringe_estimate_free(e); }
};

using FieldPtr = std::unique_ptr<fringe_field, FieldDeleter>;
using PairPtr = std::unique_ptr<fringe_pair, PairDeleter>;
using NormPtr = std::unique_ptr<fringe_normpair, NormDeleter>;
using EstPtr = std::unique_ptr<fringe_estimate, EstDeleter>;

[[noreturn]] void fail(fringe_status st) {
    std::cerr << "error: " << fringe_last_error() << "\n";
    std::exit(static_cast<int>(st));
}

void check(fringe_status st) {
    if (st != FRINGE_OK)
        fail(st);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open config file: " << path << "\n";
        std::exit(kExitIo);
    }
    try {
        json j;
        in >> j;
        return j;
    } catch (const std::exception& e) {
        std::cerr << "error: invalid JSON in " << path << ": " << e.what() << "\n";
        std::exit(kExitConfig);
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(kExitIo);
    }
    out << text;
}

std::string format_double17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

FieldPtr read_field(const std::string& path) {
    fringe_field* raw = nullptr;
    check(fringe_field_read_pfm(path.c_str(), &raw));
    return FieldPtr(raw);
}

// Builds a normalized pair from two files and a normalizer id. "ingest" treats
// the files as already normalized.
NormPtr normalize_files(const std::string& i1, const std::string& i2,
                        const json& normalizer) {
    fringe_normpair* raw = nullptr;
    if (normalizer.at("id") == "ingest") {
        check(fringe_ingest_normalized(i1.c_str(), i2.c_str(), &raw));
        return NormPtr(raw);
    }
    FieldPtr f1 = read_field(i1);
    FieldPtr f2 = read_field(i2);
    fringe_pair* praw = nullptr;
    check(fringe_pair_create(f1.get(), f2.get(), &praw));
    PairPtr pair(praw);
    check(fringe_normalize(pair.get(), normalizer.dump().c_str(), &raw));
    return NormPtr(raw);
}

json merged_params(const std::string& id, const std::string& params_path) {
    json j = params_path.empty() ? json::object() : load_json_file(params_path);
    j["id"] = id;
    return j;
}

void write_field(const fringe_field* f, const std::string& path) {
    check(fringe_field_write_pfm(f, path.c_str()));
}

// ---- synth ----

int cmd_synth(const std::string& config_path, const json& overrides,
              const std::string& out_dir) {
    json cfg = config_path.empty() ? json::object() : load_json_file(config_path);
    for (const auto& item : overrides.items())
        cfg[item.key()] = item.value();

    fringe_pair* praw = nullptr;
    check(fringe_synth(cfg.dump().c_str(), &praw));
    PairPtr pair(praw);

    std::filesystem::create_directories(out_dir);
    for (int k = 1; k <= 2; ++k) {
        fringe_field* fraw = nullptr;
        check(fringe_pair_frame(pair.get(), k, &fraw));
        FieldPtr f(fraw);
        write_field(f.get(), out_dir + "/i" + std::to_string(k) + ".pfm");
    }
    fringe_field* phiraw = nullptr;
    check(fringe_pair_truth_phi(pair.get(), &phiraw));
    FieldPtr phi(phiraw);
    write_field(phi.get(), out_dir + "/phi.pfm");

    double delta = 0.0;
    check(fringe_pair_truth_delta(pair.get(), &delta));
    json meta = cfg;
    meta["resolved_delta"] = delta;
    write_text_file(out_dir + "/meta.json", meta.dump(2) + "\n");
    std::cout << "wrote i1.pfm i2.pfm phi.pfm meta.json to " << out_dir << "\n";
    return 0;
}

// ---- normalize ----

int cmd_normalize(const std::string& i1, const std::string& i2,
                  const std::string& normalizer_id, const std::string& params_path,
                  const std::string& out_dir) {
    json normalizer = merged_params(normalizer_id, params_path);
    NormPtr np = normalize_files(i1, i2, normalizer);

    std::filesystem::create_directories(out_dir);
    for (int k = 1; k <= 2; ++k) {
        fringe_field* raw = nullptr;
        check(fringe_normpair_image(np.get(), k, &raw));
        FieldPtr f(raw);
        write_field(f.get(), out_dir + "/n" + std::to_string(k) + ".pfm");
    }
    if (fringe_normpair_has_analytic(np.get())) {
        for (const char* kind : {"psi1", "psi2", "mag1", "mag2"}) {
            fringe_field* raw = nullptr;
            check(fringe_normpair_analytic(np.get(), kind, &raw));
            FieldPtr f(raw);
            write_field(f.get(), out_dir + "/" + kind + ".pfm");
        }
    }
    json meta{{"normalizer", normalizer},
              {"border_margin", fringe_normpair_border_margin(np.get())},
              {"clamped_pixels", fringe_normpair_clamped_pixels(np.get())}};
    write_text_file(out_dir + "/normalize_meta.json", meta.dump(2) + "\n");
    std::cout << "wrote normalized pair to " << out_dir << "\n";
    return 0;
}

// ---- estimate ----

EstPtr estimate_from_files(const std::string& i1, const std::string& i2,
                           const json& normalizer, const json& estimator) {
    NormPtr np = normalize_files(i1, i2, normalizer);
    fringe_estimate* raw = nullptr;
    check(fringe_estimate_step(np.get(), estimator.dump().c_str(), &raw));
    return EstPtr(raw);
}

int cmd_estimate(const std::string& i1, const std::string& i2,
                 const std::string& normalizer_id, const std::string& norm_params,
                 const std::string& estimator_id, const std::string& est_params,
                 std::optional<uint64_t> seed) {
    json normalizer = merged_params(normalizer_id, norm_params);
    json estimator = merged_params(estimator_id, est_params);
    if (seed && (estimator_id == "rp" || estimator_id == "qpp"))
        estimator["seed"] = *seed;

    EstPtr est = estimate_from_files(i1, i2, normalizer, estimator);
    json record{{"estimator", estimator_id},
                {"normalizer", normalizer_id},
                {"delta", fringe_estimate_delta(est.get())},
                {"delta_text", format_double17(fringe_estimate_delta(est.get()))},
                {"diagnostics",
                 json::parse(fringe_estimate_diagnostics(est.get()))}};
    std::cout << record.dump(2) << "\n";
    return 0;
}

// ---- phase ----

int cmd_phase(const std::string& i1, const std::string& i2,
              const std::string& normalizer_id, const std::string& norm_params,
              std::optional<double> delta, const std::string& estimator_id,
              const std::string& est_params, std::optional<uint64_t> seed,
              const std::string& out_path) {
    json normalizer = merged_params(normalizer_id, norm_params);
    NormPtr np = normalize_files(i1, i2, normalizer);

    double step;
    if (delta) {
        step = *delta;
    } else {
        json estimator = merged_params(estimator_id, est_params);
        if (seed && (estimator_id == "rp" || estimator_id == "qpp"))
            estimator["seed"] = *seed;
        fringe_estimate* eraw = nullptr;
        check(fringe_estimate_step(np.get(), estimator.dump().c_str(), &eraw));
        EstPtr est(eraw);
        step = fringe_estimate_delta(est.get());
        json echo{{"estimator", estimator_id},
                  {"delta", step},
                  {"delta_text", format_double17(step)}};
        std::cout << echo.dump(2) << "\n";
    }

    fringe_field* raw = nullptr;
    check(fringe_compute_phase(np.get(), step, &raw));
    FieldPtr phi(raw);
    write_field(phi.get(), out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

// ---- bench ----

int cmd_bench(const std::string& config_path, const std::string& sweep,
              bool maps, bool timing, bool do_export, const std::string& out_dir,
              std::optional<int> size, std::optional<uint64_t> seed,
              bool print_defaults, std::optional<int> threads) {
    if (print_defaults) {
        std::cout << fringe_default_experiment_json() << "\n";
        return 0;
    }
    json spec = config_path.empty()
                    ? json::parse(fringe_default_experiment_json())
                    : load_json_file(config_path);
    if (sweep == "step") {
        spec["noise_levels"] = {0.5};
        spec["steps"] = json::array();
        for (double d : {M_PI / 10.0, M_PI / 6.0, M_PI / 4.0, M_PI / 3.0, M_PI / 2.0})
            spec["steps"].push_back(d);
    } else if (sweep == "noise") {
        spec["noise_levels"] = {0.0, 0.25, 0.5, 0.75, 1.0};
        spec["steps"] = {M_PI / 3.0};
    } else if (!sweep.empty()) {
        std::cerr << "error: unknown sweep '" << sweep << "' (use noise|step)\n";
        return kExitConfig;
    }
    if (size) spec["field_size"] = *size;
    if (seed) spec["master_seed"] = *seed;
    if (threads) spec["threads"] = *threads;

    std::filesystem::create_directories(out_dir);
    const std::string spec_text = spec.dump();
    write_text_file(out_dir + "/experiment.json", spec.dump(2) + "\n");

    if (do_export) {
        check(fringe_bench_export_raw(spec_text.c_str(), (out_dir + "/raw").c_str()));
        std::cout << "wrote raw pairs to " << out_dir << "/raw\n";
    }
    if (maps) {
        check(fringe_bench_error_maps(spec_text.c_str(), (out_dir + "/maps").c_str()));
        std::cout << "wrote phase error maps to " << out_dir << "/maps\n";
    }
    if (timing) {
        check(fringe_bench_timing(spec_text.c_str(), (out_dir + "/timing.csv").c_str()));
        std::cout << "wrote " << out_dir << "/timing.csv\n";
    }
    if (!maps && !timing && !do_export) {
        check(fringe_bench_run(spec_text.c_str(), out_dir.c_str()));
        std::cout << "wrote " << out_dir << "/results.csv and summary.csv\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-step fringe analysis: synthesis, normalization, step "
                 "estimation, phase reconstruction and benchmarking"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize a fringe pair");
    std::string sy_config, sy_out = "synth_out", sy_kind;
    std::optional<double> sy_delta, sy_sigma;
    std::optional<int> sy_size;
    std::optional<uint64_t> sy_seed;
    synth->add_option("--config", sy_config, "model JSON document");
    synth->add_option("--kind", sy_kind, "ramp|quadratic|gaussmix");
    synth->add_option("--delta", sy_delta, "phase step in radians, in (0, pi)");
    synth->add_option("--sigma", sy_sigma, "noise standard deviation");
    synth->add_option("--size", sy_size, "field side length in pixels");
    synth->add_option("--seed", sy_seed, "model seed");
    synth->add_option("--out", sy_out, "output directory");

    // normalize
    auto* norm = app.add_subcommand("normalize", "normalize a fringe pair");
    std::string no_i1, no_i2, no_norm = "gfb", no_params, no_out = "normalize_out";
    norm->add_option("--i1", no_i1, "first frame (PFM)")->required();
    norm->add_option("--i2", no_i2, "second frame (PFM)")->required();
    norm->add_option("--normalizer", no_norm, "gfb|baseline|ingest");
    norm->add_option("--params", no_params, "normalizer parameter JSON file");
    norm->add_option("--out", no_out, "output directory");

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate the phase step");
    std::string es_i1, es_i2, es_norm = "ingest", es_norm_params;
    std::string es_id, es_params;
    std::optional<uint64_t> es_seed;
    est->add_option("--i1", es_i1, "first frame (PFM)")->required();
    est->add_option("--i2", es_i2, "second frame (PFM)")->required();
    est->add_option("--normalizer", es_norm,
                    "gfb|baseline|ingest (ingest = files already normalized)");
    est->add_option("--normalizer-params", es_norm_params, "normalizer JSON file");
    est->add_option("--estimator", es_id, "estimator id")->required();
    est->add_option("--estimator-params", es_params, "estimator JSON file");
    est->add_option("--seed", es_seed, "seed for rp/qpp");

    // phase
    auto* phase = app.add_subcommand("phase", "reconstruct the wrapped phase");
    std::string ph_i1, ph_i2, ph_norm = "ingest", ph_norm_params;
    std::string ph_est, ph_est_params, ph_out = "phi.pfm";
    std::optional<double> ph_delta;
    std::optional<uint64_t> ph_seed;
    phase->add_option("--i1", ph_i1, "first frame (PFM)")->required();
    phase->add_option("--i2", ph_i2, "second frame (PFM)")->required();
    phase->add_option("--normalizer", ph_norm, "gfb|baseline|ingest");
    phase->add_option("--normalizer-params", ph_norm_params, "normalizer JSON file");
    phase->add_option("--delta", ph_delta, "phase step in radians");
    phase->add_option("--estimator", ph_est, "estimate the step with this method");
    phase->add_option("--estimator-params", ph_est_params, "estimator JSON file");
    phase->add_option("--seed", ph_seed, "seed for rp/qpp");
    phase->add_option("--out", ph_out, "output phase map (PFM)");

    // bench
    auto* bench = app.add_subcommand("bench", "run the evaluation protocol");
    std::string be_config, be_sweep, be_out = "bench_out";
    bool be_maps = false, be_timing = false, be_export = false, be_defaults = false;
    std::optional<int> be_size, be_threads;
    std::optional<uint64_t> be_seed;
    bench->add_option("--config", be_config, "experiment JSON document");
    bench->add_option("--sweep", be_sweep, "noise (sweep A) | step (sweep B)");
    bench->add_flag("--maps", be_maps, "emit phase error maps");
    bench->add_flag("--timing", be_timing, "emit timing report");
    bench->add_flag("--export-raw", be_export, "write raw pairs for external tools");
    bench->add_flag("--print-defaults", be_defaults, "print the defaults document");
    bench->add_option("--size", be_size, "field side length (512 default, 1024 paper scale)");
    bench->add_option("--seed", be_seed, "master seed");
    bench->add_option("--threads", be_threads, "worker threads (0 = hardware)");
    bench->add_option("--out", be_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (synth->parsed()) {
        json overrides = json::object();
        if (!sy_kind.empty()) overrides["kind"] = sy_kind;
        if (sy_delta) overrides["delta"] = *sy_delta;
        if (sy_sigma) overrides["noise_sigma"] = *sy_sigma;
        if (sy_size) {
            overrides["height"] = *sy_size;
            overrides["width"] = *sy_size;
        }
        if (sy_seed) overrides["seed"] = *sy_seed;
        return cmd_synth(sy_config, overrides, sy_out);
    }
    if (norm->parsed())
        return cmd_normalize(no_i1, no_i2, no_norm, no_params, no_out);
    if (est->parsed())
        return cmd_estimate(es_i1, es_i2, es_norm, es_norm_params, es_id, es_params,
                            es_seed);
    if (phase->parsed()) {
        if (!ph_delta && ph_est.empty()) {
            std::cerr << "error: phase requires --delta or --estimator\n";
            return kExitConfig;
        }
        return cmd_phase(ph_i1, ph_i2, ph_norm, ph_norm_params, ph_delta, ph_est,
                         ph_est_params, ph_seed, ph_out);
    }
    if (bench->parsed())
        return cmd_bench(be_config, be_sweep, be_maps, be_timing, be_export, be_out,
                         be_size, be_seed, be_defaults, be_threads);
    return kExitConfig;
}
