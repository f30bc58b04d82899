#include "fringe/c_api.h"

#include <nlohmann/json.hpp>

#include <cstring>
#include <filesystem>
#include <string>

#include "fringe/bench.hpp"
#include "fringe/config.hpp"
#include "fringe/errors.hpp"
#include "fringe/io.hpp"
#include "fringe/phase.hpp"

using nlohmann::json;

// opaque handle definitions: thin owning wrappers over the core types
struct fringe_field {
    fringe::RealField f;
};
struct fringe_pair {
    fringe::FringePair p;
};
struct fringe_normpair {
    fringe::NormalizedPair np;
};
struct fringe_estimate {
    fringe::StepEstimate e;
    std::string diagnostics_json;
};

namespace {

thread_local std::string g_last_error;

fringe_status status_from(const fringe::Error& e) {
    g_last_error = e.what();
    return static_cast<fringe_status>(e.code());
}

template <class F>
fringe_status guarded(F&& fn) {
    try {
        fn();
        return FRINGE_OK;
    } catch (const fringe::Error& e) {
        return status_from(e);
    } catch (const std::exception& e) {
        g_last_error = std::string("internal error: ") + e.what();
        return FRINGE_ERR_ESTIMATOR;
    }
}

std::string diagnostics_to_json(const fringe::StepEstimate& e) {
    json j{{"delta", e.delta},
           {"iterations", e.diagnostics.iterations},
           {"samples_used", e.diagnostics.samples_used},
           {"clamp_count", e.diagnostics.clamp_count},
           {"degenerate", e.diagnostics.degenerate},
           {"has_step_map", e.step_map.has_value()}};
    if (!e.diagnostics.root_candidates.empty())
        j["root_candidates"] = e.diagnostics.root_candidates;
    if (e.diagnostics.window_origin[0] >= 0)
        j["window_origin"] = e.diagnostics.window_origin;
    if (!e.diagnostics.coefficients.empty())
        j["coefficients"] = e.diagnostics.coefficients;
    return j.dump();
}

fringe::NormalizerSpec normalizer_from_text(const char* text) {
    return fringe::parse_normalizer(
        fringe::parse_json_text(text ? text : "", "normalizer"));
}

}  // namespace

extern "C" {

const char* fringe_version(void) { return "1.0.0"; }

const char* fringe_last_error(void) { return g_last_error.c_str(); }

/* ---- fields ---- */

fringe_status fringe_field_create(int height, int width, const double* samples,
                                  fringe_field** out) {
    return guarded([&] {
        if (!samples || !out)
            throw fringe::ConfigError("fringe_field_create: null argument");
        std::vector<double> data(samples,
                                 samples + static_cast<size_t>(height) * width);
        auto f = std::make_unique<fringe_field>();
        f->f = fringe::RealField(height, width, std::move(data));
        f->f.validate_finite("fringe_field_create");
        *out = f.release();
    });
}

fringe_status fringe_field_read_pfm(const char* path, fringe_field** out) {
    return guarded([&] {
        if (!path || !out)
            throw fringe::ConfigError("fringe_field_read_pfm: null argument");
        auto f = std::make_unique<fringe_field>();
        f->f = fringe::read_pfm(path);
        *out = f.release();
    });
}

fringe_status fringe_field_write_pfm(const fringe_field* f, const char* path) {
    return guarded([&] {
        if (!f || !path)
            throw fringe::ConfigError("fringe_field_write_pfm: null argument");
        fringe::write_pfm(f->f, path);
    });
}

fringe_status fringe_field_write_pgm(const fringe_field* f, const char* path,
                                     double lo, double hi, int sixteen_bit) {
    return guarded([&] {
        if (!f || !path)
            throw fringe::ConfigError("fringe_field_write_pgm: null argument");
        fringe::write_pgm(f->f, path, lo, hi, sixteen_bit != 0);
    });
}

int fringe_field_height(const fringe_field* f) { return f ? f->f.height() : 0; }
int fringe_field_width(const fringe_field* f) { return f ? f->f.width() : 0; }
const double* fringe_field_data(const fringe_field* f) {
    return f ? f->f.data() : nullptr;
}
void fringe_field_free(fringe_field* f) { delete f; }

/* ---- synthesis ---- */

fringe_status fringe_synth(const char* model_json, fringe_pair** out) {
    return guarded([&] {
        if (!model_json || !out)
            throw fringe::ConfigError("fringe_synth: null argument");
        fringe::SynthConfig cfg = fringe::parse_synth_config(
            fringe::parse_json_text(model_json, "synth config"));
        auto p = std::make_unique<fringe_pair>();
        p->p = fringe::synth_pair(cfg.model, cfg.height, cfg.width);
        *out = p.release();
    });
}

fringe_status fringe_pair_create(const fringe_field* i1, const fringe_field* i2,
                                 fringe_pair** out) {
    return guarded([&] {
        if (!i1 || !i2 || !out)
            throw fringe::ConfigError("fringe_pair_create: null argument");
        if (!i1->f.same_dims(i2->f))
            throw fringe::ConfigError("fringe_pair_create: dimension mismatch");
        auto p = std::make_unique<fringe_pair>();
        p->p.i1 = i1->f;
        p->p.i2 = i2->f;
        *out = p.release();
    });
}

fringe_status fringe_pair_frame(const fringe_pair* p, int index, fringe_field** out) {
    return guarded([&] {
        if (!p || !out || (index != 1 && index != 2))
            throw fringe::ConfigError("fringe_pair_frame: bad argument");
        auto f = std::make_unique<fringe_field>();
        f->f = index == 1 ? p->p.i1 : p->p.i2;
        *out = f.release();
    });
}

int fringe_pair_has_truth(const fringe_pair* p) {
    return p && p->p.ground_truth ? 1 : 0;
}

fringe_status fringe_pair_truth_phi(const fringe_pair* p, fringe_field** out) {
    return guarded([&] {
        if (!p || !out)
            throw fringe::ConfigError("fringe_pair_truth_phi: null argument");
        if (!p->p.ground_truth)
            throw fringe::ConfigError("pair carries no ground truth");
        auto f = std::make_unique<fringe_field>();
        f->f = p->p.ground_truth->phi;
        *out = f.release();
    });
}

fringe_status fringe_pair_truth_delta(const fringe_pair* p, double* out) {
    return guarded([&] {
        if (!p || !out)
            throw fringe::ConfigError("fringe_pair_truth_delta: null argument");
        if (!p->p.ground_truth)
            throw fringe::ConfigError("pair carries no ground truth");
        *out = p->p.ground_truth->delta;
    });
}

void fringe_pair_free(fringe_pair* p) { delete p; }

/* ---- normalization ---- */

fringe_status fringe_normalize(const fringe_pair* p, const char* normalizer_json,
                               fringe_normpair** out) {
    return guarded([&] {
        if (!p || !out)
            throw fringe::ConfigError("fringe_normalize: null argument");
        fringe::NormalizerSpec spec = normalizer_from_text(normalizer_json);
        if (spec.id == "ingest")
            throw fringe::ConfigError(
                "use fringe_ingest_normalized for externally normalized files");
        auto np = std::make_unique<fringe_normpair>();
        np->np = fringe::apply_normalizer(spec, p->p);
        *out = np.release();
    });
}

fringe_status fringe_ingest_normalized(const char* pfm1, const char* pfm2,
                                       fringe_normpair** out) {
    return guarded([&] {
        if (!pfm1 || !pfm2 || !out)
            throw fringe::ConfigError("fringe_ingest_normalized: null argument");
        auto np = std::make_unique<fringe_normpair>();
        np->np = fringe::ingest_normalized(pfm1, pfm2);
        *out = np.release();
    });
}

fringe_status fringe_normpair_image(const fringe_normpair* np, int index,
                                    fringe_field** out) {
    return guarded([&] {
        if (!np || !out || (index != 1 && index != 2))
            throw fringe::ConfigError("fringe_normpair_image: bad argument");
        auto f = std::make_unique<fringe_field>();
        f->f = index == 1 ? np->np.n1 : np->np.n2;
        *out = f.release();
    });
}

int fringe_normpair_has_analytic(const fringe_normpair* np) {
    return np && np->np.has_analytic() ? 1 : 0;
}

fringe_status fringe_normpair_analytic(const fringe_normpair* np, const char* kind,
                                       fringe_field** out) {
    return guarded([&] {
        if (!np || !kind || !out)
            throw fringe::ConfigError("fringe_normpair_analytic: null argument");
        if (!np->np.analytic)
            throw fringe::ConfigError("normalized pair carries no analytic maps");
        const fringe::AnalyticMaps& m = *np->np.analytic;
        auto f = std::make_unique<fringe_field>();
        const std::string k = kind;
        if (k == "psi1") f->f = m.psi1;
        else if (k == "psi2") f->f = m.psi2;
        else if (k == "mag1") f->f = m.mag1;
        else if (k == "mag2") f->f = m.mag2;
        else throw fringe::ConfigError("unknown analytic map kind: " + k);
        *out = f.release();
    });
}

int fringe_normpair_border_margin(const fringe_normpair* np) {
    return np ? np->np.border_margin : 0;
}

long fringe_normpair_clamped_pixels(const fringe_normpair* np) {
    return np ? np->np.clamped_pixels : 0;
}

void fringe_normpair_free(fringe_normpair* np) { delete np; }

/* ---- estimation ---- */

fringe_status fringe_estimate_step(const fringe_normpair* np,
                                   const char* estimator_json,
                                   fringe_estimate** out) {
    return guarded([&] {
        if (!np || !estimator_json || !out)
            throw fringe::ConfigError("fringe_estimate_step: null argument");
        fringe::EstimatorSpec spec = fringe::parse_estimator(
            fringe::parse_json_text(estimator_json, "estimator"));
        auto e = std::make_unique<fringe_estimate>();
        e->e = fringe::run_estimator(spec.id, np->np, spec.params);
        e->diagnostics_json = diagnostics_to_json(e->e);
        *out = e.release();
    });
}

double fringe_estimate_delta(const fringe_estimate* e) { return e ? e->e.delta : 0.0; }

const char* fringe_estimate_diagnostics(const fringe_estimate* e) {
    return e ? e->diagnostics_json.c_str() : "";
}

fringe_status fringe_estimate_step_map(const fringe_estimate* e, fringe_field** out) {
    return guarded([&] {
        if (!e || !out)
            throw fringe::ConfigError("fringe_estimate_step_map: null argument");
        if (!e->e.step_map)
            throw fringe::ConfigError("estimate carries no step map");
        auto f = std::make_unique<fringe_field>();
        f->f = *e->e.step_map;
        *out = f.release();
    });
}

void fringe_estimate_free(fringe_estimate* e) { delete e; }

/* ---- phase ---- */

fringe_status fringe_compute_phase(const fringe_normpair* np, double delta,
                                   fringe_field** out) {
    return guarded([&] {
        if (!np || !out)
            throw fringe::ConfigError("fringe_compute_phase: null argument");
        auto f = std::make_unique<fringe_field>();
        f->f = fringe::compute_phase(np->np, delta).phi;
        *out = f.release();
    });
}

fringe_status fringe_phase_error_map(const fringe_field* estimated,
                                     const fringe_field* truth, fringe_field** out) {
    return guarded([&] {
        if (!estimated || !truth || !out)
            throw fringe::ConfigError("fringe_phase_error_map: null argument");
        auto f = std::make_unique<fringe_field>();
        f->f = fringe::phase_error_map(fringe::PhaseMap{estimated->f},
                                       fringe::PhaseMap{truth->f});
        *out = f.release();
    });
}

fringe_status fringe_wrap(double z, double* out) {
    return guarded([&] {
        if (!out)
            throw fringe::ConfigError("fringe_wrap: null argument");
        *out = fringe::wrap(z);
    });
}

/* ---- benchmark ---- */

fringe_status fringe_bench_run(const char* spec_json, const char* out_dir) {
    return guarded([&] {
        if (!spec_json || !out_dir)
            throw fringe::ConfigError("fringe_bench_run: null argument");
        fringe::ExperimentSpec spec = fringe::parse_experiment(
            fringe::parse_json_text(spec_json, "experiment"));
        std::filesystem::create_directories(out_dir);
        fringe::BenchReport report = fringe::run_experiment(spec);
        fringe::write_results_csv(report, std::string(out_dir) + "/results.csv");
        fringe::write_summary_csv(report, std::string(out_dir) + "/summary.csv");
    });
}

fringe_status fringe_bench_error_maps(const char* spec_json, const char* out_dir) {
    return guarded([&] {
        if (!spec_json || !out_dir)
            throw fringe::ConfigError("fringe_bench_error_maps: null argument");
        fringe::error_map_experiment(fringe::parse_experiment(fringe::parse_json_text(
                                         spec_json, "experiment")),
                                     out_dir);
    });
}

fringe_status fringe_bench_timing(const char* spec_json, const char* out_csv) {
    return guarded([&] {
        if (!spec_json || !out_csv)
            throw fringe::ConfigError("fringe_bench_timing: null argument");
        auto rows = fringe::timing_report(fringe::parse_experiment(
            fringe::parse_json_text(spec_json, "experiment")));
        fringe::write_timing_csv(rows, out_csv);
    });
}

fringe_status fringe_bench_export_raw(const char* spec_json, const char* out_dir) {
    return guarded([&] {
        if (!spec_json || !out_dir)
            throw fringe::ConfigError("fringe_bench_export_raw: null argument");
        fringe::export_raw(fringe::parse_experiment(
                               fringe::parse_json_text(spec_json, "experiment")),
                           out_dir);
    });
}

fringe_status fringe_oracle_step(const fringe_normpair* np, double grid_step,
                                 double* out) {
    return guarded([&] {
        if (!np || !out)
            throw fringe::ConfigError("fringe_oracle_step: null argument");
        *out = fringe::oracle_step(np->np, grid_step > 0.0 ? grid_step : 1e-4);
    });
}

const char* fringe_default_experiment_json(void) {
    thread_local std::string text;
    text = fringe::default_experiment_json().dump(2);
    return text.c_str();
}

}  // extern "C"
