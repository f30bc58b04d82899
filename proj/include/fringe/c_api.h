/* fringe: two-step fringe-pattern analysis.
 *
 * C interface of the shared library. Objects are opaque handles created and
 * destroyed through these functions; every fallible call returns a status
 * code and leaves a message retrievable with fringe_last_error() on the
 * calling thread. Structured parameters cross the boundary as JSON text with
 * the same schema the CLI uses.
 */
#ifndef FRINGE_C_API_H
#define FRINGE_C_API_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FRINGE_API __declspec(dllexport)
#else
#define FRINGE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fringe_status {
    FRINGE_OK = 0,
    FRINGE_ERR_CONFIG = 2,     /* invalid parameters or config document */
    FRINGE_ERR_IO = 3,         /* file missing/unreadable/malformed */
    FRINGE_ERR_DEGENERATE = 4, /* input cannot resolve a phase step */
    FRINGE_ERR_ESTIMATOR = 5   /* method failed on valid input */
} fringe_status;

typedef struct fringe_field fringe_field;       /* 2D real-valued grid */
typedef struct fringe_pair fringe_pair;         /* raw two-frame pair (+ ground truth) */
typedef struct fringe_normpair fringe_normpair; /* normalized pair (+ analytic maps) */
typedef struct fringe_estimate fringe_estimate; /* step estimate + diagnostics */

FRINGE_API const char* fringe_version(void);

/* Message for the most recent failing call on this thread. */
FRINGE_API const char* fringe_last_error(void);

/* ---- fields ---- */
FRINGE_API fringe_status fringe_field_create(int height, int width,
                                             const double* samples,
                                             fringe_field** out);
FRINGE_API fringe_status fringe_field_read_pfm(const char* path, fringe_field** out);
FRINGE_API fringe_status fringe_field_write_pfm(const fringe_field* f, const char* path);
FRINGE_API fringe_status fringe_field_write_pgm(const fringe_field* f, const char* path,
                                                double lo, double hi, int sixteen_bit);
FRINGE_API int fringe_field_height(const fringe_field* f);
FRINGE_API int fringe_field_width(const fringe_field* f);
FRINGE_API const double* fringe_field_data(const fringe_field* f);
FRINGE_API void fringe_field_free(fringe_field* f);

/* ---- synthesis ---- */
/* model_json: same document as `fringe synth --config`. */
FRINGE_API fringe_status fringe_synth(const char* model_json, fringe_pair** out);
FRINGE_API fringe_status fringe_pair_create(const fringe_field* i1,
                                            const fringe_field* i2,
                                            fringe_pair** out);
FRINGE_API fringe_status fringe_pair_frame(const fringe_pair* p, int index,
                                           fringe_field** out);
FRINGE_API int fringe_pair_has_truth(const fringe_pair* p);
FRINGE_API fringe_status fringe_pair_truth_phi(const fringe_pair* p, fringe_field** out);
FRINGE_API fringe_status fringe_pair_truth_delta(const fringe_pair* p, double* out);
FRINGE_API void fringe_pair_free(fringe_pair* p);

/* ---- normalization ---- */
/* normalizer_json: {"id":"gfb"|"baseline"|"ideal", ...params} */
FRINGE_API fringe_status fringe_normalize(const fringe_pair* p,
                                          const char* normalizer_json,
                                          fringe_normpair** out);
FRINGE_API fringe_status fringe_ingest_normalized(const char* pfm1, const char* pfm2,
                                                  fringe_normpair** out);
FRINGE_API fringe_status fringe_normpair_image(const fringe_normpair* np, int index,
                                               fringe_field** out);
FRINGE_API int fringe_normpair_has_analytic(const fringe_normpair* np);
/* kind: "psi1" | "psi2" | "mag1" | "mag2" */
FRINGE_API fringe_status fringe_normpair_analytic(const fringe_normpair* np,
                                                  const char* kind, fringe_field** out);
FRINGE_API int fringe_normpair_border_margin(const fringe_normpair* np);
FRINGE_API long fringe_normpair_clamped_pixels(const fringe_normpair* np);
FRINGE_API void fringe_normpair_free(fringe_normpair* np);

/* ---- step estimation ---- */
/* estimator_json: {"id":"ire", ...params}. */
FRINGE_API fringe_status fringe_estimate_step(const fringe_normpair* np,
                                              const char* estimator_json,
                                              fringe_estimate** out);
FRINGE_API double fringe_estimate_delta(const fringe_estimate* e);
/* Diagnostics as a JSON document; the string is owned by the estimate. */
FRINGE_API const char* fringe_estimate_diagnostics(const fringe_estimate* e);
FRINGE_API fringe_status fringe_estimate_step_map(const fringe_estimate* e,
                                                  fringe_field** out);
FRINGE_API void fringe_estimate_free(fringe_estimate* e);

/* ---- phase reconstruction ---- */
FRINGE_API fringe_status fringe_compute_phase(const fringe_normpair* np, double delta,
                                              fringe_field** out);
FRINGE_API fringe_status fringe_phase_error_map(const fringe_field* estimated,
                                                const fringe_field* truth,
                                                fringe_field** out);
FRINGE_API fringe_status fringe_wrap(double z, double* out);

/* ---- benchmark ---- */
/* spec_json: experiment document (see `fringe bench --print-defaults`). */
FRINGE_API fringe_status fringe_bench_run(const char* spec_json, const char* out_dir);
FRINGE_API fringe_status fringe_bench_error_maps(const char* spec_json,
                                                 const char* out_dir);
FRINGE_API fringe_status fringe_bench_timing(const char* spec_json,
                                             const char* out_csv);
FRINGE_API fringe_status fringe_bench_export_raw(const char* spec_json,
                                                 const char* out_dir);
FRINGE_API fringe_status fringe_oracle_step(const fringe_normpair* np,
                                            double grid_step, double* out);
FRINGE_API const char* fringe_default_experiment_json(void);

#ifdef __cplusplus
}
#endif

#endif /* FRINGE_C_API_H */
