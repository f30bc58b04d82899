#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "fringe/estimators.hpp"
#include "fringe/io.hpp"
#include "fringe/normalize.hpp"
#include "fringe/rng.hpp"
#include "fringe/synth.hpp"

using namespace fringe;

namespace {

FringeModel tone_model(double period_px, int width, double delta,
                       double a = 0.0, double b = 1.0, double sigma = 0.0) {
    FringeModel m;
    m.phase.kind = PhaseKind::LinearRamp;
    m.phase.fringes = width / period_px;
    m.phase.orientation = 0.0;
    m.background = SmoothFieldSpec{a, 0.0, 0.0, 0.35};
    m.contrast = SmoothFieldSpec{b, 0.0, 0.0, 0.35};
    m.delta = delta;
    m.noise_sigma = sigma;
    m.seed = 3;
    return m;
}

double interior_rms_diff(const RealField& a, const RealField& b, int margin) {
    double acc = 0.0;
    long n = 0;
    for (int y = margin; y < a.height() - margin; ++y)
        for (int x = margin; x < a.width() - margin; ++x) {
            const double d = a.at(y, x) - b.at(y, x);
            acc += d * d;
            ++n;
        }
    return std::sqrt(acc / n);
}

}  // namespace

TEST_CASE("gfb: a pure tone at a bank period is a fixed point") {
    FringeModel m = tone_model(35.0, 384, kPi / 3.0);
    FringePair p = synth_pair(m, 384, 384);
    NormalizedPair np = gfb_normalize(p);
    CHECK(np.border_margin == 8);
    REQUIRE(np.has_analytic());
    CHECK(interior_rms_diff(np.n1, p.i1, 8) < 0.02);
    CHECK(interior_rms_diff(np.n2, p.i2, 8) < 0.02);
}

TEST_CASE("gfb: cos(psi) reproduces n exactly and magnitudes are argmax values") {
    FringeModel m = tone_model(35.0, 256, kPi / 3.0);
    FringePair p = synth_pair(m, 256, 256);
    NormalizedPair np = gfb_normalize(p);
    const AnalyticMaps& maps = *np.analytic;
    for (int y = 8; y < 248; ++y)
        for (int x = 8; x < 248; ++x) {
            CHECK(np.n1.at(y, x) == std::cos(maps.psi1.at(y, x)));
            CHECK(np.n2.at(y, x) == std::cos(maps.psi2.at(y, x)));
            CHECK(maps.mag1.at(y, x) >= 0.0);
        }
    // unit-contrast tone through its matched unit-gain filter: |resp| ~ b/2.
    // Checked beyond the convolution ripple zone (~2x the filter envelope).
    long inside = 0, total = 0;
    for (int y = 32; y < 224; ++y)
        for (int x = 32; x < 224; ++x) {
            ++total;
            if (std::fabs(maps.mag1.at(y, x) - 0.5) < 0.05)
                ++inside;
        }
    CHECK(double(inside) / double(total) > 0.95);
}

TEST_CASE("gfb: contrast equalization restores unit amplitude") {
    FringeModel m = tone_model(35.0, 256, kPi / 3.0, 0.5, 0.5);
    FringePair p = synth_pair(m, 256, 256);
    NormalizedPair np = gfb_normalize(p);
    // local sinusoid amplitude from the mean square of the output
    RealField sq(np.n1.height(), np.n1.width());
    for (size_t i = 0; i < sq.size(); ++i)
        sq[i] = np.n1[i] * np.n1[i];
    RealField env = gaussian_blur(sq, 35.0);
    long ok = 0, total = 0;
    for (int y = 8; y < 248; ++y)
        for (int x = 8; x < 248; ++x) {
            const double amp = std::sqrt(2.0 * env.at(y, x));
            ++total;
            if (amp >= 0.9 && amp <= 1.1)
                ++ok;
        }
    CHECK(double(ok) / double(total) > 0.95);
    // and the output actually tracks the ground-truth cosine
    RealField truth(np.n1.height(), np.n1.width());
    for (size_t i = 0; i < truth.size(); ++i)
        truth[i] = std::cos(p.ground_truth->phi[i]);
    CHECK(interior_rms_diff(np.n1, truth, 8) < 0.1);
}

TEST_CASE("gfb: gain and offset never change the selected angle") {
    FringeModel m = tone_model(42.0, 256, kPi / 3.0);
    m.phase.orientation = 0.6;
    m.background = SmoothFieldSpec{0.2, 0.0, 0.3, 0.35};
    FringePair p = synth_pair(m, 256, 256);
    FringePair q = p;
    for (RealField* f : {&q.i1, &q.i2})
        for (size_t i = 0; i < f->size(); ++i)
            (*f)[i] = 1.7 * (*f)[i] + 0.35;

    NormalizedPair a = gfb_normalize(p);
    NormalizedPair b = gfb_normalize(q);
    double worst = 0.0;
    for (size_t i = 0; i < a.n1.size(); ++i) {
        worst = std::max(worst, std::fabs(a.n1[i] - b.n1[i]));
        worst = std::max(worst, std::fabs(a.analytic->psi1[i] - b.analytic->psi1[i]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("gfb: noisy pair still yields an accurate downstream IRE step") {
    FringeModel m = tone_model(35.0, 256, kPi / 3.0, 0.0, 1.0, 1.0);
    m.background = SmoothFieldSpec{0.5, 0.0, 0.5, 0.35};
    m.contrast = SmoothFieldSpec{1.0, 0.0, 0.6, 0.35};
    FringePair p = synth_pair(m, 256, 256);
    NormalizedPair np = gfb_normalize(p);
    StepEstimate e = estimate_ire(np);
    CHECK(std::fabs(e.delta - kPi / 3.0) < 0.05);
}

TEST_CASE("gfb rejects fields smaller than 4x the largest period") {
    FringeModel m = tone_model(35.0, 128, kPi / 3.0);
    FringePair p = synth_pair(m, 128, 128);  // 128 < 4 * 55
    CHECK_THROWS_AS(gfb_normalize(p), ConfigError);
    GfbConfig cfg;
    cfg.periods = {20.0, 30.0};
    CHECK_NOTHROW(gfb_normalize(p, cfg));
}

TEST_CASE("gfb config validation") {
    GfbConfig cfg;
    cfg.orientations = 2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = GfbConfig{};
    cfg.periods = {2.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = GfbConfig{};
    cfg.envelope_ratio = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("baseline: near fixed point on an already-normalized tone") {
    FringeModel m = tone_model(35.0, 192, kPi / 3.0);
    FringePair p = synth_pair(m, 192, 192);
    NormalizedPair np = baseline_normalize(p);
    // correlation over the interior
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    long n = 0;
    for (int y = 8; y < 184; ++y)
        for (int x = 8; x < 184; ++x) {
            const double a = np.n1.at(y, x), b = p.i1.at(y, x);
            sa += a; sb += b; sab += a * b; saa += a * a; sbb += b * b;
            ++n;
        }
    const double corr = (sab - sa * sb / n) /
                        std::sqrt((saa - sa * sa / n) * (sbb - sb * sb / n));
    CHECK(corr > 0.99);
}

TEST_CASE("baseline: constant image collapses to zero through the envelope floor") {
    FringePair p;
    p.i1 = RealField(64, 64, 0.75);
    p.i2 = RealField(64, 64, 0.75);
    NormalizedPair np = baseline_normalize(p);
    // the 1e-6 envelope floor amplifies smoothing round-off; zero up to that
    for (size_t i = 0; i < np.n1.size(); ++i)
        CHECK(std::fabs(np.n1[i]) < 1e-9);
}

TEST_CASE("baseline: background bump is removed") {
    FringeModel m = tone_model(35.0, 384, kPi / 3.0, 0.5, 1.0);
    m.background.bump_min = 0.4;
    m.background.bump_max = 0.4;
    FringePair p = synth_pair(m, 384, 384);
    NormalizedPair np = baseline_normalize(p);
    CHECK(std::fabs(interior_mean(np.n1, 8)) < 0.02);
    CHECK(std::fabs(interior_mean(np.n2, 8)) < 0.02);
}

TEST_CASE("ingest: bit-identical round trip, clamping and errors") {
    namespace fs = std::filesystem;
    const std::string dir =
        (fs::temp_directory_path() / "fringe_ingest_test").string();
    fs::create_directories(dir);

    RealField f(32, 32);
    CounterRng rng(4);
    long expect_clamped = 0;
    for (size_t i = 0; i < f.size(); ++i) {
        f[i] = rng.uniform(-1.0, 1.0);
        if (i % 97 == 0) {
            f[i] = 2.0;  // out of the normalized range
            ++expect_clamped;
        }
    }
    write_pfm(f, dir + "/n1.pfm");
    write_pfm(f, dir + "/n2.pfm");
    NormalizedPair np = ingest_normalized(dir + "/n1.pfm", dir + "/n2.pfm");
    CHECK(np.clamped_pixels == 2 * expect_clamped);
    CHECK(np.border_margin == 0);
    CHECK_FALSE(np.has_analytic());
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 2.0)
            CHECK(np.n1[i] == 1.05);
        else
            CHECK(np.n1[i] == double(float(f[i])));
    }

    RealField g(32, 48, 0.0);
    write_pfm(g, dir + "/wide.pfm");
    CHECK_THROWS_AS(ingest_normalized(dir + "/n1.pfm", dir + "/wide.pfm"), ConfigError);
    CHECK_THROWS_AS(ingest_normalized(dir + "/n1.pfm", dir + "/missing.pfm"), IoError);
}

TEST_CASE("ideal normalizer produces exact analytic maps") {
    FringeModel m = tone_model(20.0, 96, 1.1);
    m.background = SmoothFieldSpec{0.5, 0.2, 0.2, 0.35};
    m.contrast = SmoothFieldSpec{1.0, 0.3, 0.3, 0.35};
    FringePair p = synth_pair(m, 96, 96);
    NormalizedPair np = ideal_normalize(p);
    REQUIRE(np.has_analytic());
    for (size_t i = 0; i < np.n1.size(); ++i) {
        CHECK(np.n1[i] == std::cos(np.analytic->psi1[i]));
        CHECK(np.analytic->mag1[i] == 1.0);
        CHECK(np.analytic->psi1[i] >= -kPi);
        CHECK(np.analytic->psi1[i] < kPi);
    }
    FringePair no_truth;
    no_truth.i1 = p.i1;
    no_truth.i2 = p.i2;
    CHECK_THROWS_AS(ideal_normalize(no_truth), ConfigError);
}

TEST_CASE("gaussian blur preserves constants and requires sigma >= 1") {
    RealField f(48, 48, 0.37);
    RealField g = gaussian_blur(f, 5.0);
    for (size_t i = 0; i < g.size(); ++i)
        CHECK(g[i] == doctest::Approx(0.37).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_blur(f, 0.5), ConfigError);
}
