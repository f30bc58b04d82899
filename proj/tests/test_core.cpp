#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fringe/field.hpp"
#include "fringe/normalize.hpp"
#include "fringe/phase.hpp"
#include "fringe/rng.hpp"
#include "fringe/synth.hpp"

using namespace fringe;

namespace {

// degenerate model: a = 0, b = 1, no noise
FringeModel plain_model(double delta, double sigma = 0.0, uint64_t seed = 1) {
    FringeModel m;
    m.phase.kind = PhaseKind::LinearRamp;
    m.phase.fringes = 12.0;
    m.phase.orientation = 0.3;
    m.background = SmoothFieldSpec{0.0, 0.0, 0.0, 0.35};
    m.contrast = SmoothFieldSpec{1.0, 0.0, 0.0, 0.35};
    m.delta = delta;
    m.noise_sigma = sigma;
    m.seed = seed;
    return m;
}

}  // namespace

TEST_CASE("wrap maps angles into [-pi, pi)") {
    CHECK(wrap(0.0) == 0.0);
    CHECK(wrap(3.5 * kPi) == doctest::Approx(-0.5 * kPi).epsilon(1e-12));
    // boundary just below -pi lands just below +pi
    CHECK(wrap(-kPi - 1e-9) == doctest::Approx(kPi - 1e-9).epsilon(1e-12));
    CHECK(wrap(kPi) == doctest::Approx(-kPi));
    CHECK(wrap(-kPi) == doctest::Approx(-kPi));
}

TEST_CASE("wrap is idempotent and 2pi-periodic") {
    CounterRng rng(42);
    for (int i = 0; i < 2000; ++i) {
        const double z = rng.uniform(-50.0, 50.0);
        const double w = wrap(z);
        CHECK(w >= -kPi);
        CHECK(w < kPi);
        CHECK(wrap(w) == doctest::Approx(w).epsilon(1e-15));
        const int k = static_cast<int>(rng.below(7)) - 3;
        CHECK(wrap(z + kTwoPi * k) == doctest::Approx(w).epsilon(1e-9));
    }
    CHECK_THROWS_AS(wrap(std::nan("")), ConfigError);
    CHECK_THROWS_AS(wrap(INFINITY), ConfigError);
}

TEST_CASE("RealField enforces its invariants") {
    CHECK_THROWS_AS(RealField(8, 64), ConfigError);
    CHECK_THROWS_AS(RealField(64, 8), ConfigError);
    RealField f(16, 16, 1.0);
    CHECK(f.size() == 256);
    f.at(3, 4) = std::nan("");
    CHECK_THROWS_AS(f.validate_finite("test"), ConfigError);
}

TEST_CASE("synth_pair with degenerate background/noise is the bare cosine model") {
    FringeModel m = plain_model(kPi / 3.0);
    FringePair p = synth_pair(m, 64, 64);
    REQUIRE(p.ground_truth.has_value());
    const RealField& phi = p.ground_truth->phi;
    CHECK(p.ground_truth->delta == kPi / 3.0);
    for (size_t i = 0; i < phi.size(); ++i) {
        CHECK(p.i1[i] == std::cos(phi[i]));
        CHECK(p.i2[i] == std::cos(phi[i] + kPi / 3.0));
        CHECK(p.i1[i] >= -1.0);
        CHECK(p.i1[i] <= 1.0);
    }
}

TEST_CASE("synth_pair is byte-deterministic for a fixed seed") {
    FringeModel m = plain_model(kPi / 3.0, 0.5, 77);
    FringePair a = synth_pair(m, 64, 64);
    FringePair b = synth_pair(m, 64, 64);
    CHECK(a.i1.samples() == b.i1.samples());
    CHECK(a.i2.samples() == b.i2.samples());

    m.seed = 78;
    FringePair c = synth_pair(m, 64, 64);
    CHECK(a.i1.samples() != c.i1.samples());
}

TEST_CASE("synthesized noise variance matches sigma^2 within 2% at 1024^2") {
    const double sigma = 0.5;
    FringeModel noisy = plain_model(kPi / 3.0, sigma, 11);
    FringeModel clean = plain_model(kPi / 3.0, 0.0, 11);
    FringePair pn = synth_pair(noisy, 1024, 1024);
    FringePair pc = synth_pair(clean, 1024, 1024);
    double sum = 0.0, sumsq = 0.0;
    const size_t n = pn.i1.size();
    for (size_t i = 0; i < n; ++i) {
        const double d = pn.i1[i] - pc.i1[i];
        sum += d;
        sumsq += d * d;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.02));
}

TEST_CASE("synth rejects invalid model parameters") {
    FringeModel m = plain_model(kPi / 3.0);
    m.delta = 0.0;
    CHECK_THROWS_AS(synth_pair(m, 64, 64), ConfigError);
    m = plain_model(kPi / 3.0);
    m.delta = kPi;
    CHECK_THROWS_AS(synth_pair(m, 64, 64), ConfigError);
    m = plain_model(kPi / 3.0);
    m.noise_sigma = -0.1;
    CHECK_THROWS_AS(synth_pair(m, 64, 64), ConfigError);
    m = plain_model(kPi / 3.0);
    m.contrast_floor = 0.05;
    CHECK_THROWS_AS(synth_pair(m, 64, 64), ConfigError);
}

TEST_CASE("compute_phase: vanishing numerator pixel") {
    // a pixel with n1 = 1, n2 = cos(delta) encodes phi = 0
    const double delta = 0.7;
    NormalizedPair np;
    np.n1 = RealField(16, 16, 1.0);
    np.n2 = RealField(16, 16, std::cos(delta));
    PhaseMap pm = compute_phase(np, delta);
    for (size_t i = 0; i < pm.phi.size(); ++i)
        CHECK(pm.phi[i] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("compute_phase inverts the normalized model to 1e-9") {
    FringeModel m = plain_model(kPi / 3.0);
    FringePair p = synth_pair(m, 96, 96);
    for (double delta : {0.1, kPi / 3.0, kPi / 2.0, 2.5, kPi - 0.1}) {
        m.delta = delta;
        p = synth_pair(m, 96, 96);
        NormalizedPair np = ideal_normalize(p);
        PhaseMap pm = compute_phase(np, delta);
        double worst = 0.0;
        for (size_t i = 0; i < pm.phi.size(); ++i)
            worst = std::max(worst,
                             std::fabs(wrap(pm.phi[i] - p.ground_truth->phi[i])));
        CHECK(worst < 1e-9);
        for (size_t i = 0; i < pm.phi.size(); ++i) {
            CHECK(pm.phi[i] >= -kPi);
            CHECK(pm.phi[i] < kPi);
        }
    }
}

TEST_CASE("compute_phase rejects singular steps and bad dims") {
    NormalizedPair np;
    np.n1 = RealField(16, 16, 0.5);
    np.n2 = RealField(16, 16, 0.5);
    CHECK_THROWS_AS(compute_phase(np, 0.0), ConfigError);
    CHECK_THROWS_AS(compute_phase(np, kPi), ConfigError);
    CHECK_THROWS_AS(compute_phase(np, -0.5), ConfigError);
    np.n2 = RealField(16, 24, 0.5);
    CHECK_THROWS_AS(compute_phase(np, 1.0), ConfigError);
}

TEST_CASE("phase_error_map wraps differences") {
    RealField a(16, 16);
    CounterRng rng(5);
    for (size_t i = 0; i < a.size(); ++i)
        a[i] = rng.uniform(-kPi, kPi);
    PhaseMap pa{a};

    RealField same = a;
    RealField err = phase_error_map(PhaseMap{same}, pa);
    for (size_t i = 0; i < err.size(); ++i)
        CHECK(err[i] == 0.0);

    RealField shifted = a;
    for (size_t i = 0; i < shifted.size(); ++i)
        shifted[i] += kPi / 4.0;
    err = phase_error_map(PhaseMap{shifted}, pa);
    for (size_t i = 0; i < err.size(); ++i)
        CHECK(err[i] == doctest::Approx(kPi / 4.0).epsilon(1e-12));

    RealField periodic = a;
    for (size_t i = 0; i < periodic.size(); ++i)
        periodic[i] += kTwoPi;
    err = phase_error_map(PhaseMap{periodic}, pa);
    for (size_t i = 0; i < err.size(); ++i)
        CHECK(err[i] == doctest::Approx(0.0).epsilon(1e-9));

    PhaseMap small{RealField(16, 24, 0.0)};
    CHECK_THROWS_AS(phase_error_map(small, pa), ConfigError);
}

TEST_CASE("quadratic generator matches its own coefficient expansion") {
    PhaseSpec spec;
    spec.kind = PhaseKind::Quadratic;
    spec.peak = 25.0;
    spec.offset = 0.4;
    const int n = 128;
    RealField phi = synth_phase(spec, n, n, 1);
    const double x0 = 80.5, y0 = 33.0;
    const auto c = quadratic_coefficients_at(spec, n, n, x0, y0);
    CounterRng rng(9);
    for (int i = 0; i < 200; ++i) {
        const int x = static_cast<int>(rng.below(n));
        const int y = static_cast<int>(rng.below(n));
        const double dx = x - x0, dy = y - y0;
        const double val = c[0] + c[1] * dx + c[2] * dy + c[3] * dx * dx +
                           c[4] * dx * dy + c[5] * dy * dy;
        CHECK(val == doctest::Approx(phi.at(y, x)).epsilon(1e-12));
    }
}

TEST_CASE("counter rng: streams are independent of call interleaving") {
    CounterRng a(derive_seed(123, {1}));
    CounterRng b(derive_seed(123, {2}));
    std::vector<double> av, bv;
    for (int i = 0; i < 16; ++i) av.push_back(a.uniform());
    for (int i = 0; i < 16; ++i) bv.push_back(b.uniform());

    CounterRng a2(derive_seed(123, {1}));
    CounterRng b2(derive_seed(123, {2}));
    for (int i = 0; i < 16; ++i) {
        CHECK(a2.uniform() == av[size_t(i)]);
        CHECK(b2.uniform() == bv[size_t(i)]);
    }
    CHECK(av != bv);
}
