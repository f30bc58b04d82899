#include <cmath>
#include <vector>

#include "fringe/rng.hpp"
#include "src/estimators/common.hpp"

namespace fringe {

using detail::check_pair;
using detail::flag_if_degenerate;
using detail::safe_acos;
using detail::safe_asin;

StepEstimate estimate_psc(const NormalizedPair& pair) {
    check_pair(pair);
    const int m = pair.border_margin;
    double s1 = 0, s2 = 0;
    long n = 0;
    for (int y = m; y < pair.n1.height() - m; ++y)
        for (int x = m; x < pair.n1.width() - m; ++x) {
            s1 += pair.n1.at(y, x);
            s2 += pair.n2.at(y, x);
            ++n;
        }
    const double m1 = s1 / n, m2 = s2 / n;
    double v1 = 0, v2 = 0, cov = 0;
    for (int y = m; y < pair.n1.height() - m; ++y)
        for (int x = m; x < pair.n1.width() - m; ++x) {
            const double a = pair.n1.at(y, x) - m1;
            const double b = pair.n2.at(y, x) - m2;
            v1 += a * a;
            v2 += b * b;
            cov += a * b;
        }
    if (v1 / n < 1e-20 || v2 / n < 1e-20)
        throw DegenerateInputError("psc: zero variance in a frame");

    StepEstimate e;
    e.diagnostics.samples_used = n;
    e.delta = safe_acos(cov / std::sqrt(v1 * v2), e.diagnostics.clamp_count);
    flag_if_degenerate(e);
    return e;
}

StepEstimate estimate_gs(const NormalizedPair& pair) {
    check_pair(pair);
    const int m = pair.border_margin;
    const auto i1 = interior_values(pair.n1, m);
    const auto i2 = interior_values(pair.n2, m);
    const size_t n = i1.size();

    double n1sq = 0;
    for (double v : i1) n1sq += v * v;
    const double n1norm = std::sqrt(n1sq);
    if (n1norm < 1e-12)
        throw DegenerateInputError("gs: first frame has vanishing norm");

    double proj = 0;
    for (size_t i = 0; i < n; ++i) proj += i2[i] * (i1[i] / n1norm);

    // residual of the orthogonalization; vanishes when the frames are parallel
    std::vector<double> resid(n);
    double rsq = 0, n2sq = 0;
    for (size_t i = 0; i < n; ++i) {
        resid[i] = i2[i] - proj * (i1[i] / n1norm);
        rsq += resid[i] * resid[i];
        n2sq += i2[i] * i2[i];
    }
    const double rnorm = std::sqrt(rsq);
    if (rnorm < 1e-9 * std::max(1.0, std::sqrt(n2sq)))
        throw DegenerateInputError("gs: frames are parallel; step is unresolvable");

    StepEstimate e;
    double sum = 0;
    long used = 0;
    for (size_t i = 0; i < n; ++i) {
        const double den = i1[i] * (resid[i] / rnorm);
        if (std::fabs(den) < 1e-6)
            continue;
        sum += (i1[i] / n1norm) * resid[i] / den;
        ++used;
    }
    if (used == 0)
        throw DegenerateInputError("gs: no pixels with usable denominator");
    e.diagnostics.samples_used = used;
    e.delta = safe_asin(sum / used, e.diagnostics.clamp_count);
    flag_if_degenerate(e);
    return e;
}

StepEstimate estimate_evi(const NormalizedPair& pair, double extremum_guard) {
    check_pair(pair);
    if (!(extremum_guard > 0.0 && extremum_guard < 1.0))
        throw ConfigError("evi: extremum_guard must lie in (0, 1)");
    const int m = std::max(pair.border_margin, 1);
    const RealField& f = pair.n1;

    StepEstimate e;
    RealField map(interior_crop(f, pair.border_margin).height(),
                  interior_crop(f, pair.border_margin).width(), 0.0);
    // the raw EVI integrand on the whole interior; the estimate uses only
    // qualifying strict extrema
    for (int y = pair.border_margin; y < f.height() - pair.border_margin; ++y)
        for (int x = pair.border_margin; x < f.width() - pair.border_margin; ++x) {
            const double a = f.at(y, x);
            const double ratio = std::fabs(a) > 1e-12 ? pair.n2.at(y, x) / a : 1.0;
            map.at(y - pair.border_margin, x - pair.border_margin) =
                std::acos(std::clamp(ratio, -1.0, 1.0));
        }

    double sum = 0;
    long count = 0;
    for (int y = m; y < f.height() - m; ++y)
        for (int x = m; x < f.width() - m; ++x) {
            const double v = f.at(y, x);
            if (std::fabs(v) < extremum_guard)
                continue;
            bool is_max = true, is_min = true;
            for (int dy = -1; dy <= 1 && (is_max || is_min); ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!dy && !dx) continue;
                    const double nb = f.at(y + dy, x + dx);
                    if (nb >= v) is_max = false;
                    if (nb <= v) is_min = false;
                }
            if ((is_max && v >= extremum_guard) || (is_min && v <= -extremum_guard)) {
                sum += safe_acos(pair.n2.at(y, x) / v, e.diagnostics.clamp_count);
                ++count;
            }
        }
    if (count == 0)
        throw DegenerateInputError("evi: no qualifying local extrema");
    e.delta = sum / count;
    e.diagnostics.samples_used = count;
    e.step_map = std::move(map);
    flag_if_degenerate(e);
    return e;
}

StepEstimate estimate_rp(const NormalizedPair& pair, int n_samples, uint64_t seed) {
    check_pair(pair);
    if (n_samples < 100)
        throw ConfigError("rp: n_samples must be at least 100");
    const int m = pair.border_margin;
    const int ih = pair.n1.height() - 2 * m;
    const int iw = pair.n1.width() - 2 * m;
    if (ih <= 0 || iw <= 0)
        throw ConfigError("rp: empty interior");

    CounterRng rng(derive_seed(seed, {0x5250}));
    auto draw = [&](int& y, int& x) {
        y = m + static_cast<int>(rng.below(static_cast<uint64_t>(ih)));
        x = m + static_cast<int>(rng.below(static_cast<uint64_t>(iw)));
    };

    double sum_ab = 0, sum_aa = 0;
    long accepted = 0;
    const long max_attempts = 50L * n_samples;
    long attempts = 0;
    while (accepted < n_samples && attempts < max_attempts) {
        ++attempts;
        int py, px, qy, qx;
        draw(py, px);
        draw(qy, qx);
        const double p1 = pair.n1.at(py, px), p2 = pair.n2.at(py, px);
        const double q1 = pair.n1.at(qy, qx), q2 = pair.n2.at(qy, qx);
        if (std::fabs(p1 * p2 - q1 * q2) <= 1e-9)
            continue;
        const double a = 2.0 * (p1 * p2 - q1 * q2);
        const double b = p1 * p1 - q1 * q1 + p2 * p2 - q2 * q2;
        sum_ab += a * b;
        sum_aa += a * a;
        ++accepted;
    }
    if (accepted < 100)
        throw DegenerateInputError("rp: fewer than 100 accepted pairs");

    StepEstimate e;
    e.diagnostics.samples_used = accepted;
    e.delta = safe_acos(sum_ab / sum_aa, e.diagnostics.clamp_count);
    flag_if_degenerate(e);
    return e;
}

StepEstimate estimate_ddv(const NormalizedPair& pair) {
    check_pair(pair);
    const int m = pair.border_margin;
    const double m1 = interior_mean(pair.n1, m);
    const double m2 = interior_mean(pair.n2, m);
    double nd = 0, ns = 0;
    long n = 0;
    for (int y = m; y < pair.n1.height() - m; ++y)
        for (int x = m; x < pair.n1.width() - m; ++x) {
            const double a = pair.n1.at(y, x) - m1;
            const double b = pair.n2.at(y, x) - m2;
            nd += (a - b) * (a - b);
            ns += (a + b) * (a + b);
            ++n;
        }
    nd = std::sqrt(nd);
    ns = std::sqrt(ns);
    if (ns < 1e-9)
        throw DegenerateInputError("ddv: frame sum has vanishing norm (step near pi)");

    StepEstimate e;
    e.diagnostics.samples_used = n;
    // the diagonal ratio equals tan(delta/2); the factor 2 recovers delta
    e.delta = 2.0 * std::atan(nd / ns);
    flag_if_degenerate(e);
    return e;
}

StepEstimate estimate_gpsi(const NormalizedPair& pair) {
    check_pair(pair);
    const int m = pair.border_margin;
    double sb = 0, sc = 0;
    long n = 0;
    for (int y = m; y < pair.n1.height() - m; ++y)
        for (int x = m; x < pair.n1.width() - m; ++x) {
            const double a = pair.n1.at(y, x), b = pair.n2.at(y, x);
            sb += -2.0 * a * b;
            sc += a * a + b * b - 1.0;
            ++n;
        }
    const double B = sb / n, C = sc / n;
    double disc = B * B - 4.0 * C;
    if (disc < -1e-9)
        throw EstimatorError("gpsi: negative discriminant");
    if (disc < 0.0) disc = 0.0;
    const double root = std::sqrt(disc);

    StepEstimate e;
    e.diagnostics.samples_used = n;
    e.diagnostics.root_candidates = {(-B + root) / 2.0, (-B - root) / 2.0};
    double best = 0.0;
    bool found = false;
    for (double r : e.diagnostics.root_candidates) {
        if (std::fabs(r) > 1.05)
            continue;  // spurious root outside the cosine range
        r = detail::clamp_unit(r, e.diagnostics.clamp_count);
        // the valid root is cos(delta); the other is the fringe average, near 0
        if (!found || std::fabs(r) > std::fabs(best)) {
            best = r;
            found = true;
        }
    }
    if (!found)
        throw EstimatorError("gpsi: no root within the cosine range");
    e.delta = std::acos(best);
    flag_if_degenerate(e);
    return e;
}

}  // namespace fringe
