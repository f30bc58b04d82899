#include <algorithm>
#include <cmath>
#include <vector>

#include "src/estimators/common.hpp"

namespace fringe {

namespace {

// |W(psi2 - psi1)| over the interior, the shared map of the robust methods
std::vector<double> abs_wrapped_difference(const NormalizedPair& pair,
                                           const AnalyticMaps& maps) {
    const int m = pair.border_margin;
    std::vector<double> d;
    d.reserve(static_cast<size_t>(pair.n1.height() - 2 * m) *
              (pair.n1.width() - 2 * m));
    for (int y = m; y < pair.n1.height() - m; ++y)
        for (int x = m; x < pair.n1.width() - m; ++x)
            d.push_back(std::fabs(wrap(maps.psi2.at(y, x) - maps.psi1.at(y, x))));
    return d;
}

RealField interior_map(const NormalizedPair& pair, const std::vector<double>& values) {
    const int m = pair.border_margin;
    const int h = pair.n1.height() - 2 * m, w = pair.n1.width() - 2 * m;
    if (h < kMinFieldSide || w < kMinFieldSide)
        return RealField();
    return RealField(h, w, std::vector<double>(values));
}

}  // namespace

StepEstimate estimate_ire(const NormalizedPair& pair, const IreConfig& cfg) {
    detail::check_pair(pair);
    if (!(cfg.kappa > 0.0) || !(cfg.tolerance > 0.0) || cfg.max_iterations < 1)
        throw ConfigError("ire: kappa, tolerance and max_iterations must be positive");
    const AnalyticMaps& maps = detail::require_analytic(pair, "ire");
    const std::vector<double> d = abs_wrapped_difference(pair, maps);

    // unit weights first: the first iterate is the plain mean
    double delta = 0.0;
    for (double v : d) delta += v;
    delta /= static_cast<double>(d.size());

    StepEstimate e;
    e.diagnostics.iterations = 1;
    const double k2 = cfg.kappa * cfg.kappa;
    for (int it = 1; it < cfg.max_iterations; ++it) {
        double wsum = 0.0, wdsum = 0.0;
        for (double v : d) {
            const double r = v - delta;
            const double t = cfg.kappa + r * r;
            const double wgt = k2 / (t * t);
            wsum += wgt;
            wdsum += wgt * v;
        }
        const double next = wdsum / wsum;
        ++e.diagnostics.iterations;
        const bool done = std::fabs(next - delta) < cfg.tolerance;
        delta = next;
        if (done)
            break;
    }
    e.delta = delta;
    e.diagnostics.samples_used = static_cast<long>(d.size());
    RealField map = interior_map(pair, d);
    if (!map.empty())
        e.step_map = std::move(map);
    detail::flag_if_degenerate(e);
    return e;
}

StepEstimate estimate_mre(const NormalizedPair& pair) {
    detail::check_pair(pair);
    const AnalyticMaps& maps = detail::require_analytic(pair, "mre");
    std::vector<double> d = abs_wrapped_difference(pair, maps);
    RealField map = interior_map(pair, d);

    const size_t n = d.size();
    const size_t mid = n / 2;
    std::nth_element(d.begin(), d.begin() + mid, d.end());
    double med = d[mid];
    if (n % 2 == 0) {
        // even count: average of the two middle order statistics
        double lower = *std::max_element(d.begin(), d.begin() + mid);
        med = 0.5 * (med + lower);
    }

    StepEstimate e;
    e.delta = med;
    e.diagnostics.samples_used = static_cast<long>(n);
    if (!map.empty())
        e.step_map = std::move(map);
    detail::flag_if_degenerate(e);
    return e;
}

StepEstimate estimate_tse(const NormalizedPair& pair, double gauss_sigma) {
    detail::check_pair(pair);
    if (!(gauss_sigma >= 1.0))
        throw ConfigError("tse: gauss_sigma must be >= 1 pixel");

    const int h = pair.n1.height(), w = pair.n1.width();
    RealField prod(h, w), sumsq(h, w);
    for (size_t i = 0; i < prod.size(); ++i) {
        prod[i] = 2.0 * pair.n1[i] * pair.n2[i];
        sumsq[i] = pair.n1[i] * pair.n1[i] + pair.n2[i] * pair.n2[i];
    }
    RealField num = gaussian_blur(prod, gauss_sigma);
    RealField den = gaussian_blur(sumsq, gauss_sigma);

    const int m = pair.border_margin;
    const int ih = h - 2 * m, iw = w - 2 * m;
    const bool want_map = ih >= kMinFieldSide && iw >= kMinFieldSide;
    RealField map = want_map ? RealField(ih, iw) : RealField();

    StepEstimate e;
    double sum = 0.0;
    long count = 0;
    for (int y = m; y < h - m; ++y)
        for (int x = m; x < w - m; ++x) {
            const double dn = den.at(y, x);
            if (dn < 1e-6)
                throw DegenerateInputError("tse: smoothed denominator vanished");
            const double d =
                detail::safe_acos(num.at(y, x) / dn, e.diagnostics.clamp_count);
            if (want_map)
                map.at(y - m, x - m) = d;
            sum += d;
            ++count;
        }
    e.delta = sum / count;
    e.diagnostics.samples_used = count;
    if (want_map)
        e.step_map = std::move(map);
    detail::flag_if_degenerate(e);
    return e;
}

RealField rk_step_map(const NormalizedPair& pair) {
    detail::check_pair(pair);
    const AnalyticMaps& maps = detail::require_analytic(pair, "rk_step_map");
    const int h = pair.n1.height(), w = pair.n1.width();
    RealField out(h, w);
    for (size_t i = 0; i < out.size(); ++i) {
        // the cos/sin product form of the Fourier method's step map
        const double c1 = std::cos(maps.psi1[i]), s1 = std::sin(maps.psi1[i]);
        const double c2 = std::cos(maps.psi2[i]), s2 = std::sin(maps.psi2[i]);
        out[i] = std::fabs(std::atan2(c1 * s2 - s1 * c2, c1 * c2 + s1 * s2));
    }
    return out;
}

}  // namespace fringe
