#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "fringe/fft.hpp"
#include "fringe/rng.hpp"
#include "src/estimators/common.hpp"

namespace fringe {

namespace {

using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;

constexpr double kExtremumGuard = 0.95;
constexpr double kProcessNoise = 1e-8;
constexpr double kCovarianceLimit = 1e6;

struct Window {
    int x0 = 0, y0 = 0, side = 0;
};

// strict 3x3 local maxima of the first frame, the anchor candidates
std::vector<std::pair<int, int>> local_maxima(const RealField& f, int margin) {
    std::vector<std::pair<int, int>> out;
    const int m = std::max(margin, 1);
    for (int y = m; y < f.height() - m; ++y)
        for (int x = m; x < f.width() - m; ++x) {
            const double v = f.at(y, x);
            if (v < kExtremumGuard)
                continue;
            bool strict = true;
            for (int dy = -1; dy <= 1 && strict; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!dy && !dx) continue;
                    if (f.at(y + dy, x + dx) >= v) {
                        strict = false;
                        break;
                    }
                }
            if (strict)
                out.emplace_back(x, y);
        }
    return out;
}

// dominant non-DC frequency of the window, as angular rad/px, canonical sign
std::pair<double, double> dominant_frequency(const RealField& img, const Window& win) {
    const int s = win.side;
    std::vector<std::complex<double>> spec(static_cast<size_t>(s) * s);
    for (int y = 0; y < s; ++y)
        for (int x = 0; x < s; ++x)
            spec[static_cast<size_t>(y) * s + x] = img.at(win.y0 + y, win.x0 + x);
    fft2(spec, s, s, -1);
    double best = -1.0;
    int bu = 0, bv = 0;
    for (int y = 0; y < s; ++y) {
        const int fy = y <= s / 2 ? y : y - s;
        for (int x = 0; x < s; ++x) {
            const int fx = x <= s / 2 ? x : x - s;
            if (fx == 0 && fy == 0)
                continue;
            const double mag = std::abs(spec[static_cast<size_t>(y) * s + x]);
            if (mag > best) {
                best = mag;
                bu = fx;
                bv = fy;
            }
        }
    }
    if (bv < 0 || (bv == 0 && bu < 0)) {
        bu = -bu;
        bv = -bv;
    }
    return {kTwoPi * bu / s, kTwoPi * bv / s};
}

double residual_variance(const NormalizedPair& pair, const Window& win,
                         const Vec7& c) {
    const double half = 0.5 * (win.side - 1);
    double acc = 0.0;
    for (int y = 0; y < win.side; ++y)
        for (int x = 0; x < win.side; ++x) {
            const double xb = x - half, yb = y - half;
            const double common =
                c[1] * xb + c[2] * yb + c[3] * xb * xb + c[4] * xb * yb + c[5] * yb * yb;
            const double r1 = pair.n1.at(win.y0 + y, win.x0 + x) - std::cos(c[0] + common);
            const double r2 = pair.n2.at(win.y0 + y, win.x0 + x) - std::cos(c[6] + common);
            acc += r1 * r1 + r2 * r2;
        }
    return acc / (2.0 * win.side * win.side);
}

}  // namespace

StepEstimate estimate_qpp(const NormalizedPair& pair, int window, uint64_t seed) {
    detail::check_pair(pair);
    const int m = pair.border_margin;
    const int h = pair.n1.height(), w = pair.n1.width();
    if (window < 8)
        throw ConfigError("qpp: window must be at least 8 pixels");
    if (window + 2 * m > h || window + 2 * m > w)
        throw ConfigError("qpp: window does not fit inside the interior");

    const auto maxima = local_maxima(pair.n1, m);
    if (maxima.empty())
        throw DegenerateInputError("qpp: no local maximum to anchor the window");

    CounterRng rng(derive_seed(seed, {0x515050}));
    const auto [ax, ay] = maxima[rng.below(maxima.size())];
    Window win;
    win.side = window;
    win.x0 = std::clamp(ax - window / 2, m, w - m - window);
    win.y0 = std::clamp(ay - window / 2, m, h - m - window);

    // state: phi1 = c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2, phi2 swaps c0 for c6
    Vec7 c = Vec7::Zero();
    c[6] = 1.0;
    const auto [fu, fv] = dominant_frequency(pair.n1, win);
    c[1] = fu;
    c[2] = fv;

    Mat7 P = Mat7::Zero();
    const double pdiag[7] = {kPi * kPi, 1.0, 1.0, 0.1, 0.1, 0.1, kPi * kPi};
    for (int i = 0; i < 7; ++i) P(i, i) = pdiag[i];

    const double half = 0.5 * (win.side - 1);
    const Mat7 Q = Mat7::Identity() * kProcessNoise;

    StepEstimate e;
    for (int sweep = 0; sweep < 2; ++sweep) {
        // measurement noise from the current model's residuals in the window
        const double R = std::max(1e-4, residual_variance(pair, win, c));
        for (int y = 0; y < win.side; ++y)
            for (int x = 0; x < win.side; ++x) {
                const double xb = x - half, yb = y - half;
                const double common = c[1] * xb + c[2] * yb + c[3] * xb * xb +
                                      c[4] * xb * yb + c[5] * yb * yb;
                const double phi1 = c[0] + common;
                const double phi2 = c[6] + common;

                Eigen::Matrix<double, 2, 7> H;
                const double g1 = -std::sin(phi1), g2 = -std::sin(phi2);
                H << g1, g1 * xb, g1 * yb, g1 * xb * xb, g1 * xb * yb, g1 * yb * yb, 0.0,
                     0.0, g2 * xb, g2 * yb, g2 * xb * xb, g2 * xb * yb, g2 * yb * yb, g2;

                P += Q;
                const Eigen::Matrix2d S =
                    H * P * H.transpose() + Eigen::Matrix2d::Identity() * R;
                const Eigen::Matrix<double, 7, 2> K = P * H.transpose() * S.inverse();
                Eigen::Vector2d innov(pair.n1.at(win.y0 + y, win.x0 + x) - std::cos(phi1),
                                      pair.n2.at(win.y0 + y, win.x0 + x) - std::cos(phi2));
                c += K * innov;
                P = (Mat7::Identity() - K * H) * P;
                P = 0.5 * (P + P.transpose());
            }
        ++e.diagnostics.iterations;
        if (P.cwiseAbs().maxCoeff() > kCovarianceLimit)
            throw EstimatorError("qpp: filter divergence (covariance blew up)");
    }

    e.delta = detail::fold_magnitude(c[6] - c[0]);
    e.diagnostics.samples_used = static_cast<long>(win.side) * win.side;
    e.diagnostics.window_origin = {win.x0, win.y0};
    e.diagnostics.coefficients.assign(c.data(), c.data() + 7);
    detail::flag_if_degenerate(e);
    return e;
}

}  // namespace fringe
