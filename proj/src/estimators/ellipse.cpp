#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "src/estimators/common.hpp"

namespace fringe {

namespace {

struct XySamples {
    std::vector<double> x, y;
};

// per-pixel Lissajous coordinates: x = n1 + n2, y = n1 - n2
XySamples lissajous_samples(const NormalizedPair& pair) {
    const int m = pair.border_margin;
    XySamples s;
    const size_t n = static_cast<size_t>(pair.n1.height() - 2 * m) *
                     (pair.n1.width() - 2 * m);
    s.x.reserve(n);
    s.y.reserve(n);
    for (int yy = m; yy < pair.n1.height() - m; ++yy)
        for (int xx = m; xx < pair.n1.width() - m; ++xx) {
            s.x.push_back(pair.n1.at(yy, xx) + pair.n2.at(yy, xx));
            s.y.push_back(pair.n1.at(yy, xx) - pair.n2.at(yy, xx));
        }
    return s;
}

double step_from_axis_ratio(double theta1, double theta2) {
    return 2.0 * std::atan(std::sqrt(theta1 / theta2));
}

}  // namespace

StepEstimate estimate_slef(const NormalizedPair& pair, bool robust, double kappa) {
    detail::check_pair(pair);
    if (!(kappa > 0.0))
        throw ConfigError("slef: kappa must be positive");
    const XySamples s = lissajous_samples(pair);
    const size_t n = s.x.size();

    std::vector<double> wgt(n, 1.0);
    double th1 = 0.0, th2 = 0.0;
    const int rounds = robust ? 20 : 1;
    const double k2 = kappa * kappa;
    StepEstimate e;
    for (int it = 0; it < rounds; ++it) {
        // weighted normal equations of  th1*x^2 + th2*y^2 = 1
        double sxxxx = 0, sxxyy = 0, syyyy = 0, sxx = 0, syy = 0;
        for (size_t i = 0; i < n; ++i) {
            const double x2 = s.x[i] * s.x[i], y2 = s.y[i] * s.y[i], w = wgt[i];
            sxxxx += w * x2 * x2;
            sxxyy += w * x2 * y2;
            syyyy += w * y2 * y2;
            sxx += w * x2;
            syy += w * y2;
        }
        const double det = sxxxx * syyyy - sxxyy * sxxyy;
        if (!(std::fabs(det) > 1e-12 * std::max(1.0, sxxxx * syyyy)))
            throw DegenerateInputError("slef: singular normal equations");
        const double next1 = (syyyy * sxx - sxxyy * syy) / det;
        const double next2 = (sxxxx * syy - sxxyy * sxx) / det;
        const bool done = it > 0 && std::fabs(next1 - th1) < 1e-12 &&
                          std::fabs(next2 - th2) < 1e-12;
        th1 = next1;
        th2 = next2;
        ++e.diagnostics.iterations;
        if (done || !robust)
            break;
        for (size_t i = 0; i < n; ++i) {
            const double r = th1 * s.x[i] * s.x[i] + th2 * s.y[i] * s.y[i] - 1.0;
            const double t = kappa + r * r;
            wgt[i] = k2 / (t * t);
        }
    }
    if (th1 <= 0.0 || th2 <= 0.0)
        throw EstimatorError("slef: fitted coefficients are not an ellipse");

    e.delta = step_from_axis_ratio(th1, th2);
    e.diagnostics.samples_used = static_cast<long>(n);
    e.diagnostics.root_candidates = {th1, th2};
    detail::flag_if_degenerate(e);
    return e;
}

StepEstimate estimate_lef_full(const NormalizedPair& pair) {
    detail::check_pair(pair);
    const XySamples s = lissajous_samples(pair);
    const size_t n = s.x.size();

    // th1*x^2 + th2*y^2 + th3*x + th4*y = 1  (theta5 normalized to -1)
    Eigen::Matrix4d ata = Eigen::Matrix4d::Zero();
    Eigen::Vector4d atb = Eigen::Vector4d::Zero();
    for (size_t i = 0; i < n; ++i) {
        Eigen::Vector4d row(s.x[i] * s.x[i], s.y[i] * s.y[i], s.x[i], s.y[i]);
        ata += row * row.transpose();
        atb += row;
    }
    Eigen::FullPivLU<Eigen::Matrix4d> lu(ata);
    if (!lu.isInvertible())
        throw DegenerateInputError("lef: rank-deficient normal equations");
    const Eigen::Vector4d theta = lu.solve(atb);

    if (!(theta[0] / theta[1] > 0.0))
        throw EstimatorError("lef: axis-ratio argument is not positive");

    StepEstimate e;
    e.delta = 2.0 * std::atan(std::sqrt(theta[0] / theta[1]));
    e.diagnostics.samples_used = static_cast<long>(n);
    e.diagnostics.root_candidates = {theta[0], theta[1], theta[2], theta[3], -1.0};
    detail::flag_if_degenerate(e);
    return e;
}

}  // namespace fringe
