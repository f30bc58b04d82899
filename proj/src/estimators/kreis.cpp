#include <cmath>
#include <complex>
#include <vector>

#include "fringe/fft.hpp"
#include "src/estimators/common.hpp"

namespace fringe {

namespace {

// signed bin index: 0..n/2 stay, the upper half maps to negative frequencies
inline double signed_bin(int k, int n) { return k <= n / 2 ? k : k - n; }

}  // namespace

StepEstimate estimate_kreis(const NormalizedPair& pair, int lowcut_radius) {
    detail::check_pair(pair);
    if (lowcut_radius < 1)
        throw ConfigError("kreis: lowcut_radius must be positive");

    const int h = pair.n1.height(), w = pair.n1.width();
    const size_t n = static_cast<size_t>(h) * w;
    std::vector<std::complex<double>> s1(n), s2(n);
    for (size_t i = 0; i < n; ++i) {
        s1[i] = pair.n1[i];
        s2[i] = pair.n2[i];
    }
    fft2(s1, h, w, -1);
    fft2(s2, h, w, -1);

    // dominant non-DC peak of frame 1 picks the half-plane to keep
    double peak_mag = 0.0, global_max = 0.0;
    double pu = 0.0, pv = 0.0;
    for (int y = 0; y < h; ++y) {
        const double fy = signed_bin(y, h);
        for (int x = 0; x < w; ++x) {
            const double fx = signed_bin(x, w);
            const double mag = std::abs(s1[static_cast<size_t>(y) * w + x]);
            global_max = std::max(global_max, mag);
            if (fx * fx + fy * fy <= double(lowcut_radius) * lowcut_radius)
                continue;
            if (mag > peak_mag) {
                peak_mag = mag;
                pu = fx;
                pv = fy;
            }
        }
    }
    if (peak_mag <= 1e-9 * global_max || peak_mag == 0.0)
        throw DegenerateInputError("kreis: no non-DC spectral peak above noise floor");

    // keep the open half-plane containing the peak; zero DC disk and the rest
    for (int y = 0; y < h; ++y) {
        const double fy = signed_bin(y, h);
        for (int x = 0; x < w; ++x) {
            const double fx = signed_bin(x, w);
            const bool in_dc = fx * fx + fy * fy <= double(lowcut_radius) * lowcut_radius;
            const bool keep = !in_dc && (fx * pu + fy * pv) > 0.0;
            if (!keep) {
                s1[static_cast<size_t>(y) * w + x] = 0.0;
                s2[static_cast<size_t>(y) * w + x] = 0.0;
            }
        }
    }
    fft2(s1, h, w, +1);
    fft2(s2, h, w, +1);

    const int m = pair.border_margin;
    RealField map(h - 2 * m >= kMinFieldSide ? h - 2 * m : h,
                  w - 2 * m >= kMinFieldSide ? w - 2 * m : w, 0.0);
    const bool cropped = map.height() == h - 2 * m && map.width() == w - 2 * m;
    double sum = 0.0;
    long count = 0;
    for (int y = m; y < h - m; ++y)
        for (int x = m; x < w - m; ++x) {
            const std::complex<double> c1 = s1[static_cast<size_t>(y) * w + x];
            const std::complex<double> c2 = s2[static_cast<size_t>(y) * w + x];
            const double num = c1.real() * c2.imag() - c1.imag() * c2.real();
            const double den = c1.real() * c2.real() + c1.imag() * c2.imag();
            double d = std::atan2(num, den);
            if (d >= kPi) d -= kTwoPi;
            if (cropped)
                map.at(y - m, x - m) = d;
            sum += d;
            ++count;
        }

    StepEstimate e;
    e.diagnostics.samples_used = count;
    e.delta = detail::fold_magnitude(sum / count);
    if (cropped)
        e.step_map = std::move(map);
    detail::flag_if_degenerate(e);
    return e;
}

}  // namespace fringe
