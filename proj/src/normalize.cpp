#include "fringe/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fringe/fft.hpp"
#include "fringe/io.hpp"

namespace fringe {

namespace {

// signed frequency (cycles/px) of bin k in an n-point transform
inline double bin_freq(int k, int n) {
    return (k <= n / 2 ? k : k - n) / static_cast<double>(n);
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.5 * sigma)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

}  // namespace

RealField gaussian_blur(const RealField& f, double sigma) {
    if (!(sigma >= 1.0))
        throw ConfigError("gaussian_blur: sigma must be >= 1 pixel");
    const auto kernel = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
    const int h = f.height(), w = f.width();

    RealField tmp(h, w), out(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                int xx = x + t;
                if (xx < 0) xx = -xx - 1;
                if (xx >= w) xx = 2 * w - 1 - xx;
                acc += kernel[t + radius] * f.at(y, xx);
            }
            tmp.at(y, x) = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                int yy = y + t;
                if (yy < 0) yy = -yy - 1;
                if (yy >= h) yy = 2 * h - 1 - yy;
                acc += kernel[t + radius] * tmp.at(yy, x);
            }
            out.at(y, x) = acc;
        }
    return out;
}

void GfbConfig::validate() const {
    if (orientations < 4)
        throw ConfigError("gfb: at least 4 orientations required");
    if (periods.empty())
        throw ConfigError("gfb: period list is empty");
    for (double t : periods)
        if (!(t >= 4.0))
            throw ConfigError("gfb: all periods must be >= 4 pixels");
    if (!(envelope_ratio > 0.0 && envelope_ratio <= 1.0))
        throw ConfigError("gfb: envelope_ratio must lie in (0, 1]");
    if (!(dc_removal_sigma >= 1.0))
        throw ConfigError("gfb: dc_removal_sigma must be >= 1 pixel");
}

double GfbConfig::max_period() const {
    return *std::max_element(periods.begin(), periods.end());
}

namespace {

struct GaborResponse {
    RealField psi;  // angle of the strongest response
    RealField mag;  // its magnitude
};

// Filters one frame through the whole bank: local-mean suppression, zero-pad
// to 2h x 2w, one forward FFT, then per filter a frequency-domain multiply and
// inverse FFT. The response of maximum magnitude across the bank wins per
// pixel.
//
// The pad region is zero, not mirrored: a mirrored extension carries the
// conjugate of the local tone, which stalls the analytic response's phase near
// the border and lets off-period filters win the argmax there. With a
// zero-padded, mean-free signal a matched filter keeps the exact tone phase at
// the border and only its magnitude tapers.
GaborResponse gfb_demodulate(const RealField& img, const GfbConfig& cfg) {
    const int h = img.height(), w = img.width();
    const int ph = 2 * h, pw = 2 * w;
    const size_t pn = static_cast<size_t>(ph) * pw;

    // local mean via mirrored separable smoothing, subtracted before padding
    RealField mean = gaussian_blur(img, cfg.dc_removal_sigma);

    std::vector<std::complex<double>> spectrum(pn, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            spectrum[static_cast<size_t>(y) * pw + x] = img.at(y, x) - mean.at(y, x);
    fft2(spectrum, ph, pw, -1);

    // residual-DC suppression: multiply by (1 - Gaussian low-pass)
    {
        const double c = 2.0 * kPi * kPi * cfg.dc_removal_sigma * cfg.dc_removal_sigma;
        for (int y = 0; y < ph; ++y) {
            const double fy = bin_freq(y, ph);
            for (int x = 0; x < pw; ++x) {
                const double fx = bin_freq(x, pw);
                spectrum[static_cast<size_t>(y) * pw + x] *=
                    1.0 - std::exp(-c * (fx * fx + fy * fy));
            }
        }
    }

    GaborResponse r{RealField(h, w, 0.0), RealField(h, w, -1.0)};
    std::vector<std::complex<double>> work(pn);

    for (int oi = 0; oi < cfg.orientations; ++oi) {
        const double theta = oi * kPi / cfg.orientations;
        const double ct = std::cos(theta), st = std::sin(theta);
        for (double tau : cfg.periods) {
            const double u0 = ct / tau, v0 = st / tau;  // center frequency
            const double sg = cfg.envelope_ratio * tau;  // spatial envelope
            const double c = 2.0 * kPi * kPi * sg * sg;
            // single positive-frequency lobe: the response is analytic and its
            // angle is the local fringe phase
            for (int y = 0; y < ph; ++y) {
                const double fy = bin_freq(y, ph);
                for (int x = 0; x < pw; ++x) {
                    const double fx = bin_freq(x, pw);
                    const double du = fx - u0, dv = fy - v0;
                    const double t = c * (du * du + dv * dv);
                    const size_t i = static_cast<size_t>(y) * pw + x;
                    work[i] = t > 40.0 ? 0.0 : spectrum[i] * std::exp(-t);
                }
            }
            fft2(work, ph, pw, +1);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const std::complex<double> z = work[static_cast<size_t>(y) * pw + x];
                    const double m = std::abs(z);
                    if (m > r.mag.at(y, x)) {
                        r.mag.at(y, x) = m;
                        double a = std::arg(z);
                        if (a >= kPi) a -= kTwoPi;
                        r.psi.at(y, x) = a;
                    }
                }
        }
    }
    return r;
}

}  // namespace

NormalizedPair gfb_normalize(const FringePair& pair, const GfbConfig& cfg) {
    cfg.validate();
    if (!pair.i1.same_dims(pair.i2))
        throw ConfigError("gfb_normalize: frame dimensions differ");
    const double need = 4.0 * cfg.max_period();
    if (pair.i1.height() < need || pair.i1.width() < need)
        throw ConfigError("gfb_normalize: field smaller than 4x the largest period");

    GaborResponse r1 = gfb_demodulate(pair.i1, cfg);
    GaborResponse r2 = gfb_demodulate(pair.i2, cfg);

    NormalizedPair np;
    np.border_margin = kNormalizeBorderMargin;
    const int h = pair.i1.height(), w = pair.i1.width();
    np.n1 = RealField(h, w);
    np.n2 = RealField(h, w);
    for (size_t i = 0; i < np.n1.size(); ++i) {
        np.n1[i] = std::cos(r1.psi[i]);
        np.n2[i] = std::cos(r2.psi[i]);
    }
    np.analytic = AnalyticMaps{std::move(r1.psi), std::move(r2.psi),
                               std::move(r1.mag), std::move(r2.mag)};
    return np;
}

NormalizedPair baseline_normalize(const FringePair& pair, double bg_sigma,
                                  double env_sigma) {
    if (!(bg_sigma >= 1.0 && env_sigma >= 1.0))
        throw ConfigError("baseline_normalize: sigmas must be >= 1 pixel");
    if (!pair.i1.same_dims(pair.i2))
        throw ConfigError("baseline_normalize: frame dimensions differ");

    auto normalize_one = [&](const RealField& img) {
        RealField detrended = img;
        RealField bg = gaussian_blur(img, bg_sigma);
        for (size_t i = 0; i < detrended.size(); ++i)
            detrended[i] -= bg[i];
        RealField sq(img.height(), img.width());
        for (size_t i = 0; i < sq.size(); ++i)
            sq[i] = detrended[i] * detrended[i];
        RealField env = gaussian_blur(sq, env_sigma);
        for (size_t i = 0; i < detrended.size(); ++i) {
            // amplitude of a sinusoid from its local mean square
            double e = std::sqrt(std::max(2.0 * env[i], 0.0));
            if (e < 1e-6) e = 1e-6;
            detrended[i] = std::clamp(detrended[i] / e, -1.05, 1.05);
        }
        return detrended;
    };

    NormalizedPair np;
    np.n1 = normalize_one(pair.i1);
    np.n2 = normalize_one(pair.i2);
    np.border_margin = kNormalizeBorderMargin;
    return np;
}

NormalizedPair ingest_normalized(const std::string& path1, const std::string& path2) {
    NormalizedPair np;
    np.n1 = read_pfm(path1);
    np.n2 = read_pfm(path2);
    if (!np.n1.same_dims(np.n2))
        throw ConfigError("ingest_normalized: dimension mismatch between " + path1 +
                          " and " + path2);
    long clamped = 0;
    for (RealField* f : {&np.n1, &np.n2})
        for (size_t i = 0; i < f->size(); ++i) {
            double& v = (*f)[i];
            if (v < -1.05 || v > 1.05) {
                v = std::clamp(v, -1.05, 1.05);
                ++clamped;
            }
        }
    np.clamped_pixels = clamped;
    np.border_margin = 0;
    return np;
}

NormalizedPair ideal_normalize(const FringePair& pair) {
    if (!pair.ground_truth)
        throw ConfigError("ideal_normalize: pair carries no ground truth");
    const RealField& phi = pair.ground_truth->phi;
    const double delta = pair.ground_truth->delta;

    NormalizedPair np;
    np.border_margin = 0;
    const int h = phi.height(), w = phi.width();
    AnalyticMaps maps{RealField(h, w), RealField(h, w), RealField(h, w, 1.0),
                      RealField(h, w, 1.0)};
    np.n1 = RealField(h, w);
    np.n2 = RealField(h, w);
    for (size_t i = 0; i < phi.size(); ++i) {
        maps.psi1[i] = wrap(phi[i]);
        maps.psi2[i] = wrap(phi[i] + delta);
        np.n1[i] = std::cos(maps.psi1[i]);
        np.n2[i] = std::cos(maps.psi2[i]);
    }
    np.analytic = std::move(maps);
    return np;
}

}  // namespace fringe
