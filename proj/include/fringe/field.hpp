#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fringe/errors.hpp"

namespace fringe {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Minimum side length of a RealField in pixels.
inline constexpr int kMinFieldSide = 16;

/// Wraps an angle into [-pi, pi) by adding the unique integer multiple of 2*pi.
inline double wrap(double z) {
    if (!std::isfinite(z))
        throw ConfigError("wrap: non-finite input");
    double w = z - kTwoPi * std::floor((z + kPi) / kTwoPi);
    // floor rounding can leave the result on the closed upper boundary
    if (w >= kPi) w -= kTwoPi;
    if (w < -kPi) w += kTwoPi;
    return w;
}

/// A 2D grid of real samples in row-major order. Depending on role the
/// samples are dimensionless intensities or radians.
class RealField {
public:
    RealField() = default;

    RealField(int height, int width, double fill = 0.0)
        : height_(height), width_(width) {
        check_dims(height, width);
        samples_.assign(static_cast<size_t>(height) * width, fill);
    }

    RealField(int height, int width, std::vector<double> samples)
        : height_(height), width_(width), samples_(std::move(samples)) {
        check_dims(height, width);
        if (samples_.size() != static_cast<size_t>(height) * width)
            throw ConfigError("RealField: sample count does not match dimensions");
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    double& at(int y, int x) { return samples_[static_cast<size_t>(y) * width_ + x]; }
    double at(int y, int x) const { return samples_[static_cast<size_t>(y) * width_ + x]; }
    double& operator[](size_t i) { return samples_[i]; }
    double operator[](size_t i) const { return samples_[i]; }

    const std::vector<double>& samples() const noexcept { return samples_; }
    std::vector<double>& samples() noexcept { return samples_; }
    const double* data() const noexcept { return samples_.data(); }
    double* data() noexcept { return samples_.data(); }

    bool same_dims(const RealField& o) const noexcept {
        return height_ == o.height_ && width_ == o.width_;
    }

    /// Throws if any sample is NaN or infinite.
    void validate_finite(const char* what) const {
        for (double v : samples_)
            if (!std::isfinite(v))
                throw ConfigError(std::string(what) + ": non-finite sample");
    }

private:
    static void check_dims(int h, int w) {
        if (h < kMinFieldSide || w < kMinFieldSide)
            throw ConfigError("RealField: dimensions must be at least 16x16");
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<double> samples_;
};

/// A wrapped phase map: every sample lies in [-pi, pi).
struct PhaseMap {
    RealField phi;
};

/// Mean over the interior of a field, excluding a border margin on all sides.
double interior_mean(const RealField& f, int margin);

/// Copies the interior of a field (margin excluded). margin == 0 is a plain copy.
RealField interior_crop(const RealField& f, int margin);

/// Collects interior sample values into a flat vector.
std::vector<double> interior_values(const RealField& f, int margin);

}  // namespace fringe
