#include "fringe/field.hpp"

namespace fringe {

static void check_margin(const RealField& f, int margin) {
    if (margin < 0 || 2 * margin >= f.height() || 2 * margin >= f.width())
        throw ConfigError("interior margin leaves no pixels");
}

double interior_mean(const RealField& f, int margin) {
    check_margin(f, margin);
    double sum = 0.0;
    long n = 0;
    for (int y = margin; y < f.height() - margin; ++y)
        for (int x = margin; x < f.width() - margin; ++x) {
            sum += f.at(y, x);
            ++n;
        }
    return sum / static_cast<double>(n);
}

RealField interior_crop(const RealField& f, int margin) {
    check_margin(f, margin);
    if (margin == 0) return f;
    int h = f.height() - 2 * margin;
    int w = f.width() - 2 * margin;
    RealField out(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(y, x) = f.at(y + margin, x + margin);
    return out;
}

std::vector<double> interior_values(const RealField& f, int margin) {
    check_margin(f, margin);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(f.height() - 2 * margin) *
                (f.width() - 2 * margin));
    for (int y = margin; y < f.height() - margin; ++y)
        for (int x = margin; x < f.width() - margin; ++x)
            out.push_back(f.at(y, x));
    return out;
}

}  // namespace fringe
