#include "fringe/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace fringe {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

void fft2(std::complex<double>* data, int height, int width, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        // FFTW_ESTIMATE keeps plan choice (and therefore output bits)
        // reproducible across runs and leaves the input intact.
        plan = fftw_plan_dft_2d(height, width, ptr, ptr,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (sign > 0) {
        const double norm = 1.0 / (static_cast<double>(height) * width);
        const size_t n = static_cast<size_t>(height) * width;
        for (size_t i = 0; i < n; ++i)
            data[i] *= norm;
    }
}

}  // namespace fringe
