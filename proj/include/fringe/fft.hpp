#pragma once

#include <complex>
#include <vector>

namespace fringe {

/// In-place 2D complex FFT of a row-major height x width buffer.
/// sign = -1 forward, +1 inverse. The inverse is normalized by 1/(h*w).
/// Plans are created under a lock; execution is safe to run concurrently on
/// distinct buffers. Plan selection is deterministic across runs.
void fft2(std::complex<double>* data, int height, int width, int sign);

inline void fft2(std::vector<std::complex<double>>& data, int height, int width,
                 int sign) {
    fft2(data.data(), height, width, sign);
}

}  // namespace fringe
