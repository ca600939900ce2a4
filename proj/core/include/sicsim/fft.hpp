#pragma once

#include <complex>
#include <vector>

namespace sicsim::fft {

/// In-place forward DFT (unscaled).
void forward_inplace(std::vector<std::complex<double>>& v);

/// In-place inverse DFT, scaled by 1/N.
void inverse_inplace(std::vector<std::complex<double>>& v);

}  // namespace sicsim::fft
