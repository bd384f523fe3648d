#pragma once

#include <complex>
#include <vector>

namespace epochspec::detail {

/// In-place unnormalized DFT, forward uses e^{-2 pi i k t / N}. Thread-safe.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse = false);

}  // namespace epochspec::detail
