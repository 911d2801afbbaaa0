#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pathhd::detail {

// s_k = Σ_i x_i y_{(k-i) mod d}
std::vector<double> circular_convolve(std::span<const double> x, std::span<const double> y);
// x_i = Σ_k s_k y_{(k-i) mod d}
std::vector<double> circular_correlate(std::span<const double> s, std::span<const double> y);
// Real signal of length d whose DFT is `half_spectrum` (d/2 + 1 bins), scaled by 1/d.
std::vector<double> inverse_real_dft(std::span<const std::complex<double>> half_spectrum, std::size_t d);

}  // namespace pathhd::detail
