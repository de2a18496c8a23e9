#pragma once

#include <complex>
#include <vector>

namespace maskattack::detail {

// In-place complex DFT. Radix-2 iterative for power-of-two sizes,
// direct O(n^2) evaluation otherwise (frame lengths are normally 2048).
void fft(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace maskattack::detail
