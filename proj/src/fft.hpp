#pragma once

#include <complex>
#include <vector>

namespace gkeca::detail {

// 2-D complex DFTs on a row-major height x width lattice, unnormalized in both
// directions (inverse(forward(x)) == width * height * x).
void fft2d_forward(std::vector<std::complex<double>>& data, int width, int height);
void fft2d_inverse(std::vector<std::complex<double>>& data, int width, int height);

}  // namespace gkeca::detail
