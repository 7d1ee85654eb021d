#pragma once

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "gkeca/image.hpp"

namespace gkeca {

/// How the DC compensation term of a Gabor kernel is computed.
///
/// `analytic` subtracts exp(-sigma^2/2), which zeroes the DC of the
/// continuous, untruncated wavelet. `sampled` subtracts the envelope-weighted
/// mean of the plane wave over the actual window, so the discrete grid sums
/// to zero. The two agree as the window grows.
enum class DcCompensation { sampled, analytic };

struct GaborParams {
    int num_scales = 5;
    int num_orientations = 8;
    double k_max = std::numbers::pi / 2.0;
    double f = std::numbers::sqrt2;
    double sigma = 2.0 * std::numbers::pi;
    int window = 31;
    DcCompensation dc = DcCompensation::sampled;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
    bool operator==(const GaborParams&) const = default;
};

using Complex = std::complex<double>;

/// Complex filter sampled on a window x window lattice centred at the origin.
struct GaborKernel {
    int scale = 0;
    int orientation = 0;
    int window = 0;
    std::array<double, 2> wave_vector{};
    std::vector<Complex> grid;  // row-major; offset (x, y) lives at (y + c) * window + (x + c)

    int half() const { return window / 2; }
    Complex at(int x, int y) const {
        return grid[static_cast<std::size_t>(y + half()) * window + (x + half())];
    }
};

using GaborBank = std::vector<GaborKernel>;

struct ResponseField {
    int width = 0;
    int height = 0;
    int scale = 0;
    int orientation = 0;
    std::vector<Complex> values;

    Complex at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct MagnitudeImage {
    int width = 0;
    int height = 0;
    int scale = 0;
    int orientation = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// k = (k_max / f^nu) * (cos phi, sin phi) with phi = pi * mu / num_orientations.
std::array<double, 2> wave_vector(int mu, int nu, const GaborParams& p);

GaborKernel make_kernel(int mu, int nu, const GaborParams& p);

/// Scale-major, orientation-minor: index = nu * num_orientations + mu.
GaborBank make_bank(const GaborParams& p);

/// Circular convolution through the DFT. Output pixel z holds the response of
/// the kernel centred at z.
ResponseField convolve_fft(const GrayImage& img, const GaborKernel& kern);

MagnitudeImage magnitude(const ResponseField& field);

/// Convolves images of one fixed size against a whole bank, reusing the
/// kernel spectra. Safe to share between threads once constructed.
class BankConvolver {
public:
    BankConvolver(GaborBank bank, int width, int height);

    std::vector<MagnitudeImage> magnitudes(const GrayImage& img) const;
    std::vector<ResponseField> responses(const GrayImage& img) const;

    const GaborBank& bank() const { return bank_; }
    int width() const { return width_; }
    int height() const { return height_; }

private:
    GaborBank bank_;
    int width_;
    int height_;
    std::vector<std::vector<Complex>> spectra_;
};

}  // namespace gkeca
