#include "gkeca/gabor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace gkeca {

void GaborParams::validate() const {
    if (num_scales < 1) throw std::invalid_argument("gabor: num_scales must be >= 1");
    if (num_orientations < 1) throw std::invalid_argument("gabor: num_orientations must be >= 1");
    if (!(k_max > 0.0) || !std::isfinite(k_max)) throw std::invalid_argument("gabor: k_max must be > 0");
    if (!(f > 1.0) || !std::isfinite(f)) throw std::invalid_argument("gabor: f must be > 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gabor: sigma must be > 0");
    if (window < 3 || window % 2 == 0) throw std::invalid_argument("gabor: window must be odd and >= 3");
}

std::array<double, 2> wave_vector(int mu, int nu, const GaborParams& p) {
    const double k = p.k_max / std::pow(p.f, nu);
    const double phi = std::numbers::pi * mu / p.num_orientations;
    return {k * std::cos(phi), k * std::sin(phi)};
}

GaborKernel make_kernel(int mu, int nu, const GaborParams& p) {
    p.validate();
    if (mu < 0 || mu >= p.num_orientations) {
        throw std::out_of_range("gabor: orientation index " + std::to_string(mu) + " out of range");
    }
    if (nu < 0 || nu >= p.num_scales) {
        throw std::out_of_range("gabor: scale index " + std::to_string(nu) + " out of range");
    }

    GaborKernel kern;
    kern.scale = nu;
    kern.orientation = mu;
    kern.window = p.window;
    kern.wave_vector = wave_vector(mu, nu, p);

    const auto [kx, ky] = kern.wave_vector;
    const double k2 = kx * kx + ky * ky;
    const double s2 = p.sigma * p.sigma;
    const int c = p.window / 2;
    const std::size_t cells = static_cast<std::size_t>(p.window) * p.window;

    std::vector<double> envelope(cells);
    std::vector<Complex> wave(cells);
    double envelope_sum = 0.0;
    Complex weighted_wave = 0.0;
    for (int y = -c; y <= c; ++y) {
        for (int x = -c; x <= c; ++x) {
            const std::size_t i = static_cast<std::size_t>(y + c) * p.window + (x + c);
            envelope[i] = std::exp(-k2 * (x * x + y * y) / (2.0 * s2));
            wave[i] = std::polar(1.0, kx * x + ky * y);
            envelope_sum += envelope[i];
            weighted_wave += envelope[i] * wave[i];
        }
    }

    const Complex dc = p.dc == DcCompensation::analytic ? Complex(std::exp(-s2 / 2.0), 0.0)
                                                        : weighted_wave / envelope_sum;
    const double amplitude = k2 / s2;
    kern.grid.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) kern.grid[i] = amplitude * envelope[i] * (wave[i] - dc);
    return kern;
}

GaborBank make_bank(const GaborParams& p) {
    p.validate();
    GaborBank bank;
    bank.reserve(static_cast<std::size_t>(p.num_scales) * p.num_orientations);
    for (int nu = 0; nu < p.num_scales; ++nu) {
        for (int mu = 0; mu < p.num_orientations; ++mu) bank.push_back(make_kernel(mu, nu, p));
    }
    return bank;
}

namespace {

void check_fits(int width, int height, const GaborKernel& kern) {
    if (width < kern.window || height < kern.window) {
        throw std::invalid_argument("gabor: image " + std::to_string(width) + "x" + std::to_string(height) +
                                    " is smaller than the " + std::to_string(kern.window) + "x" +
                                    std::to_string(kern.window) + " kernel window");
    }
}

// Kernel zero-padded to the image lattice with its centre at the origin.
std::vector<Complex> kernel_spectrum(const GaborKernel& kern, int width, int height) {
    std::vector<Complex> padded(static_cast<std::size_t>(width) * height);
    const int c = kern.half();
    for (int y = -c; y <= c; ++y) {
        const int row = (y + height) % height;
        for (int x = -c; x <= c; ++x) {
            const int col = (x + width) % width;
            padded[static_cast<std::size_t>(row) * width + col] = kern.at(x, y);
        }
    }
    detail::fft2d_forward(padded, width, height);
    return padded;
}

std::vector<Complex> image_spectrum(const GrayImage& img) {
    std::vector<Complex> spec(img.data().begin(), img.data().end());
    detail::fft2d_forward(spec, img.width(), img.height());
    return spec;
}

ResponseField respond(const std::vector<Complex>& image_spec, const std::vector<Complex>& kernel_spec,
                      const GaborKernel& kern, int width, int height) {
    ResponseField field{width, height, kern.scale, kern.orientation, {}};
    field.values.resize(image_spec.size());
    for (std::size_t i = 0; i < image_spec.size(); ++i) field.values[i] = image_spec[i] * kernel_spec[i];
    detail::fft2d_inverse(field.values, width, height);
    const double norm = 1.0 / (static_cast<double>(width) * height);
    for (auto& v : field.values) v *= norm;
    return field;
}

}  // namespace

ResponseField convolve_fft(const GrayImage& img, const GaborKernel& kern) {
    check_fits(img.width(), img.height(), kern);
    return respond(image_spectrum(img), kernel_spectrum(kern, img.width(), img.height()), kern, img.width(),
                   img.height());
}

MagnitudeImage magnitude(const ResponseField& field) {
    MagnitudeImage out{field.width, field.height, field.scale, field.orientation, {}};
    out.values.reserve(field.values.size());
    for (const auto& v : field.values) out.values.push_back(std::abs(v));
    return out;
}

BankConvolver::BankConvolver(GaborBank bank, int width, int height)
    : bank_(std::move(bank)), width_(width), height_(height) {
    if (bank_.empty()) throw std::invalid_argument("gabor: empty bank");
    spectra_.reserve(bank_.size());
    for (const auto& kern : bank_) {
        check_fits(width_, height_, kern);
        spectra_.push_back(kernel_spectrum(kern, width_, height_));
    }
}

std::vector<ResponseField> BankConvolver::responses(const GrayImage& img) const {
    if (img.width() != width_ || img.height() != height_) {
        throw std::invalid_argument("gabor: image size does not match the convolver lattice");
    }
    const auto spec = image_spectrum(img);
    std::vector<ResponseField> out;
    out.reserve(bank_.size());
    for (std::size_t i = 0; i < bank_.size(); ++i) out.push_back(respond(spec, spectra_[i], bank_[i], width_, height_));
    return out;
}

std::vector<MagnitudeImage> BankConvolver::magnitudes(const GrayImage& img) const {
    std::vector<MagnitudeImage> out;
    for (const auto& field : responses(img)) out.push_back(magnitude(field));
    return out;
}

}  // namespace gkeca
