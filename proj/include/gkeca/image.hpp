#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkeca {

/// Grayscale raster, row-major, intensities in [0, 255].
class GrayImage {
public:
    GrayImage() = default;
    /// Throws std::invalid_argument if the dimensions are not positive, the
    /// data length disagrees with them, or any intensity is outside [0, 255].
    GrayImage(int width, int height, std::vector<double> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const GrayImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

struct ImageSize {
    int width = 92;
    int height = 112;
    bool operator==(const ImageSize&) const = default;
};

enum class PgmErrorKind { missing_file, malformed_header, truncated_data, unsupported_maxval, write_failed };

class PgmError : public std::runtime_error {
public:
    PgmError(PgmErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    PgmErrorKind kind() const { return kind_; }

private:
    PgmErrorKind kind_;
};

/// Reads a binary (P5) or ASCII (P2) PGM with maxval <= 255. Pixel values are
/// taken verbatim (no rescaling by maxval).
GrayImage load_pgm(const std::filesystem::path& path);

/// Parses PGM bytes already in memory; `origin` only labels error messages.
GrayImage decode_pgm(const std::string& bytes, const std::string& origin = "<memory>");

/// Writes a P5 file with maxval 255; intensities are rounded to the nearest integer.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
std::string encode_pgm(const GrayImage& img);

/// Bilinear resampling with endpoint-aligned coordinates:
/// source position = t * (src - 1) / (dst - 1).
GrayImage resize_bilinear(const GrayImage& img, int target_width, int target_height);

/// Linearly maps [min, max] of arbitrary real data onto [0, 255]. A constant
/// input maps to all zeros.
GrayImage rescale_to_gray(int width, int height, const std::vector<double>& values);

}  // namespace gkeca
