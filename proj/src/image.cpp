#include "gkeca/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>

namespace gkeca {

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("image data length does not match width x height");
    }
    for (double v : data_) {
        if (!std::isfinite(v) || v < 0.0 || v > 255.0) {
            throw std::invalid_argument("image intensity outside [0, 255]");
        }
    }
}

namespace {

class HeaderReader {
public:
    explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then reads one decimal token.
    std::optional<long> next_int() {
        skip_space_and_comments();
        std::size_t start = pos_;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
        if (start == pos_) return std::nullopt;
        if (pos_ - start > 9) return std::nullopt;
        return std::stol(bytes_.substr(start, pos_ - start));
    }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool at_end() const { return pos_ >= bytes_.size(); }
    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    char peek() const { return bytes_[pos_]; }

private:
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(const std::string& bytes, const std::string& origin) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw PgmError(PgmErrorKind::malformed_header, origin + ": not a P2/P5 PGM file");
    }
    const bool binary = bytes[1] == '5';
    HeaderReader reader(bytes);
    reader.advance(2);
    if (!reader.at_end() && !std::isspace(static_cast<unsigned char>(reader.peek())) && reader.peek() != '#') {
        throw PgmError(PgmErrorKind::malformed_header, origin + ": bad magic number");
    }

    auto width = reader.next_int();
    auto height = reader.next_int();
    auto maxval = reader.next_int();
    if (!width || !height || !maxval || *width <= 0 || *height <= 0 || *maxval <= 0) {
        throw PgmError(PgmErrorKind::malformed_header, origin + ": malformed PGM header");
    }
    if (*maxval > 255) {
        throw PgmError(PgmErrorKind::unsupported_maxval,
                       origin + ": maxval " + std::to_string(*maxval) + " exceeds 255");
    }

    const std::size_t count = static_cast<std::size_t>(*width) * static_cast<std::size_t>(*height);
    std::vector<double> pixels;
    pixels.reserve(count);

    if (binary) {
        // Exactly one whitespace byte separates maxval from the raster.
        if (reader.at_end() || !std::isspace(static_cast<unsigned char>(reader.peek()))) {
            throw PgmError(PgmErrorKind::truncated_data, origin + ": missing pixel data");
        }
        reader.advance(1);
        std::size_t start = reader.pos();
        if (bytes.size() < start + count) {
            throw PgmError(PgmErrorKind::truncated_data,
                           origin + ": expected " + std::to_string(count) + " pixels, found " +
                               std::to_string(bytes.size() - std::min(start, bytes.size())));
        }
        for (std::size_t i = 0; i < count; ++i) {
            auto v = static_cast<unsigned char>(bytes[start + i]);
            if (v > *maxval) {
                throw PgmError(PgmErrorKind::malformed_header, origin + ": pixel exceeds maxval");
            }
            pixels.push_back(v);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            reader.skip_space_and_comments();
            if (reader.at_end()) {
                throw PgmError(PgmErrorKind::truncated_data,
                               origin + ": expected " + std::to_string(count) + " pixels, found " +
                                   std::to_string(i));
            }
            auto v = reader.next_int();
            if (!v) throw PgmError(PgmErrorKind::malformed_header, origin + ": non-numeric pixel token");
            if (*v > *maxval) throw PgmError(PgmErrorKind::malformed_header, origin + ": pixel exceeds maxval");
            pixels.push_back(static_cast<double>(*v));
        }
    }
    return GrayImage(static_cast<int>(*width), static_cast<int>(*height), std::move(pixels));
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError(PgmErrorKind::missing_file, path.string() + ": cannot open file");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_pgm(bytes, path.string());
}

std::string encode_pgm(const GrayImage& img) {
    std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    out.reserve(out.size() + img.size());
    for (double v : img.data()) {
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)))));
    }
    return out;
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PgmError(PgmErrorKind::write_failed, path.string() + ": cannot open for writing");
    const std::string bytes = encode_pgm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PgmError(PgmErrorKind::write_failed, path.string() + ": write failed");
}

GrayImage resize_bilinear(const GrayImage& img, int target_width, int target_height) {
    if (target_width <= 0 || target_height <= 0) {
        throw std::invalid_argument("resize target dimensions must be positive");
    }
    if (target_width == img.width() && target_height == img.height()) return img;

    auto source_coord = [](int t, int src, int dst) {
        if (dst == 1) return 0.0;
        return static_cast<double>(t) * static_cast<double>(src - 1) / static_cast<double>(dst - 1);
    };

    double lo = *std::min_element(img.data().begin(), img.data().end());
    double hi = *std::max_element(img.data().begin(), img.data().end());

    std::vector<double> out(static_cast<std::size_t>(target_width) * target_height);
    for (int ty = 0; ty < target_height; ++ty) {
        double sy = source_coord(ty, img.height(), target_height);
        int y0 = std::min(static_cast<int>(std::floor(sy)), img.height() - 1);
        int y1 = std::min(y0 + 1, img.height() - 1);
        double wy = sy - y0;
        for (int tx = 0; tx < target_width; ++tx) {
            double sx = source_coord(tx, img.width(), target_width);
            int x0 = std::min(static_cast<int>(std::floor(sx)), img.width() - 1);
            int x1 = std::min(x0 + 1, img.width() - 1);
            double wx = sx - x0;
            double top = (1.0 - wx) * img.at(x0, y0) + wx * img.at(x1, y0);
            double bottom = (1.0 - wx) * img.at(x0, y1) + wx * img.at(x1, y1);
            double v = (1.0 - wy) * top + wy * bottom;
            // rounding can step a hair outside the convex hull of the inputs
            out[static_cast<std::size_t>(ty) * target_width + tx] = std::clamp(v, lo, hi);
        }
    }
    return GrayImage(target_width, target_height, std::move(out));
}

GrayImage rescale_to_gray(int width, int height, const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("cannot rescale an empty raster");
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double lo = *mn;
    double span = *mx - *mn;
    std::vector<double> out(values.size(), 0.0);
    if (span > 0.0) {
        for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::clamp(255.0 * (values[i] - lo) / span, 0.0, 255.0);
    }
    return GrayImage(width, height, std::move(out));
}

}  // namespace gkeca
