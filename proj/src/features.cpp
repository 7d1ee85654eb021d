#include "gkeca/features.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gkeca {

double global_mean(const MagnitudeImage& img) {
    if (img.values.empty()) throw std::invalid_argument("features: empty magnitude image");
    long double sum = 0.0L;
    for (double v : img.values) sum += v;
    return static_cast<double>(sum / static_cast<long double>(img.values.size()));
}

std::vector<double> extract_blocks(const MagnitudeImage& img, int block_size) {
    if (block_size < 1 || block_size >= std::min(img.width, img.height)) {
        throw std::invalid_argument("features: block size " + std::to_string(block_size) +
                                    " must satisfy 1 <= L < min(width, height)");
    }
    const double mean = global_mean(img);
    const int bx = img.width / block_size;
    const int by = img.height / block_size;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(bx) * by);
    for (int j = 0; j < by; ++j) {
        for (int i = 0; i < bx; ++i) {
            double peak = img.at(i * block_size, j * block_size);
            for (int y = j * block_size; y < (j + 1) * block_size; ++y) {
                for (int x = i * block_size; x < (i + 1) * block_size; ++x) peak = std::max(peak, img.at(x, y));
            }
            out.push_back(peak >= mean ? peak : mean);
        }
    }
    return out;
}

FeatureVector extract_chi(std::span<const MagnitudeImage> magnitudes, int block_size) {
    if (magnitudes.empty()) throw std::invalid_argument("features: no magnitude images");
    const int w = magnitudes.front().width;
    const int h = magnitudes.front().height;
    FeatureVector chi;
    chi.num_outputs = static_cast<int>(magnitudes.size());
    for (const auto& m : magnitudes) {
        if (m.width != w || m.height != h) {
            throw std::invalid_argument("features: magnitude images have mismatched dimensions");
        }
        auto blocks = extract_blocks(m, block_size);
        chi.blocks_per_output = static_cast<int>(blocks.size());
        chi.values.insert(chi.values.end(), blocks.begin(), blocks.end());
    }
    return chi;
}

}  // namespace gkeca
