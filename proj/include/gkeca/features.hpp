#pragma once

#include <span>
#include <vector>

#include "gkeca/gabor.hpp"

namespace gkeca {

/// Concatenated block features of E magnitude images.
struct FeatureVector {
    std::vector<double> values;
    int num_outputs = 0;
    int blocks_per_output = 0;

    std::size_t size() const { return values.size(); }
};

double global_mean(const MagnitudeImage& img);

/// One feature per non-overlapping L x L block (anchored top-left, partial
/// blocks dropped, row-major order): max(block maximum, global mean).
std::vector<double> extract_blocks(const MagnitudeImage& img, int block_size);

/// Block features of every magnitude image, concatenated in input order.
FeatureVector extract_chi(std::span<const MagnitudeImage> magnitudes, int block_size);

}  // namespace gkeca
