#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gkeca/classify.hpp"
#include "gkeca/features.hpp"
#include "gkeca/gabor.hpp"
#include "gkeca/image.hpp"
#include "gkeca/keca.hpp"
#include "gkeca/kernels.hpp"
#include "gkeca/manifest.hpp"

namespace gkeca {

/// `count` evenly spaced thresholds from `lo` to `hi` inclusive.
struct TauSweep {
    double lo = 0.0;
    double hi = 1.0;
    int count = 10;

    std::vector<double> values() const;
    bool operator==(const TauSweep&) const = default;
};

struct PipelineConfig {
    ImageSize image_size;
    GaborParams gabor;
    int block_size = 7;
    KernelSpec kernel = KernelSpec::cosine();
    KecaOptions keca;
    double class_regularization = 1e-6;
    std::vector<Measure> measures{Measure::mahalanobis};
    double tau = std::numeric_limits<double>::infinity();
    std::optional<TauSweep> tau_sweep;
    std::uint64_t seed = 0;
    int threads = 0;

    void validate() const;
};

/// Gabor magnitudes + block features for images of one working size. Images
/// of any other size are resized first.
class FeatureExtractor {
public:
    FeatureExtractor(ImageSize size, const GaborParams& gabor, int block_size);

    FeatureVector extract(const GrayImage& img) const;
    std::vector<MagnitudeImage> magnitudes(const GrayImage& img) const;
    std::vector<FeatureVector> extract_all(const std::vector<const GrayImage*>& images, int threads) const;

    ImageSize size() const { return size_; }
    int block_size() const { return block_size_; }
    const GaborBank& bank() const { return convolver_.bank(); }

private:
    GrayImage fit_size(const GrayImage& img) const;

    ImageSize size_;
    int block_size_;
    BankConvolver convolver_;
};

struct TrainedPipeline {
    PipelineConfig config;
    KecaModel keca;
    ClassModel classes;
    std::vector<std::string> train_labels;

    std::vector<double> embed_features(const FeatureVector& chi) const;
    Classification classify_features(const FeatureVector& chi, Measure m) const;
};

/// Extracts features of the training images, fits KECA and the class means.
TrainedPipeline train_pipeline(const std::vector<const DatasetEntry*>& train, const PipelineConfig& config);

/// Rebuilds the class model of a pipeline from its KECA training embeddings.
ClassModel rebuild_classes(const KecaModel& keca, const std::vector<std::string>& labels, double reg_scale);

}  // namespace gkeca
