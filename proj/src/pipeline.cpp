#include "gkeca/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "gkeca/parallel.hpp"

namespace gkeca {

std::vector<double> TauSweep::values() const {
    if (count < 1) throw std::invalid_argument("tau sweep: count must be >= 1");
    if (count == 1) return {lo};
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return out;
}

void PipelineConfig::validate() const {
    if (image_size.width <= 0 || image_size.height <= 0) throw std::invalid_argument("config: image size must be positive");
    gabor.validate();
    if (block_size < 1 || block_size >= std::min(image_size.width, image_size.height)) {
        throw std::invalid_argument("config: block size must satisfy 1 <= L < min(width, height)");
    }
    if (image_size.width < gabor.window || image_size.height < gabor.window) {
        throw std::invalid_argument("config: working image size is smaller than the Gabor window");
    }
    kernel.validate();
    if (keca.k && *keca.k < 1) throw std::invalid_argument("config: k must be >= 1");
    if (!(keca.energy_fraction > 0.0 && keca.energy_fraction <= 1.0)) {
        throw std::invalid_argument("config: energy fraction must lie in (0, 1]");
    }
    if (!(class_regularization >= 0.0)) throw std::invalid_argument("config: class regularization must be >= 0");
    if (measures.empty()) throw std::invalid_argument("config: at least one measure is required");
    if (std::isnan(tau)) throw std::invalid_argument("config: tau must not be NaN");
    if (tau_sweep && (tau_sweep->count < 1 || !std::isfinite(tau_sweep->lo) || !std::isfinite(tau_sweep->hi))) {
        throw std::invalid_argument("config: tau sweep needs finite bounds and count >= 1");
    }
}

FeatureExtractor::FeatureExtractor(ImageSize size, const GaborParams& gabor, int block_size)
    : size_(size), block_size_(block_size), convolver_(make_bank(gabor), size.width, size.height) {
    if (block_size < 1 || block_size >= std::min(size.width, size.height)) {
        throw std::invalid_argument("features: block size must satisfy 1 <= L < min(width, height)");
    }
}

GrayImage FeatureExtractor::fit_size(const GrayImage& img) const {
    if (img.width() == size_.width && img.height() == size_.height) return img;
    return resize_bilinear(img, size_.width, size_.height);
}

std::vector<MagnitudeImage> FeatureExtractor::magnitudes(const GrayImage& img) const {
    return convolver_.magnitudes(fit_size(img));
}

FeatureVector FeatureExtractor::extract(const GrayImage& img) const {
    const auto mags = magnitudes(img);
    return extract_chi(mags, block_size_);
}

std::vector<FeatureVector> FeatureExtractor::extract_all(const std::vector<const GrayImage*>& images, int threads) const {
    std::vector<FeatureVector> out(images.size());
    parallel_for(images.size(), threads, [&](std::size_t i) { out[i] = extract(*images[i]); });
    return out;
}

std::vector<double> TrainedPipeline::embed_features(const FeatureVector& chi) const {
    return project(keca, chi.values);
}

Classification TrainedPipeline::classify_features(const FeatureVector& chi, Measure m) const {
    return classify(embed_features(chi), classes, m);
}

ClassModel rebuild_classes(const KecaModel& keca, const std::vector<std::string>& labels, double reg_scale) {
    return fit_classes(project_train(keca), labels, reg_scale);
}

TrainedPipeline train_pipeline(const std::vector<const DatasetEntry*>& train, const PipelineConfig& config) {
    config.validate();
    if (train.empty()) throw std::invalid_argument("pipeline: no training images");

    FeatureExtractor extractor(config.image_size, config.gabor, config.block_size);
    std::vector<const GrayImage*> images;
    std::vector<std::string> labels;
    for (const auto* e : train) {
        images.push_back(&e->image);
        labels.push_back(e->label);
    }
    auto features = extractor.extract_all(images, config.threads);
    std::vector<Sample> samples;
    samples.reserve(features.size());
    for (auto& f : features) samples.push_back(std::move(f.values));

    TrainedPipeline out;
    out.config = config;
    out.keca = fit_keca(samples, config.kernel, config.keca);
    out.train_labels = std::move(labels);
    out.classes = rebuild_classes(out.keca, out.train_labels, config.class_regularization);
    return out;
}

}  // namespace gkeca
