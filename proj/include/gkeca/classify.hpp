#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gkeca/matrix.hpp"

namespace gkeca {

enum class Measure { l1, l2, mahalanobis, cosine };

inline constexpr Measure kAllMeasures[] = {Measure::l1, Measure::l2, Measure::mahalanobis, Measure::cosine};

std::string to_string(Measure m);
std::optional<Measure> parse_measure(const std::string& token);

/// Class means in the embedding space plus the (regularized) pooled
/// covariance used by the Mahalanobis measure.
struct ClassModel {
    std::vector<std::string> labels;  ///< class index -> label, in first-seen order
    Matrix means;                     ///< one row per class
    Matrix covariance;                ///< unregularized
    Matrix inverse_covariance;        ///< of covariance + eps * I
    double regularization = 0.0;      ///< the eps that was added

    std::size_t num_classes() const { return labels.size(); }
    std::size_t dim() const { return means.cols(); }
};

/// Per-class means and pooled within-class covariance (sum of scatter over
/// N - l); falls back to total covariance over N when N == l. The covariance
/// is regularized by reg_scale * trace / k on the diagonal before inversion.
ClassModel fit_classes(const Matrix& embeddings, const std::vector<std::string>& labels, double reg_scale = 1e-6);

/// Builds a model from explicit means and covariance.
ClassModel make_class_model(std::vector<std::string> labels, Matrix means, Matrix covariance, double reg_scale = 1e-6);

/// L1: sum |x - y|; L2: (x - y)^T (x - y); Mahalanobis: (x - y)^T S^-1 (x - y);
/// cosine: -x.y / (|x| |y|).
double distance(std::span<const double> x, std::span<const double> y, Measure m, const ClassModel& model);

struct Classification {
    std::size_t class_index = 0;
    std::string label;
    double distance = 0.0;
};

/// Nearest class mean; ties go to the lowest class index.
Classification classify(std::span<const double> x, const ClassModel& model, Measure m);

}  // namespace gkeca
