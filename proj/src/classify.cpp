#include "gkeca/classify.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "gkeca/keca.hpp"

namespace gkeca {

std::string to_string(Measure m) {
    switch (m) {
        case Measure::l1: return "l1";
        case Measure::l2: return "l2";
        case Measure::mahalanobis: return "mahalanobis";
        case Measure::cosine: return "cosine";
    }
    return "unknown";
}

std::optional<Measure> parse_measure(const std::string& token) {
    if (token == "l1") return Measure::l1;
    if (token == "l2") return Measure::l2;
    if (token == "mahalanobis") return Measure::mahalanobis;
    if (token == "cosine") return Measure::cosine;
    return std::nullopt;
}

namespace {

Matrix regularized_inverse(const Matrix& cov, double reg_scale, double& eps) {
    const std::size_t k = cov.rows();
    double trace = 0.0;
    for (std::size_t i = 0; i < k; ++i) trace += cov(i, i);
    eps = reg_scale * trace / static_cast<double>(k);
    Matrix reg = cov;
    for (std::size_t i = 0; i < k; ++i) reg(i, i) += eps;

    const auto dec = eig_sym(reg);
    if (!(dec.values.back() > 0.0)) {
        throw std::runtime_error("classify: covariance is not positive definite after regularization");
    }
    Matrix inv(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += dec.vectors(a, i) * dec.vectors(b, i) / dec.values[i];
            inv(a, b) = s;
            inv(b, a) = s;
        }
    }
    return inv;
}

}  // namespace

ClassModel make_class_model(std::vector<std::string> labels, Matrix means, Matrix covariance, double reg_scale) {
    if (means.cols() == 0) throw std::invalid_argument("classify: embedding dimension is zero");
    if (labels.size() != means.rows()) throw std::invalid_argument("classify: one label per mean required");
    if (covariance.rows() != means.cols() || covariance.cols() != means.cols()) {
        throw std::invalid_argument("classify: covariance shape does not match embedding dimension");
    }
    ClassModel model;
    model.labels = std::move(labels);
    model.means = std::move(means);
    model.covariance = std::move(covariance);
    model.inverse_covariance = regularized_inverse(model.covariance, reg_scale, model.regularization);
    return model;
}

ClassModel fit_classes(const Matrix& embeddings, const std::vector<std::string>& labels, double reg_scale) {
    const std::size_t n = embeddings.rows();
    const std::size_t k = embeddings.cols();
    if (k == 0) throw std::invalid_argument("classify: embedding dimension is zero");
    if (n == 0) throw std::invalid_argument("classify: no training embeddings");
    if (labels.size() != n) throw std::invalid_argument("classify: one label per embedding required");

    std::vector<std::string> classes;
    std::map<std::string, std::size_t> index;
    std::vector<std::size_t> of(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, inserted] = index.emplace(labels[i], classes.size());
        if (inserted) classes.push_back(labels[i]);
        of[i] = it->second;
    }
    const std::size_t l = classes.size();

    Matrix means(l, k);
    std::vector<std::size_t> counts(l, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++counts[of[i]];
        for (std::size_t d = 0; d < k; ++d) means(of[i], d) += embeddings(i, d);
    }
    for (std::size_t c = 0; c < l; ++c) {
        for (std::size_t d = 0; d < k; ++d) means(c, d) /= static_cast<double>(counts[c]);
    }

    Matrix cov(k, k);
    if (n > l) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t a = 0; a < k; ++a) {
                const double da = embeddings(i, a) - means(of[i], a);
                for (std::size_t b = a; b < k; ++b) cov(a, b) += da * (embeddings(i, b) - means(of[i], b));
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a; b < k; ++b) {
                cov(a, b) /= static_cast<double>(n - l);
                cov(b, a) = cov(a, b);
            }
        }
    } else {
        std::vector<double> grand(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < k; ++d) grand[d] += embeddings(i, d) / static_cast<double>(n);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t a = 0; a < k; ++a) {
                const double da = embeddings(i, a) - grand[a];
                for (std::size_t b = a; b < k; ++b) cov(a, b) += da * (embeddings(i, b) - grand[b]);
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a; b < k; ++b) {
                cov(a, b) /= static_cast<double>(n);
                cov(b, a) = cov(a, b);
            }
        }
    }

    // An all-zero covariance (every embedding identical) has no scale to be
    // relative to; fall back to the identity.
    bool degenerate = true;
    for (std::size_t d = 0; d < k; ++d) degenerate = degenerate && cov(d, d) == 0.0;
    if (degenerate) return make_class_model(std::move(classes), std::move(means), Matrix::identity(k), 0.0);
    return make_class_model(std::move(classes), std::move(means), std::move(cov), reg_scale);
}

double distance(std::span<const double> x, std::span<const double> y, Measure m, const ClassModel& model) {
    if (x.size() != y.size() || x.size() != model.dim()) {
        throw std::invalid_argument("classify: dimension mismatch");
    }
    const std::size_t k = x.size();
    switch (m) {
        case Measure::l1: {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += std::abs(x[i] - y[i]);
            return s;
        }
        case Measure::l2: {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
            return s;
        }
        case Measure::mahalanobis: {
            double s = 0.0;
            for (std::size_t a = 0; a < k; ++a) {
                double row = 0.0;
                for (std::size_t b = 0; b < k; ++b) row += model.inverse_covariance(a, b) * (x[b] - y[b]);
                s += (x[a] - y[a]) * row;
            }
            return s;
        }
        case Measure::cosine: {
            double xy = 0.0, xx = 0.0, yy = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                xy += x[i] * y[i];
                xx += x[i] * x[i];
                yy += y[i] * y[i];
            }
            if (xx == 0.0 || yy == 0.0) throw std::invalid_argument("classify: cosine measure of a zero vector");
            return -xy / (std::sqrt(xx) * std::sqrt(yy));
        }
    }
    throw std::logic_error("classify: unhandled measure");
}

Classification classify(std::span<const double> x, const ClassModel& model, Measure m) {
    if (model.num_classes() == 0) throw std::invalid_argument("classify: model has no classes");
    Classification best;
    for (std::size_t c = 0; c < model.num_classes(); ++c) {
        const double d = distance(x, model.means.row(c), m, model);
        if (c == 0 || d < best.distance) {
            best.class_index = c;
            best.distance = d;
        }
    }
    best.label = model.labels[best.class_index];
    return best;
}

}  // namespace gkeca
