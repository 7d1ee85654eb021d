#include "gkeca/keca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gkeca {

RenyiEstimate renyi_estimate(const Matrix& k) {
    if (k.rows() == 0 || k.rows() != k.cols()) throw std::invalid_argument("renyi: kernel matrix must be square and nonempty");
    const double n = static_cast<double>(k.rows());
    double sum = 0.0;
    for (double v : k.data()) sum += v;
    RenyiEstimate out;
    out.potential = sum / (n * n);
    if (out.potential > 0.0) out.entropy = -std::log(out.potential);
    return out;
}

EntropyRanking entropy_rank(const EigenDecomposition& dec, std::size_t n) {
    const std::size_t m = dec.size();
    EntropyRanking r;
    r.contributions.resize(m);
    r.alignments.resize(m);
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < dec.vectors.rows(); ++t) s += dec.vectors(t, i);
        r.alignments[i] = s;
        r.contributions[i] = dec.values[i] * s * s / n2;
    }
    r.order.resize(m);
    std::iota(r.order.begin(), r.order.end(), 0);
    std::sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
        if (r.contributions[a] != r.contributions[b]) return r.contributions[a] > r.contributions[b];
        if (dec.values[a] != dec.values[b]) return dec.values[a] > dec.values[b];
        return a < b;
    });
    return r;
}

std::vector<std::size_t> surviving_axes(const EigenDecomposition& dec, const EntropyRanking& ranking,
                                        const KecaOptions& options) {
    std::vector<std::size_t> out;
    if (dec.values.empty() || !(dec.values.front() > 0.0)) return out;
    const double eig_floor = options.eig_rel_eps * dec.values.front();
    const double sum_floor = options.sum_rel_eps * std::sqrt(static_cast<double>(dec.vectors.rows()));
    for (std::size_t axis : ranking.order) {
        if (dec.values[axis] > eig_floor && std::abs(ranking.alignments[axis]) > sum_floor) out.push_back(axis);
    }
    return out;
}

KecaModel fit_keca_from_matrix(const Matrix& k, std::vector<Sample> train, const KernelSpec& spec,
                               const KecaOptions& options) {
    if (train.empty()) throw std::invalid_argument("keca: empty training set");
    if (train.size() < 2) throw std::invalid_argument("keca: at least two training samples are required");
    if (options.k && *options.k < 1) throw std::invalid_argument("keca: k must be >= 1");
    if (!options.k && !(options.energy_fraction > 0.0 && options.energy_fraction <= 1.0)) {
        throw std::invalid_argument("keca: energy fraction must lie in (0, 1]");
    }
    if (k.rows() != train.size() || k.cols() != train.size()) {
        throw std::invalid_argument("keca: kernel matrix does not match the training set");
    }

    const auto dec = eig_sym(k);
    KecaModel model;
    model.kernel = spec;
    model.requested_k = options.k;
    model.ranking = entropy_rank(dec, train.size());
    model.all_eigenvalues = dec.values;

    const auto survivors = surviving_axes(dec, model.ranking, options);
    if (survivors.empty()) throw std::runtime_error("keca: no eigen-axis carries positive entropy");

    std::size_t keep = survivors.size();
    if (options.k) {
        keep = std::min(*options.k, survivors.size());
    } else {
        double total = 0.0;
        for (auto axis : survivors) total += model.ranking.contributions[axis];
        double running = 0.0;
        for (std::size_t i = 0; i < survivors.size(); ++i) {
            running += model.ranking.contributions[survivors[i]];
            if (running >= options.energy_fraction * total) {
                keep = i + 1;
                break;
            }
        }
    }

    model.k = keep;
    model.axes.assign(survivors.begin(), survivors.begin() + static_cast<std::ptrdiff_t>(keep));
    model.eigenvectors = Matrix(train.size(), keep);
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t axis = model.axes[i];
        model.eigenvalues.push_back(dec.values[axis]);
        for (std::size_t t = 0; t < train.size(); ++t) model.eigenvectors(t, i) = dec.vectors(t, axis);
    }
    model.prepared.reserve(train.size());
    for (const auto& s : train) model.prepared.push_back(prepare_sample(s, spec));
    model.train = std::move(train);
    return model;
}

KecaModel fit_keca(const std::vector<Sample>& train, const KernelSpec& spec, const KecaOptions& options) {
    if (train.empty()) throw std::invalid_argument("keca: empty training set");
    return fit_keca_from_matrix(kernel_matrix(train, spec), train, spec, options);
}

Matrix project_train(const KecaModel& model) {
    Matrix out(model.num_train(), model.k);
    for (std::size_t i = 0; i < model.k; ++i) {
        const double scale = std::sqrt(model.eigenvalues[i]);
        for (std::size_t t = 0; t < model.num_train(); ++t) out(t, i) = scale * model.eigenvectors(t, i);
    }
    return out;
}

std::vector<double> project_kernel_vector(const KecaModel& model, std::span<const double> kx) {
    if (kx.size() != model.num_train()) throw std::invalid_argument("keca: kernel vector length mismatch");
    std::vector<double> out(model.k);
    for (std::size_t i = 0; i < model.k; ++i) {
        if (!(model.eigenvalues[i] > 0.0)) throw std::logic_error("keca: selected axis has non-positive eigenvalue");
        double s = 0.0;
        for (std::size_t t = 0; t < kx.size(); ++t) s += model.eigenvectors(t, i) * kx[t];
        out[i] = s / std::sqrt(model.eigenvalues[i]);
    }
    return out;
}

std::vector<double> project(const KecaModel& model, std::span<const double> x) {
    if (x.size() != model.feature_length()) {
        throw std::invalid_argument("keca: feature length " + std::to_string(x.size()) + " does not match model (" +
                                    std::to_string(model.feature_length()) + ")");
    }
    return project_kernel_vector(model, kernel_vector_prepared(x, model.prepared, model.kernel));
}

}  // namespace gkeca
