#include "gkeca/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gkeca {

std::string to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::cosine: return "cosine";
        case KernelKind::gaussian: return "gaussian";
        case KernelKind::polynomial: return "polynomial";
    }
    return "unknown";
}

std::optional<KernelKind> parse_kernel_kind(const std::string& token) {
    if (token == "cosine") return KernelKind::cosine;
    if (token == "gaussian") return KernelKind::gaussian;
    if (token == "polynomial") return KernelKind::polynomial;
    return std::nullopt;
}

KernelSpec KernelSpec::cosine(bool normalize) {
    return KernelSpec{KernelKind::cosine, std::nullopt, std::nullopt, std::nullopt, normalize};
}

KernelSpec KernelSpec::gaussian(double sigma, bool normalize) {
    KernelSpec s{KernelKind::gaussian, sigma, std::nullopt, std::nullopt, normalize};
    s.validate();
    return s;
}

KernelSpec KernelSpec::polynomial(int degree, double offset, bool normalize) {
    KernelSpec s{KernelKind::polynomial, std::nullopt, degree, offset, normalize};
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    const bool wants_sigma = kind == KernelKind::gaussian;
    const bool wants_poly = kind == KernelKind::polynomial;
    if (sigma.has_value() != wants_sigma) {
        throw std::invalid_argument("kernel: sigma is required for gaussian kernels and only for them");
    }
    if (degree.has_value() != wants_poly || offset.has_value() != wants_poly) {
        throw std::invalid_argument("kernel: degree and offset are required for polynomial kernels and only for them");
    }
    if (wants_sigma && (!(*sigma > 0.0) || !std::isfinite(*sigma))) {
        throw std::invalid_argument("kernel: gaussian sigma must be > 0");
    }
    if (wants_poly && (*degree < 1 || !(*offset >= 0.0) || !std::isfinite(*offset))) {
        throw std::invalid_argument("kernel: polynomial needs degree >= 1 and offset >= 0");
    }
}

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b) {
        throw std::invalid_argument("kernel: length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

Sample prepare_sample(std::span<const double> x, const KernelSpec& spec) {
    Sample out(x.begin(), x.end());
    if (!spec.normalize_inputs) return out;
    const double norm = std::sqrt(dot(x, x));
    if (norm > 0.0) {
        for (auto& v : out) v /= norm;
    }
    return out;
}

double eval_prepared(std::span<const double> x, std::span<const double> y, const KernelSpec& spec) {
    check_lengths(x.size(), y.size());
    switch (spec.kind) {
        case KernelKind::cosine:
            return (std::numbers::pi / 4.0) * std::cos(std::numbers::pi * dot(x, y) / 2.0);
        case KernelKind::gaussian: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                d2 += d * d;
            }
            return std::exp(-d2 / (2.0 * *spec.sigma * *spec.sigma));
        }
        case KernelKind::polynomial:
            return std::pow(dot(x, y) + *spec.offset, *spec.degree);
    }
    throw std::logic_error("kernel: unhandled kind");
}

double eval_kernel(std::span<const double> x, std::span<const double> y, const KernelSpec& spec) {
    spec.validate();
    check_lengths(x.size(), y.size());
    return eval_prepared(prepare_sample(x, spec), prepare_sample(y, spec), spec);
}

Matrix kernel_matrix(const std::vector<Sample>& samples, const KernelSpec& spec) {
    spec.validate();
    if (samples.empty()) throw std::invalid_argument("kernel: empty sample set");
    const std::size_t n = samples.size();
    std::vector<Sample> prepared;
    prepared.reserve(n);
    for (const auto& s : samples) {
        check_lengths(s.size(), samples.front().size());
        prepared.push_back(prepare_sample(s, spec));
    }
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = eval_prepared(prepared[i], prepared[j], spec);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

std::vector<double> kernel_vector_prepared(std::span<const double> x, const std::vector<Sample>& prepared_train,
                                           const KernelSpec& spec) {
    const Sample px = prepare_sample(x, spec);
    std::vector<double> out;
    out.reserve(prepared_train.size());
    for (const auto& t : prepared_train) out.push_back(eval_prepared(px, t, spec));
    return out;
}

std::vector<double> kernel_vector(std::span<const double> x, const std::vector<Sample>& train, const KernelSpec& spec) {
    spec.validate();
    std::vector<Sample> prepared;
    prepared.reserve(train.size());
    for (const auto& t : train) prepared.push_back(prepare_sample(t, spec));
    return kernel_vector_prepared(x, prepared, spec);
}

}  // namespace gkeca
