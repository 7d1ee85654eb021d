#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gkeca/matrix.hpp"

namespace gkeca {

enum class KernelKind { cosine, gaussian, polynomial };

std::string to_string(KernelKind kind);
std::optional<KernelKind> parse_kernel_kind(const std::string& token);

/// Kernel choice plus its parameters. Parameters are present exactly when the
/// kind needs them: `sigma` for gaussian, `degree` and `offset` for polynomial.
struct KernelSpec {
    KernelKind kind = KernelKind::cosine;
    std::optional<double> sigma;
    std::optional<int> degree;
    std::optional<double> offset;
    bool normalize_inputs = true;

    static KernelSpec cosine(bool normalize = true);
    static KernelSpec gaussian(double sigma, bool normalize = true);
    static KernelSpec polynomial(int degree, double offset, bool normalize = true);

    void validate() const;
    bool operator==(const KernelSpec&) const = default;
};

using Sample = std::vector<double>;

/// Unit-normalized copy when the spec asks for it (zero stays zero),
/// otherwise a plain copy.
Sample prepare_sample(std::span<const double> x, const KernelSpec& spec);

/// Kernel value on already-prepared samples.
double eval_prepared(std::span<const double> x, std::span<const double> y, const KernelSpec& spec);

/// cosine: (pi/4) cos(pi <x,y> / 2); gaussian: exp(-|x-y|^2 / (2 sigma^2));
/// polynomial: (<x,y> + c)^d. Inputs are unit-normalized first when
/// normalize_inputs is set.
double eval_kernel(std::span<const double> x, std::span<const double> y, const KernelSpec& spec);

/// Symmetric n x n matrix; each unordered pair is evaluated once and mirrored.
Matrix kernel_matrix(const std::vector<Sample>& samples, const KernelSpec& spec);

std::vector<double> kernel_vector(std::span<const double> x, const std::vector<Sample>& train, const KernelSpec& spec);

/// Same as kernel_vector, for training samples that went through prepare_sample.
std::vector<double> kernel_vector_prepared(std::span<const double> x, const std::vector<Sample>& prepared_train,
                                           const KernelSpec& spec);

}  // namespace gkeca
