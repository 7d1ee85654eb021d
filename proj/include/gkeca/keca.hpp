#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gkeca/kernels.hpp"
#include "gkeca/matrix.hpp"

namespace gkeca {

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition
// ---------------------------------------------------------------------------

/// Eigenvalues in descending order; column i of `vectors` pairs with
/// values[i]. Each column's first non-negligible component is positive.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
    int sweeps = 0;

    std::size_t size() const { return values.size(); }
};

struct JacobiOptions {
    /// Stop once the off-diagonal Frobenius mass is <= tolerance * ||A||_F ...
    double tolerance = 1e-12;
    /// ... then run this many extra sweeps to push residuals toward round-off.
    int polish_sweeps = 2;
    int max_sweeps = 100;
};

enum class EigenErrorKind { not_square, not_symmetric, non_finite, no_convergence };

class EigenError : public std::runtime_error {
public:
    EigenError(EigenErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    EigenErrorKind kind() const { return kind_; }

private:
    EigenErrorKind kind_;
};

/// Cyclic Jacobi rotations on a symmetric matrix.
EigenDecomposition eig_sym(const Matrix& a, const JacobiOptions& options = {});

// ---------------------------------------------------------------------------
// Renyi quadratic entropy via the Parzen estimator
// ---------------------------------------------------------------------------

struct RenyiEstimate {
    double potential = 0.0;         ///< (1/N^2) * sum_ij K_ij
    std::optional<double> entropy;  ///< -log(potential); empty when potential <= 0
};

RenyiEstimate renyi_estimate(const Matrix& k);

/// Per-axis entropy contributions gamma_i = lambda_i (e_i . 1)^2 / N^2 and the
/// axis order by gamma descending (ties: larger lambda, then lower index).
struct EntropyRanking {
    std::vector<double> contributions;
    std::vector<double> alignments;  ///< e_i . 1
    std::vector<std::size_t> order;
};

EntropyRanking entropy_rank(const EigenDecomposition& dec, std::size_t n);

// ---------------------------------------------------------------------------
// KECA model
// ---------------------------------------------------------------------------

struct KecaOptions {
    /// Fixed output dimension. When empty, the smallest k whose cumulative
    /// entropy covers `energy_fraction` of the surviving axes' total is used.
    std::optional<std::size_t> k;
    double energy_fraction = 0.95;
    /// Axes with lambda <= eig_rel_eps * lambda_max are treated as zero.
    double eig_rel_eps = 1e-10;
    /// Axes with |e . 1| <= sum_rel_eps * sqrt(N) are treated as orthogonal to 1.
    double sum_rel_eps = 1e-10;

    bool operator==(const KecaOptions&) const = default;
};

struct KecaModel {
    KernelSpec kernel;
    std::vector<Sample> train;           ///< raw training features
    std::vector<std::size_t> axes;       ///< selected eigen-axis indices, in entropy-rank order
    std::vector<double> eigenvalues;     ///< lambda of each selected axis
    Matrix eigenvectors;                 ///< N x k, column i belongs to axes[i]
    EntropyRanking ranking;              ///< over all N axes
    std::vector<double> all_eigenvalues; ///< full spectrum, descending
    std::optional<std::size_t> requested_k;
    std::size_t k = 0;                   ///< effective dimension

    std::vector<Sample> prepared;        ///< training features after kernel input preparation

    std::size_t feature_length() const { return train.empty() ? 0 : train.front().size(); }
    std::size_t num_train() const { return train.size(); }
};

/// Indices of the axes that may carry entropy: lambda above the eigenvalue
/// threshold and e . 1 away from zero.
std::vector<std::size_t> surviving_axes(const EigenDecomposition& dec, const EntropyRanking& ranking,
                                        const KecaOptions& options);

KecaModel fit_keca(const std::vector<Sample>& train, const KernelSpec& spec, const KecaOptions& options = {});

/// Same as fit_keca for a precomputed kernel matrix of `train`.
KecaModel fit_keca_from_matrix(const Matrix& k, std::vector<Sample> train, const KernelSpec& spec,
                               const KecaOptions& options = {});

/// N x k matrix; column i is sqrt(lambda_i) e_i.
Matrix project_train(const KecaModel& model);

/// Coordinate i = e_i . k_x / sqrt(lambda_i), with k_x the kernel vector of x
/// against the training set.
std::vector<double> project(const KecaModel& model, std::span<const double> x);

/// Same projection from an already computed kernel vector.
std::vector<double> project_kernel_vector(const KecaModel& model, std::span<const double> kx);

}  // namespace gkeca
