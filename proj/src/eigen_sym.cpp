#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gkeca/keca.hpp"

namespace gkeca {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) s += a(i, j) * a(i, j);
        }
    }
    return std::sqrt(s);
}

// One pass of plane rotations over every (p, q) pair, p < q.
void sweep(Matrix& a, Matrix& v) {
    const std::size_t n = a.rows();
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            if (apq == 0.0) continue;
            const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
            double t;
            if (std::abs(theta) > 1e150) {
                t = 0.5 / theta;
            } else {
                t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            }
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            const double tau = s / (1.0 + c);

            a(p, p) -= t * apq;
            a(q, q) += t * apq;
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == p || r == q) continue;
                const double arp = a(r, p);
                const double arq = a(r, q);
                const double np = arp - s * (arq + tau * arp);
                const double nq = arq + s * (arp - tau * arq);
                a(r, p) = np;
                a(p, r) = np;
                a(r, q) = nq;
                a(q, r) = nq;
            }
            for (std::size_t r = 0; r < n; ++r) {
                const double vrp = v(r, p);
                const double vrq = v(r, q);
                v(r, p) = vrp - s * (vrq + tau * vrp);
                v(r, q) = vrq + s * (vrp - tau * vrq);
            }
        }
    }
}

}  // namespace

EigenDecomposition eig_sym(const Matrix& input, const JacobiOptions& options) {
    if (input.rows() != input.cols()) {
        throw EigenError(EigenErrorKind::not_square, "eig_sym: matrix is not square");
    }
    const std::size_t n = input.rows();
    for (double x : input.data()) {
        if (!std::isfinite(x)) throw EigenError(EigenErrorKind::non_finite, "eig_sym: matrix has non-finite entries");
    }
    const double norm = frobenius_norm(input);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(input(i, j) - input(j, i)) > 1e-12 * norm) {
                throw EigenError(EigenErrorKind::not_symmetric, "eig_sym: matrix is not symmetric");
            }
        }
    }

    Matrix a = input;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = m;
            a(j, i) = m;
        }
    }
    Matrix v = Matrix::identity(n);

    int sweeps = 0;
    while (off_diagonal_norm(a) > options.tolerance * norm) {
        if (sweeps >= options.max_sweeps) {
            throw EigenError(EigenErrorKind::no_convergence,
                             "eig_sym: no convergence after " + std::to_string(sweeps) + " sweeps");
        }
        sweep(a, v);
        ++sweeps;
    }
    for (int i = 0; i < options.polish_sweeps && off_diagonal_norm(a) > 0.0; ++i) {
        sweep(a, v);
        ++sweeps;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenDecomposition dec;
    dec.sweeps = sweeps;
    dec.values.resize(n);
    dec.vectors = Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t src = order[col];
        dec.values[col] = a(src, src);
        double peak = 0.0;
        for (std::size_t r = 0; r < n; ++r) peak = std::max(peak, std::abs(v(r, src)));
        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (std::abs(v(r, src)) > 1e-9 * peak) {
                sign = v(r, src) < 0.0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t r = 0; r < n; ++r) dec.vectors(r, col) = sign * v(r, src);
    }
    return dec;
}

}  // namespace gkeca
