#include <doctest.h>

#include <numbers>

#include "gkeca/keca.hpp"
#include "gkeca/kernels.hpp"
#include "test_support.hpp"

using namespace gkeca;
using namespace gkeca::testing;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<KernelSpec> all_specs() {
    return {KernelSpec::cosine(), KernelSpec::gaussian(0.8), KernelSpec::polynomial(3, 1.0),
            KernelSpec::cosine(false), KernelSpec::gaussian(2.5, false), KernelSpec::polynomial(2, 0.5, false)};
}

std::vector<double> unit(std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n > 0) {
        for (double& x : v) x /= n;
    }
    return v;
}

double ref_kernel(std::vector<double> x, std::vector<double> y, const KernelSpec& s) {
    if (s.normalize_inputs) {
        x = unit(x);
        y = unit(y);
    }
    double dot = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        d2 += (x[i] - y[i]) * (x[i] - y[i]);
    }
    switch (s.kind) {
        case KernelKind::cosine: return pi / 4 * std::cos(pi * dot / 2);
        case KernelKind::gaussian: return std::exp(-d2 / (2 * *s.sigma * *s.sigma));
        case KernelKind::polynomial: return std::pow(dot + *s.offset, *s.degree);
    }
    return 0.0;
}

std::vector<Sample> random_samples(Rng& rng, std::size_t n, std::size_t d) {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_vector(rng, d));
    return out;
}

}  // namespace

TEST_CASE("kernel values") {
    CHECK(eval_kernel(std::vector<double>{1, 0}, std::vector<double>{0, 3}, KernelSpec::cosine()) ==
          doctest::Approx(0.785398).epsilon(1e-6));
    CHECK(std::abs(eval_kernel(std::vector<double>{2, 2}, std::vector<double>{5, 5}, KernelSpec::cosine())) <= 1e-15);
    CHECK(eval_kernel(std::vector<double>{0.3, -4}, std::vector<double>{0.3, -4}, KernelSpec::gaussian(1.3)) == 1.0);
    CHECK(eval_kernel(std::vector<double>{1, 2}, std::vector<double>{3, 4}, KernelSpec::polynomial(2, 1.0, false)) ==
          doctest::Approx(144.0));
}

TEST_CASE("kernel values agree with direct formulas") {
    Rng rng(1);
    for (const auto& s : all_specs()) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto x = random_vector(rng, 6);
            const auto y = random_vector(rng, 6);
            CHECK(eval_kernel(x, y, s) == doctest::Approx(ref_kernel(x, y, s)).epsilon(1e-12));
            CHECK(eval_kernel(x, y, s) == eval_kernel(y, x, s));
        }
    }
}

TEST_CASE("zero vectors normalize to zero") {
    const std::vector<double> z{0, 0, 0};
    const std::vector<double> x{1, 2, 3};
    CHECK(eval_kernel(z, x, KernelSpec::cosine()) == doctest::Approx(pi / 4));
    CHECK(prepare_sample(z, KernelSpec::cosine()) == z);
}

TEST_CASE("length mismatch") {
    CHECK_THROWS_AS(eval_kernel(std::vector<double>{1, 2}, std::vector<double>{1}, KernelSpec::cosine()),
                    std::invalid_argument);
    CHECK_THROWS_AS(kernel_matrix({{1, 2}, {1}}, KernelSpec::cosine()), std::invalid_argument);
    CHECK_THROWS_AS(kernel_vector(std::vector<double>{1}, {{1, 2}}, KernelSpec::cosine()), std::invalid_argument);
}

TEST_CASE("kernel spec validation") {
    KernelSpec s = KernelSpec::gaussian(1.0);
    s.degree = 2;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = KernelSpec::gaussian(1.0);
    s.sigma.reset();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::gaussian(0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::polynomial(0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::polynomial(2, -1.0).validate(), std::invalid_argument);
    CHECK_NOTHROW(KernelSpec::polynomial(1, 0.0).validate());
    CHECK(parse_kernel_kind("gaussian") == KernelKind::gaussian);
    CHECK_FALSE(parse_kernel_kind("sigmoid").has_value());
}

TEST_CASE("kernel matrix") {
    SUBCASE("single sample") {
        const auto k = kernel_matrix({{1.0, 2.0}}, KernelSpec::gaussian(1.0));
        CHECK(k.rows() == 1);
        CHECK(k(0, 0) == 1.0);
    }
    SUBCASE("identical points under the gaussian") {
        const auto k = kernel_matrix({{0.5, 0.5}, {0.5, 0.5}}, KernelSpec::gaussian(1.0));
        for (double v : k.data()) CHECK(v == 1.0);
    }
    SUBCASE("entrywise pairwise evaluation, exact symmetry") {
        Rng rng(2);
        for (const auto& s : all_specs()) {
            const auto xs = random_samples(rng, 5, 4);
            const auto k = kernel_matrix(xs, s);
            for (std::size_t i = 0; i < 5; ++i) {
                for (std::size_t j = 0; j < 5; ++j) {
                    CHECK(k(i, j) == k(j, i));
                    CHECK(k(i, j) == doctest::Approx(eval_kernel(xs[i], xs[j], s)).epsilon(1e-15));
                }
            }
            CHECK(k(2, 3) == eval_kernel(xs[2], xs[3], s));
        }
    }
    SUBCASE("empty") { CHECK_THROWS_AS(kernel_matrix({}, KernelSpec::cosine()), std::invalid_argument); }
}

TEST_CASE("kernel vector") {
    Rng rng(3);
    for (const auto& s : all_specs()) {
        const auto xs = random_samples(rng, 6, 5);
        const auto k = kernel_matrix(xs, s);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const auto v = kernel_vector(xs[j], xs, s);
            for (std::size_t t = 0; t < xs.size(); ++t) CHECK(v[t] == k(j, t));
        }
        const auto probe = random_vector(rng, 5);
        const auto v = kernel_vector(probe, xs, s);
        for (std::size_t t = 0; t < xs.size(); ++t) {
            CHECK(v[t] == doctest::Approx(ref_kernel(probe, xs[t], s)).epsilon(1e-12));
        }
    }
    CHECK(kernel_vector(std::vector<double>{1, 2}, {}, KernelSpec::cosine()).empty());
}

TEST_CASE("cosine kernel is bounded by pi/4") {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = random_vector(rng, 3, -10, 10);
        const auto y = random_vector(rng, 3, -10, 10);
        CHECK(std::abs(eval_kernel(x, y, KernelSpec::cosine())) <= pi / 4 + 1e-15);
    }
}

TEST_CASE("gaussian kernel matrices are positive semi-definite") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto xs = random_samples(rng, static_cast<std::size_t>(uniform_int(rng, 2, 20)), 3);
        const auto dec = eig_sym(kernel_matrix(xs, KernelSpec::gaussian(uniform(rng, 0.2, 3.0), false)));
        CHECK(dec.values.back() >= -1e-8 * dec.values.front());
    }
}
