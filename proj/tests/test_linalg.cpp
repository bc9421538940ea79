#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ifskit/linalg.hpp"

using namespace ifskit;

namespace {

Matrix random_hermitian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = u(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = cplx(u(rng), u(rng));
            a(j, i) = std::conj(a(i, j));
        }
    }
    return a;
}

}  // namespace

TEST_CASE("jacobi reproduces known eigenvalues") {
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = -3.0;
    const auto eig = hermitian_eig(a);
    CHECK(eig.values[0] == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-14));

    // [[0, i], [-i, 0]] has eigenvalues +-1.
    Matrix b(2, 2);
    b(0, 1) = cplx(0.0, 1.0);
    b(1, 0) = cplx(0.0, -1.0);
    const auto eb = hermitian_eig(b);
    CHECK(eb.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eb.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("jacobi residual and orthonormality on random hermitian matrices") {
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        const std::size_t n = 24;
        const Matrix a = random_hermitian(n, seed);
        const auto eig = hermitian_eig(a);

        // A V = V diag(values)
        Matrix av = a * eig.vectors;
        Matrix vd = eig.vectors;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) vd(i, j) *= eig.values[j];
        CHECK((av - vd).max_abs() < 1e-12);

        Matrix gram = eig.vectors.conj_transpose() * eig.vectors;
        gram -= Matrix::identity(n);
        CHECK(gram.max_abs() < 1e-13);
    }
}

TEST_CASE("power norm is a lower bound and converges on random matrices") {
    for (std::uint64_t seed : {5u, 6u}) {
        const Matrix a = random_hermitian(20, seed);
        const double exact = hermitian_spectral_norm(a);
        const double power = hermitian_power_norm(a);
        CHECK(power <= exact + 1e-12);
        CHECK(power == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("matrix multiply matches hand computation") {
    Matrix a(2, 3), b(3, 2);
    int v = 1;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = v++;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) b(i, j) = v++;
    const Matrix c = a * b;  // [[1,2,3],[4,5,6]] * [[7,8],[9,10],[11,12]]
    CHECK(c(0, 0).real() == doctest::Approx(58.0));
    CHECK(c(0, 1).real() == doctest::Approx(64.0));
    CHECK(c(1, 0).real() == doctest::Approx(139.0));
    CHECK(c(1, 1).real() == doctest::Approx(154.0));
}
