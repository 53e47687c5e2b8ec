#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weylkit/numerics.hpp"

#include <cmath>

using namespace weylkit;

TEST_CASE("hermitian and imaginary parts") {
    Matrix a(1, 1);
    a << Complex(0, 1);
    CHECK(hermitian_part(a)(0, 0) == Complex(0, 0));
    CHECK(imaginary_part(a)(0, 0) == Complex(1, 0));

    Matrix b(2, 2);
    b << 0, 1, 0, 0;
    const Matrix hb = hermitian_part(b);
    CHECK(hb(0, 1) == Complex(0.5, 0));
    CHECK(hb(1, 0) == Complex(0.5, 0));
    CHECK(hb(0, 0) == Complex(0, 0));

    // Hermitian input has vanishing imaginary part
    const Matrix h = random_hermitian(4, 7);
    CHECK(imaginary_part(h).norm() < 1e-14);

    Matrix c(2, 2);
    c << 0, Complex(0, 2), 0, 0;
    const Matrix ic = imaginary_part(c);
    CHECK(std::abs(ic(0, 1) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(ic(1, 0) - Complex(1, 0)) < 1e-15);

    Matrix rect(2, 3);
    CHECK_THROWS_AS((void)hermitian_part(rect), Error);
}

TEST_CASE("split identity A = Re A + i Im A") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        const Matrix a = random_matrix(5, 5, seed);
        const Matrix recombined = hermitian_part(a) + Complex(0, 1) * imaginary_part(a);
        CHECK((a - recombined).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(hermiticity_defect(hermitian_part(a)) < 1e-14);
        CHECK(hermiticity_defect(imaginary_part(a)) < 1e-14);
    }
}

TEST_CASE("operator norm") {
    Matrix p(2, 2);
    p << 0, 1, 1, 0;
    CHECK(operator_norm(p) == doctest::Approx(1).epsilon(1e-12));
    CHECK(operator_norm(Matrix::Identity(5, 5)) == doctest::Approx(1).epsilon(1e-12));
    Matrix d(2, 2);
    d << 3, 0, 0, Complex(0, 4);
    CHECK(operator_norm(d) == doctest::Approx(4).epsilon(1e-12));
}

TEST_CASE("operator norm submultiplicative") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const Matrix a = random_matrix(4, 4, 100 + seed);
        const Matrix b = random_matrix(4, 4, 200 + seed);
        CHECK(operator_norm(a * b) <= operator_norm(a) * operator_norm(b) * (1 + 1e-12));
    }
}

TEST_CASE("psd_check") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1;
    CHECK(psd_check(d));
    d(1, 1) = -1;
    CHECK(!psd_check(d));
    Matrix skew(2, 2);
    skew << 0, 1, -1, 0;
    CHECK_THROWS_AS(psd_check(skew), Error);
}

TEST_CASE("det and inverse") {
    CHECK(std::abs(det(Matrix::Identity(3, 3)) - Complex(1, 0)) < 1e-15);
    Matrix d(2, 2);
    d << 2, 0, 0, 4;
    const Matrix di = inverse(d);
    CHECK(std::abs(di(0, 0) - Complex(0.5, 0)) < 1e-15);
    CHECK(std::abs(di(1, 1) - Complex(0.25, 0)) < 1e-15);
    CHECK_THROWS_AS(inverse(Matrix::Zero(2, 2)), Error);

    for (unsigned seed = 0; seed < 8; ++seed) {
        Matrix a = random_matrix(5, 5, 300 + seed) + 3.0 * Matrix::Identity(5, 5);
        const Matrix back = inverse(inverse(a));
        CHECK((a - back).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(operator_norm(Matrix(a * inverse(a) - Matrix::Identity(5, 5))) < 1e-10);
    }
}

TEST_CASE("complex trig helpers") {
    CHECK(std::abs(cot_c(Complex(M_PI / 4, 0)) - Complex(1, 0)) < 1e-14);
    // saturation limits
    CHECK(std::abs(cot_c(Complex(0.3, 800)) - Complex(0, -1)) == 0);
    CHECK(std::abs(cot_c(Complex(0.3, -800)) - Complex(0, 1)) == 0);
    CHECK(std::abs(csc_c(Complex(0.3, 800))) == 0);
    CHECK(std::abs(sinc_c(Complex(0, 0)) - Complex(1, 0)) == 0);
    CHECK(std::abs(sinc_c(Complex(1e-6, 0)) - Complex(std::sin(1e-6) / 1e-6, 0)) < 1e-16);
    CHECK(std::abs(sinc_c(Complex(2, 1)) - std::sin(Complex(2, 1)) / Complex(2, 1)) < 1e-15);
}

TEST_CASE("bracket_roots finds sin roots") {
    auto f = [](double x) -> std::optional<double> { return std::sin(x); };
    const auto res = bracket_roots(f, 1, 7, 1000);
    REQUIRE(res.roots.size() == 2);
    CHECK(std::abs(res.roots[0].x - M_PI) < 1e-10);
    CHECK(std::abs(res.roots[1].x - 2 * M_PI) < 1e-10);
}

TEST_CASE("bracket_roots finds sqrt2") {
    auto f = [](double x) -> std::optional<double> { return x * x - 2; };
    const auto res = bracket_roots(f, 0, 2, 100);
    REQUIRE(res.roots.size() == 1);
    CHECK(std::abs(res.roots[0].x - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("bracket_roots skips pole sign changes") {
    // tan has a pole at pi/2 with a sign change; mask it
    auto f = [](double x) -> std::optional<double> {
        if (std::abs(std::cos(x)) < 1e-3) return std::nullopt;
        return std::tan(x);
    };
    const auto res = bracket_roots(f, 0.5, 4.5, 2000);
    REQUIRE(res.roots.size() == 1);
    CHECK(std::abs(res.roots[0].x - M_PI) < 1e-10);
    CHECK(res.excluded_cells > 0);
}

TEST_CASE("bracket_roots recovers polynomial roots") {
    // (x-1)(x-2)(x-3.5)
    auto f = [](double x) -> std::optional<double> { return (x - 1) * (x - 2) * (x - 3.5); };
    const auto res = bracket_roots(f, 0, 5, 500);
    REQUIRE(res.roots.size() == 3);
    CHECK(std::abs(res.roots[0].x - 1) < 1e-10);
    CHECK(std::abs(res.roots[1].x - 2) < 1e-10);
    CHECK(std::abs(res.roots[2].x - 3.5) < 1e-10);
}
