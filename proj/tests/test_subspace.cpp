#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weylkit/relation.hpp"

using namespace weylkit;

TEST_CASE("from_span orthonormalizes and ranks") {
    Matrix span(3, 2);
    span << 1, 2, 0, 0, 0, 0;
    const Subspace s = Subspace::from_span(span);
    CHECK(s.dimension() == 1);
    CHECK(s.ambient_dimension() == 3);
    Vector x(3);
    x << 5, 0, 0;
    CHECK(s.contains(x));
    x << 0, 1, 0;
    CHECK(!s.contains(x));
}

TEST_CASE("principal angles") {
    Matrix a(3, 1), b(3, 1);
    a << 1, 0, 0;
    b << 0, 1, 0;
    CHECK(largest_principal_angle(Subspace(a), Subspace(b)) == doctest::Approx(M_PI / 2));
    b << 1, 1, 0;
    CHECK(largest_principal_angle(Subspace(a), Subspace::from_span(b)) == doctest::Approx(M_PI / 4));
    CHECK(subspace_equal(Subspace(a), Subspace(a)));
}

TEST_CASE("nullspace") {
    Matrix a(2, 3);
    a << 1, 0, 0, 0, 1, 0;
    const Subspace k = nullspace(a);
    REQUIRE(k.dimension() == 1);
    CHECK(std::abs(std::abs(k.basis()(2, 0)) - 1) < 1e-14);
}

TEST_CASE("intersection") {
    Matrix a(3, 2), b(3, 2);
    a << 1, 0, 0, 1, 0, 0; // span{e1,e2}
    b << 0, 0, 1, 0, 0, 1; // span{e2,e3}
    const Subspace c = intersect(Subspace(a), Subspace(b));
    REQUIRE(c.dimension() == 1);
    Vector e2(3);
    e2 << 0, 1, 0;
    CHECK(c.contains(e2));
}

TEST_CASE("relation basics") {
    Matrix a(2, 2);
    a << 1, 2, 3, 4;
    const Relation r = Relation::from_operator(a);
    CHECK(r.is_single_valued());
    CHECK((r.operator_matrix() - a).cwiseAbs().maxCoeff() < 1e-13);

    const Relation rinv = r.inverse();
    const Matrix ai = a.partialPivLu().inverse();
    CHECK((rinv.operator_matrix() - ai).cwiseAbs().maxCoeff() < 1e-12);

    // adjoint of an operator graph is the graph of the conjugate transpose
    const Relation radj = r.adjoint();
    CHECK((radj.operator_matrix() - Matrix(a.adjoint())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("selfadjoint relation check") {
    const Matrix h = random_hermitian(3, 11);
    CHECK(Relation::from_operator(h).is_selfadjoint());
    Matrix nh = h;
    nh(0, 1) += Complex(0.1, 0.3);
    CHECK(!Relation::from_operator(nh).is_selfadjoint());
    // pure multivalued relation {0} x C^n is selfadjoint
    CHECK(Relation::pure_mul(2).is_selfadjoint());
    CHECK(!Relation::pure_mul(2).is_single_valued());
}

TEST_CASE("relation resolvent") {
    const Matrix h = random_hermitian(3, 5);
    const Relation r = Relation::from_operator(h);
    const Complex z(0.3, 0.8);
    const Matrix res = r.resolvent_matrix(z);
    const Matrix expect = Matrix(h - z * Matrix::Identity(3, 3)).partialPivLu().inverse();
    CHECK((res - expect).cwiseAbs().maxCoeff() < 1e-12);
}
