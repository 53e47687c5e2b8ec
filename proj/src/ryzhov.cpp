#include "weylkit/ryzhov.hpp"

namespace weylkit {

void RyzhovTriple::validate() const {
    if (a0_inv.rows() != a0_inv.cols()) fail(ErrorKind::DimensionMismatch, "A0inv not square");
    if (e.rows() != e.cols()) fail(ErrorKind::DimensionMismatch, "E not square");
    if (g.rows() != a0_inv.rows() || g.cols() != e.rows())
        fail(ErrorKind::DimensionMismatch, "G must be state_dim x boundary_dim");
    if (hermiticity_defect(a0_inv) > 1e-12 * (1 + operator_norm(a0_inv)))
        fail(ErrorKind::NotHermitian, "A0inv not Hermitian");
    if (hermiticity_defect(e) > 1e-12 * (1 + operator_norm(e)))
        fail(ErrorKind::NotHermitian, "E not Hermitian");
    if (smallest_singular_value(a0_inv) <= 1e-13 * std::max(1.0, operator_norm(a0_inv)))
        fail(ErrorKind::Singular, "A0inv has nontrivial kernel");
    if (smallest_singular_value(g) <= 1e-13 * std::max(1.0, operator_norm(g)))
        fail(ErrorKind::SingularG, "G has nontrivial kernel");
}

RyzhovTriple RyzhovTriple::random(int n, int h, unsigned seed, bool a0_positive, bool e_negative) {
    RyzhovTriple t;
    t.a0_inv = a0_positive ? random_hpd(n, seed, 0.4, 2.5)
                           : random_hermitian(n, seed) + 0.1 * Matrix::Identity(n, n);
    // keep A0inv invertible in the indefinite case
    if (!a0_positive && smallest_singular_value(t.a0_inv) < 1e-3)
        t.a0_inv += 0.5 * Matrix::Identity(n, n);
    t.g = random_matrix(n, h, seed + 1);
    t.e = e_negative ? Matrix(-random_hpd(h, seed + 2, 0.2, 1.5)) : random_hermitian(h, seed + 2);
    t.validate();
    return t;
}

static Matrix resolvent_factor(const RyzhovTriple& t, Complex lambda) {
    const int n = t.state_dim();
    const Matrix shift = Matrix::Identity(n, n) - lambda * t.a0_inv;
    if (smallest_singular_value(shift) < 1e-12 * std::max(1.0, operator_norm(shift)))
        fail(ErrorKind::ResolventPole, "I - lambda A0inv singular");
    return shift.partialPivLu().inverse();
}

Matrix ryzhov_weyl(const RyzhovTriple& t, Complex lambda) {
    return t.e + lambda * t.g.adjoint() * resolvent_factor(t, lambda) * t.g;
}

Matrix ryzhov_gamma(const RyzhovTriple& t, Complex lambda) {
    return resolvent_factor(t, lambda) * t.g;
}

Matrix ryzhov_m0(const RyzhovTriple& t, Complex lambda) {
    return lambda * t.g.adjoint() * resolvent_factor(t, lambda) * t.g;
}

Matrix tilde_transform(const RyzhovTriple& t, Complex lambda) {
    const Matrix m0 = ryzhov_m0(t, lambda);
    if (smallest_singular_value(m0) < 1e-12 * std::max(1.0, operator_norm(m0)))
        fail(ErrorKind::Singular, "tilde_transform: M0(lambda) singular (pole at 0 for lambda -> 0)");
    return -m0.partialPivLu().inverse();
}

SchurData SchurData::decompose(const RyzhovTriple& t) {
    t.validate();
    SchurData s;
    const Subspace ran_g = Subspace::from_span(t.g);
    s.q_ran = ran_g.basis();
    s.q_perp = ran_g.orthogonal_complement().basis();
    s.a11 = s.q_ran.adjoint() * t.a0_inv * s.q_ran;
    s.a21 = s.q_perp.adjoint() * t.a0_inv * s.q_ran;
    s.a22 = s.q_perp.adjoint() * t.a0_inv * s.q_perp;
    return s;
}

Matrix SchurData::reassemble() const {
    const int n = static_cast<int>(q_ran.rows());
    Matrix q(n, n);
    q << q_ran, q_perp;
    Matrix blocks(n, n);
    const int r = static_cast<int>(q_ran.cols());
    blocks.topLeftCorner(r, r) = a11;
    blocks.topRightCorner(r, n - r) = a21.adjoint();
    blocks.bottomLeftCorner(n - r, r) = a21;
    blocks.bottomRightCorner(n - r, n - r) = a22;
    return q * blocks * q.adjoint();
}

Matrix schur_renormalize(const RyzhovTriple& t, Complex lambda) {
    if (lambda == Complex(0, 0)) fail(ErrorKind::ZeroLambda, "schur_renormalize: lambda = 0");
    const SchurData s = SchurData::decompose(t);
    const int r = static_cast<int>(s.a11.rows());
    const int p = static_cast<int>(s.a22.rows());
    const Complex inv_l = 1.0 / lambda;
    Matrix core = Matrix::Zero(r, r);
    if (p > 0) {
        const Matrix a22s = s.a22 - inv_l * Matrix::Identity(p, p);
        if (smallest_singular_value(a22s) < 1e-12 * std::max(1.0, operator_norm(a22s)))
            fail(ErrorKind::Singular, "schur_renormalize: A22 - 1/lambda singular");
        core = s.a21.adjoint() * a22s.partialPivLu().solve(s.a21);
    }
    return s.a11 - inv_l * Matrix::Identity(r, r) - core;
}

double domain_invariance_probe(const RyzhovTriple& t, Complex lambda, Complex mu) {
    const SchurData s = SchurData::decompose(t);
    const Matrix range_l = s.q_ran.adjoint() * ryzhov_gamma(t, lambda); // P_G coords
    const Matrix range_m = s.q_ran.adjoint() * ryzhov_gamma(t, mu);
    return largest_principal_angle(Subspace::from_span(range_l), Subspace::from_span(range_m));
}

FiniteTriple assemble_triple(const RyzhovTriple& t) {
    t.validate();
    const int n = t.state_dim();
    const int h = t.boundary_dim();
    // columns parametrized by (f', phi)
    Matrix span(2 * n + 2 * h, n + h);
    span.setZero();
    span.topRows(n) << t.a0_inv, t.g;                                    // f
    span.middleRows(n, n) << Matrix::Identity(n, n), Matrix::Zero(n, h); // f'
    span.middleRows(2 * n, h) << Matrix::Zero(h, n), Matrix::Identity(h, h); // Gamma_0
    span.bottomRows(h) << t.g.adjoint(), t.e;                            // Gamma_1
    return FiniteTriple::from_graph(n, h, span);
}

Relation ryzhov_a0(const RyzhovTriple& t) {
    const int n = t.state_dim();
    Matrix span(2 * n, n);
    span.topRows(n) = t.a0_inv;
    span.bottomRows(n) = Matrix::Identity(n, n);
    return Relation::from_span(n, n, span);
}

} // namespace weylkit
