#include "weylkit/triple.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace weylkit {

FundamentalSymmetry FundamentalSymmetry::standard(int h) {
    FundamentalSymmetry j;
    j.half_dimension = h;
    j.matrix = Matrix::Zero(2 * h, 2 * h);
    j.matrix.topRightCorner(h, h) = Complex(0, -1) * Matrix::Identity(h, h);
    j.matrix.bottomLeftCorner(h, h) = Complex(0, 1) * Matrix::Identity(h, h);
    return j;
}

FiniteTriple FiniteTriple::from_gamma_operator(int m, int h, const Matrix& gamma_matrix) {
    if (gamma_matrix.rows() != 2 * h || gamma_matrix.cols() != 2 * m)
        fail(ErrorKind::DimensionMismatch, "from_gamma_operator: Gamma must be 2h x 2m");
    FiniteTriple t;
    t.state_dim = m;
    t.boundary_dim = h;
    Matrix span(2 * m + 2 * h, 2 * m);
    span.topRows(2 * m) = Matrix::Identity(2 * m, 2 * m);
    span.bottomRows(2 * h) = gamma_matrix;
    t.gamma = Relation(2 * m, 2 * h, Subspace::from_span(span));
    t.j_state = FundamentalSymmetry::standard(m).matrix;
    t.j_boundary = FundamentalSymmetry::standard(h).matrix;
    return t;
}

FiniteTriple FiniteTriple::from_graph(int m, int h, const Matrix& graph_span) {
    if (graph_span.rows() != 2 * m + 2 * h)
        fail(ErrorKind::DimensionMismatch, "from_graph: row count mismatch");
    FiniteTriple t;
    t.state_dim = m;
    t.boundary_dim = h;
    t.gamma = Relation(2 * m, 2 * h, Subspace::from_span(graph_span));
    t.j_state = FundamentalSymmetry::standard(m).matrix;
    t.j_boundary = FundamentalSymmetry::standard(h).matrix;
    return t;
}

Relation krein_adjoint(const Relation& gamma, const Matrix& j_dom, const Matrix& j_ran) {
    const int nd = gamma.dom_dim(), nr = gamma.ran_dim();
    if (j_dom.rows() != nd || j_ran.rows() != nr)
        fail(ErrorKind::DimensionMismatch, "krein_adjoint: symmetry size mismatch");
    // (khat, ghat) with F^* J_dom g = H^* J_ran k for all graph columns [F; H].
    const Matrix f = gamma.top();
    const Matrix h = gamma.bottom();
    Matrix cond(gamma.dimension(), nr + nd);
    cond.leftCols(nr) = -h.adjoint() * j_ran;
    cond.rightCols(nd) = f.adjoint() * j_dom;
    return Relation(nr, nd, nullspace(cond));
}

double green_residual(const FiniteTriple& t) {
    const Matrix f = t.graph_state_rows();
    const Matrix h = t.graph_boundary_rows();
    if (t.gamma.dimension() == 0) return 0;
    const Matrix defect = f.adjoint() * t.j_state * f - h.adjoint() * t.j_boundary * h;
    return defect.cwiseAbs().maxCoeff();
}

IsometryVerdict is_isometric(const FiniteTriple& t, double tol) {
    IsometryVerdict v;
    v.residual = green_residual(t);
    v.holds = v.residual <= tol;
    return v;
}

IsometryVerdict is_unitary(const FiniteTriple& t, double tol) {
    IsometryVerdict v = is_isometric(t, tol);
    if (!v.holds) return v;
    const Relation adj = krein_adjoint(t.gamma, t.j_state, t.j_boundary);
    const Relation inv = t.gamma.inverse();
    if (!subspace_equal(inv.graph(), adj.graph(), tol)) {
        v.holds = false;
        v.residual = std::max(v.residual, largest_principal_angle(inv.graph(), adj.graph()));
    }
    return v;
}

Relation main_transform(const FiniteTriple& t) {
    const int m = t.state_dim, h = t.boundary_dim;
    const Matrix basis = t.gamma.graph().basis();
    const int k = t.gamma.dimension();
    Matrix span(2 * (m + h), k);
    span.topRows(m) = basis.topRows(m);                          // f
    span.middleRows(m, h) = basis.middleRows(2 * m, h);          // h
    span.middleRows(m + h, m) = basis.middleRows(m, m);          // f'
    span.bottomRows(h) = -basis.middleRows(2 * m + h, h);        // -h'
    return Relation(m + h, m + h, Subspace::from_span(span));
}

Matrix defect_coordinates(const FiniteTriple& t, Complex lambda, double rank_cutoff) {
    const int m = t.state_dim;
    const Matrix basis = t.gamma.graph().basis();
    const Matrix f = basis.topRows(m);
    const Matrix fp = basis.middleRows(m, m);
    return nullspace(Matrix(fp - lambda * f), rank_cutoff).basis();
}

WeylValue weyl_of_triple(const FiniteTriple& t, Complex lambda) {
    const int m = t.state_dim, h = t.boundary_dim;
    const Matrix w = defect_coordinates(t, lambda);
    const Matrix basis = t.gamma.graph().basis();
    WeylValue out;
    out.point = lambda;
    Matrix span(2 * h, w.cols());
    span.topRows(h) = basis.middleRows(2 * m, h) * w;
    span.bottomRows(h) = basis.middleRows(2 * m + h, h) * w;
    out.value = Relation::from_span(h, h, span);
    out.single_valued = out.value.is_single_valued();
    if (out.single_valued && out.value.dimension() == h &&
        smallest_singular_value(out.value.top()) > kAngleTol) {
        out.operator_matrix = out.value.operator_matrix();
        out.has_operator = true;
    }
    return out;
}

Matrix gamma_field(const FiniteTriple& t, Complex lambda) {
    const int m = t.state_dim, h = t.boundary_dim;
    const Matrix w = defect_coordinates(t, lambda);
    const Matrix basis = t.gamma.graph().basis();
    Matrix span(h + m, w.cols());
    span.topRows(h) = basis.middleRows(2 * m, h) * w;  // Gamma_0 data
    span.bottomRows(m) = basis.topRows(m) * w;         // defect vector itself
    const Relation g = Relation::from_span(h, m, span);
    if (!g.is_single_valued())
        fail(ErrorKind::MultivaluedBoundary, "gamma_field: mul Gamma_0 nontrivial on the defect space");
    return g.operator_part();
}

Relation kernel_extension(const FiniteTriple& t, int which) {
    const int m = t.state_dim, h = t.boundary_dim;
    const Matrix basis = t.gamma.graph().basis();
    const Matrix block = which == 0 ? basis.middleRows(2 * m, h) : basis.middleRows(2 * m + h, h);
    const Matrix w = nullspace(block).basis();
    Matrix span(2 * m, w.cols());
    span.topRows(m) = basis.topRows(m) * w;
    span.bottomRows(m) = basis.middleRows(m, m) * w;
    return Relation::from_span(m, m, span);
}

Relation constrained_extension(const FiniteTriple& t, const Relation& theta) {
    const int m = t.state_dim, h = t.boundary_dim;
    if (theta.dom_dim() != h || theta.ran_dim() != h)
        fail(ErrorKind::DimensionMismatch, "constrained_extension: Theta dimension mismatch");
    const Matrix basis = t.gamma.graph().basis();
    const Matrix bd = basis.bottomRows(2 * h);
    // boundary data must lie in Theta: project onto Theta^perp and take the kernel
    const Matrix tb = theta.graph().basis();
    const Matrix perp = bd - tb * (tb.adjoint() * bd);
    const Matrix w = nullspace(perp).basis();
    Matrix span(2 * m, w.cols());
    span.topRows(m) = basis.topRows(m) * w;
    span.bottomRows(m) = basis.middleRows(m, m) * w;
    return Relation::from_span(m, m, span);
}

Complex weyl_form(const WeylValue& m, const Vector& u, const Vector& v) {
    if (std::abs(m.point.imag()) == 0)
        fail(ErrorKind::DomainViolation, "weyl_form: Im lambda = 0");
    if (!m.has_operator)
        fail(ErrorKind::DomainViolation, "weyl_form: Weyl value has no operator representative");
    const Matrix& mm = m.operator_matrix;
    if (u.size() != mm.rows() || v.size() != mm.rows())
        fail(ErrorKind::DomainViolation, "weyl_form: vector size mismatch");
    const Complex num = (v.adjoint() * (mm * u)).value() - ((mm * v).adjoint() * u).value();
    return num / (m.point - std::conj(m.point));
}

Matrix cayley_to_contraction(const Matrix& m_op, Complex lambda) {
    if (lambda.imag() <= 0)
        fail(ErrorKind::DomainViolation, "cayley_to_contraction: lambda must lie in C_+");
    const int n = static_cast<int>(m_op.rows());
    const Matrix shift = m_op + Complex(0, 1) * Matrix::Identity(n, n);
    if (smallest_singular_value(shift) < 1e-13 * std::max(1.0, operator_norm(shift)))
        fail(ErrorKind::Singular, "cayley_to_contraction: M + iI numerically singular");
    return (m_op - Complex(0, 1) * Matrix::Identity(n, n)) * shift.partialPivLu().inverse();
}

Matrix contraction_to_weyl(const Matrix& theta) {
    const int n = static_cast<int>(theta.rows());
    const Matrix den = Matrix::Identity(n, n) - theta;
    if (smallest_singular_value(den) < 1e-13 * std::max(1.0, operator_norm(den)))
        fail(ErrorKind::Singular, "contraction_to_weyl: I - theta numerically singular");
    return Complex(0, 1) * (Matrix::Identity(n, n) + theta) * den.partialPivLu().inverse();
}

FiniteTriple triangular_transform(const FiniteTriple& t, const Matrix& g, const Matrix& e) {
    const int h = t.boundary_dim;
    if (g.rows() != h || g.cols() != h || e.rows() != h || e.cols() != h)
        fail(ErrorKind::DimensionMismatch, "triangular_transform: G, E must be h x h");
    if (smallest_singular_value(g) < 1e-13 * std::max(1.0, operator_norm(g)))
        fail(ErrorKind::SingularG, "triangular_transform: ker G != 0");
    if (hermiticity_defect(e) > 1e-10 * (1 + operator_norm(e)))
        fail(ErrorKind::NotHermitian, "triangular_transform: E not Hermitian");
    const int m = t.state_dim;
    const Matrix ginv = g.partialPivLu().inverse();
    const Matrix basis = t.gamma.graph().basis();
    Matrix span = basis;
    span.middleRows(2 * m, h) = ginv * basis.middleRows(2 * m, h);
    span.middleRows(2 * m + h, h) =
        e * ginv * basis.middleRows(2 * m, h) + g.adjoint() * basis.middleRows(2 * m + h, h);
    FiniteTriple out = t;
    out.gamma = Relation(2 * m, 2 * h, Subspace::from_span(span));
    return out;
}

FiniteTriple transpose_triple(const FiniteTriple& t) {
    const int m = t.state_dim, h = t.boundary_dim;
    const Matrix basis = t.gamma.graph().basis();
    Matrix span = basis;
    span.middleRows(2 * m, h) = basis.middleRows(2 * m + h, h);
    span.middleRows(2 * m + h, h) = -basis.middleRows(2 * m, h);
    FiniteTriple out = t;
    out.gamma = Relation(2 * m, 2 * h, Subspace::from_span(span));
    return out;
}

bool real_point_certificate(const FiniteTriple& t, double x, double tol) {
    const WeylValue mv = weyl_of_triple(t, Complex(x, 0));
    if (!mv.has_operator) return false;
    const Matrix& mx = mv.operator_matrix;
    if (hermiticity_defect(mx) > tol * (1 + operator_norm(mx))) return false;
    const int h = static_cast<int>(mx.rows());
    const Matrix shifted = mx + Complex(x, 0) * Matrix::Identity(h, h);
    return smallest_singular_value(shifted) > tol * (1 + operator_norm(shifted));
}

Matrix random_krein_unitary(int half_dim, unsigned seed) {
    const Matrix j = FundamentalSymmetry::standard(half_dim).matrix;
    Matrix a = 0.4 * random_matrix(2 * half_dim, 2 * half_dim, seed);
    const Matrix k = 0.5 * (a - j * a.adjoint() * j);
    return k.exp();
}

FiniteTriple random_unitary_triple(int half_dim, unsigned seed) {
    return FiniteTriple::from_gamma_operator(half_dim, half_dim, random_krein_unitary(half_dim, seed));
}

} // namespace weylkit
