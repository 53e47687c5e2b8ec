#include "weylkit/relation.hpp"

namespace weylkit {

Relation Relation::from_operator(const Matrix& a) {
    const int n = static_cast<int>(a.cols());
    const int m = static_cast<int>(a.rows());
    Matrix span(n + m, n);
    span.topRows(n) = Matrix::Identity(n, n);
    span.bottomRows(m) = a;
    return Relation(n, m, Subspace::from_span(span));
}

Relation Relation::from_span(int dom_dim, int ran_dim, const Matrix& span) {
    if (span.rows() != dom_dim + ran_dim)
        fail(ErrorKind::DimensionMismatch, "Relation::from_span: row count mismatch");
    return Relation(dom_dim, ran_dim, Subspace::from_span(span));
}

Relation Relation::pure_mul(int n) {
    Matrix span(2 * n, n);
    span.topRows(n).setZero();
    span.bottomRows(n) = Matrix::Identity(n, n);
    return Relation(n, n, Subspace(span));
}

Subspace Relation::mul() const {
    const Subspace kt = nullspace(top());
    if (kt.dimension() == 0) return Subspace::zero(ran_dim_);
    return Subspace::from_span(bottom() * kt.basis());
}

Subspace Relation::kernel() const {
    const Subspace kb = nullspace(bottom());
    if (kb.dimension() == 0) return Subspace::zero(dom_dim_);
    return Subspace::from_span(top() * kb.basis());
}

Relation Relation::inverse() const {
    Matrix span(ran_dim_ + dom_dim_, dimension());
    span.topRows(ran_dim_) = bottom();
    span.bottomRows(dom_dim_) = top();
    return Relation(ran_dim_, dom_dim_, Subspace::from_span(span));
}

Relation Relation::adjoint() const {
    // (h,k) in R*  <=>  bottom^* h - top^* k = 0
    Matrix cond(dimension(), ran_dim_ + dom_dim_);
    cond.leftCols(ran_dim_) = bottom().adjoint();
    cond.rightCols(dom_dim_) = -top().adjoint();
    return Relation(ran_dim_, dom_dim_, nullspace(cond));
}

bool Relation::is_symmetric(double tol) const {
    if (dom_dim_ != ran_dim_) return false;
    // <y, x'> = <x, y'> on the graph: Gram antisymmetry bottom^*top = top^*bottom
    const Matrix g = bottom().adjoint() * top() - top().adjoint() * bottom();
    return g.cwiseAbs().maxCoeff() <= tol;
}

bool Relation::is_selfadjoint(double tol) const {
    if (dom_dim_ != ran_dim_) return false;
    const Relation adj = adjoint();
    if (adj.dimension() != dimension()) return false;
    return subspace_equal(graph_, adj.graph(), tol);
}

Matrix Relation::operator_matrix(double tol) const {
    if (dimension() != dom_dim_)
        fail(ErrorKind::MultivaluedBoundary, "operator_matrix: graph dimension != domain dimension");
    const Matrix t = top();
    if (smallest_singular_value(t) <= tol)
        fail(ErrorKind::MultivaluedBoundary, "operator_matrix: relation not an everywhere-defined operator");
    return bottom() * t.partialPivLu().inverse();
}

Matrix Relation::operator_part(double tol) const {
    if (mul().dimension() != 0)
        fail(ErrorKind::MultivaluedBoundary, "operator_part: relation has a nontrivial multivalued part");
    // least-squares: M maps top-coordinates to bottom-coordinates
    const Matrix t = top();
    Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = kRankCutoff * std::max(sv.size() ? sv(0) : 0.0, 1e-300);
    Eigen::VectorXd inv(sv.size());
    for (int i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cut ? 1.0 / sv(i) : 0.0;
    const Matrix pinv = svd.matrixV() * inv.asDiagonal().toDenseMatrix().cast<Complex>() * svd.matrixU().adjoint();
    return bottom() * pinv;
}

Relation Relation::shift(Complex z) const {
    if (dom_dim_ != ran_dim_) fail(ErrorKind::DimensionMismatch, "shift: relation not square");
    Matrix span(dom_dim_ + ran_dim_, dimension());
    span.topRows(dom_dim_) = top();
    span.bottomRows(ran_dim_) = bottom() - z * top();
    return Relation(dom_dim_, ran_dim_, Subspace::from_span(span));
}

Matrix Relation::resolvent_matrix(Complex z) const {
    const Relation inv = shift(z).inverse();
    try {
        return inv.operator_matrix();
    } catch (const Error&) {
        fail(ErrorKind::ResolventPole, "resolvent_matrix: z is not in the resolvent set");
    }
}

} // namespace weylkit
