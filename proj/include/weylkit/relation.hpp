#pragma once

#include "weylkit/subspace.hpp"

namespace weylkit {

/// A linear relation from C^dom_dim to C^ran_dim: a subspace of the product,
/// stored as an orthonormal graph basis [top; bottom].  Multivalued and
/// non-densely-defined relations are first-class.
class Relation {
public:
    Relation() = default;
    Relation(int dom_dim, int ran_dim, Subspace graph)
        : dom_dim_(dom_dim), ran_dim_(ran_dim), graph_(std::move(graph)) {
        if (graph_.ambient_dimension() != dom_dim_ + ran_dim_)
            fail(ErrorKind::DimensionMismatch, "Relation: graph/space size mismatch");
    }

    /// Graph of a matrix A: pairs (x, Ax).
    static Relation from_operator(const Matrix& a);
    /// Relation spanned by the (not necessarily orthonormal) columns of [top; bottom].
    static Relation from_span(int dom_dim, int ran_dim, const Matrix& span);
    /// The zero operator on C^n.
    static Relation zero_operator(int n) { return from_operator(Matrix::Zero(n, n)); }
    /// The purely multivalued relation {0} x C^n ("Theta = infinity").
    static Relation pure_mul(int n);

    int dom_dim() const { return dom_dim_; }
    int ran_dim() const { return ran_dim_; }
    int dimension() const { return graph_.dimension(); }
    const Subspace& graph() const { return graph_; }

    /// First components of the graph basis (not orthonormal).
    Matrix top() const { return graph_.basis().topRows(dom_dim_); }
    Matrix bottom() const { return graph_.basis().bottomRows(ran_dim_); }

    Subspace domain() const { return Subspace::from_span(top()); }
    Subspace range() const { return Subspace::from_span(bottom()); }
    /// mul R = { y : (0, y) in R }.
    Subspace mul() const;
    /// ker R = { x : (x, 0) in R }.
    Subspace kernel() const;

    Relation inverse() const; // swap components
    /// Hilbert-space adjoint R* = { (h,k) : <y,h> = <x,k> for all (x,y) in R }.
    Relation adjoint() const;

    bool is_single_valued(double tol = kAngleTol) const { return mul().dimension() == 0; }
    bool is_symmetric(double tol = kAngleTol) const;
    bool is_selfadjoint(double tol = kAngleTol) const;

    /// Matrix representative on the full space when the relation is the graph
    /// of an everywhere-defined operator; errors otherwise.
    Matrix operator_matrix(double tol = kAngleTol) const;

    /// Least-squares operator part: maps dom -> ran, zero on dom^perp.
    /// Errors with MultivaluedBoundary when mul is nontrivial.
    Matrix operator_part(double tol = kAngleTol) const;

    /// (R - z)^{-1} as a matrix; errors with ResolventPole when not everywhere
    /// defined and single-valued.
    Matrix resolvent_matrix(Complex z) const;

    /// R - z I (square relations only).
    Relation shift(Complex z) const;

private:
    int dom_dim_ = 0;
    int ran_dim_ = 0;
    Subspace graph_;
};

} // namespace weylkit
