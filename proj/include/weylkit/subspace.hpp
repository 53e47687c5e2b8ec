#pragma once

#include "weylkit/numerics.hpp"

namespace weylkit {

/// A linear subspace of C^n held as an orthonormal column basis.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(Matrix orthonormal_basis) : basis_(std::move(orthonormal_basis)) {}

    /// Orthonormalize the column span of `span` with a relative rank cutoff.
    static Subspace from_span(const Matrix& span, double rank_cutoff = kRankCutoff);
    static Subspace zero(int ambient) { return Subspace(Matrix(ambient, 0)); }
    static Subspace full(int ambient) { return Subspace(Matrix::Identity(ambient, ambient)); }

    int ambient_dimension() const { return static_cast<int>(basis_.rows()); }
    int dimension() const { return static_cast<int>(basis_.cols()); }
    const Matrix& basis() const { return basis_; }

    /// Orthogonal projection of x onto the subspace.
    Vector project(const Vector& x) const { return basis_ * (basis_.adjoint() * x); }
    /// Distance from x to the subspace.
    double distance(const Vector& x) const { return (x - project(x)).norm(); }

    Subspace orthogonal_complement() const;

    bool contains(const Vector& x, double tol = kAngleTol) const {
        return distance(x) <= tol * std::max(1.0, x.norm());
    }

private:
    Matrix basis_; // rows = ambient dimension, orthonormal columns
};

/// Principal angles between two subspaces of the same ambient space, ascending.
/// If dimensions differ the excess directions count as right angles.
RealVector principal_angles(const Subspace& a, const Subspace& b);
double largest_principal_angle(const Subspace& a, const Subspace& b);

/// Subspace equality: same dimension and largest principal angle below tol.
bool subspace_equal(const Subspace& a, const Subspace& b, double tol = kAngleTol);

/// Orthonormal basis of ker A (relative singular-value cutoff).
Subspace nullspace(const Matrix& a, double rank_cutoff = kRankCutoff);

/// A \cap B computed from the joint nullspace of the two projections.
Subspace intersect(const Subspace& a, const Subspace& b, double rank_cutoff = kRankCutoff);

int numeric_rank(const Matrix& a, double rank_cutoff = kRankCutoff);

} // namespace weylkit
