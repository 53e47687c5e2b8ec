#include "weylkit/subspace.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace weylkit {

Subspace Subspace::from_span(const Matrix& span, double rank_cutoff) {
    if (span.cols() == 0) return Subspace(Matrix(span.rows(), 0));
    Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = rank_cutoff * std::max(sv(0), 1e-300);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    return Subspace(svd.matrixU().leftCols(rank));
}

Subspace Subspace::orthogonal_complement() const {
    const int n = ambient_dimension();
    if (dimension() == 0) return full(n);
    // kernel of basis^*
    return nullspace(basis_.adjoint());
}

int numeric_rank(const Matrix& a, double rank_cutoff) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    const double cut = rank_cutoff * std::max(sv(0), 1e-300);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    return rank;
}

Subspace nullspace(const Matrix& a, double rank_cutoff) {
    const int n = static_cast<int>(a.cols());
    if (a.rows() == 0) return Subspace::full(n);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = rank_cutoff * std::max(sv.size() ? sv(0) : 0.0, 1e-300);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    return Subspace(svd.matrixV().rightCols(n - rank));
}

RealVector principal_angles(const Subspace& a, const Subspace& b) {
    if (a.ambient_dimension() != b.ambient_dimension())
        fail(ErrorKind::DimensionMismatch, "principal_angles: ambient dimensions differ");
    const int p = std::min(a.dimension(), b.dimension());
    const int q = std::max(a.dimension(), b.dimension());
    RealVector angles(q);
    if (p == 0) {
        angles.setConstant(M_PI / 2);
        return q == 0 ? RealVector() : angles;
    }
    Eigen::JacobiSVD<Matrix> svd(a.basis().adjoint() * b.basis());
    const auto& c = svd.singularValues();
    for (int i = 0; i < p; ++i) angles(i) = std::acos(std::min(1.0, c(i)));
    for (int i = p; i < q; ++i) angles(i) = M_PI / 2; // dimension mismatch
    std::sort(angles.data(), angles.data() + q);
    return angles;
}

double largest_principal_angle(const Subspace& a, const Subspace& b) {
    const RealVector angles = principal_angles(a, b);
    return angles.size() ? angles(angles.size() - 1) : 0.0;
}

bool subspace_equal(const Subspace& a, const Subspace& b, double tol) {
    if (a.dimension() != b.dimension()) return false;
    if (a.dimension() == 0) return true;
    return largest_principal_angle(a, b) <= tol;
}

Subspace intersect(const Subspace& a, const Subspace& b, double rank_cutoff) {
    // x in A\capB  <=>  x = A u = B v; solve [A, -B] (u;v) = 0.
    const int n = a.ambient_dimension();
    if (a.dimension() == 0 || b.dimension() == 0) return Subspace::zero(n);
    Matrix joint(n, a.dimension() + b.dimension());
    joint << a.basis(), -b.basis();
    const Subspace ker = nullspace(joint, rank_cutoff);
    if (ker.dimension() == 0) return Subspace::zero(n);
    const Matrix u = ker.basis().topRows(a.dimension());
    return Subspace::from_span(a.basis() * u, rank_cutoff);
}

} // namespace weylkit
