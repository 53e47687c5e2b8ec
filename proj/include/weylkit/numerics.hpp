#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "weylkit/errors.hpp"

namespace weylkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

constexpr double kRankCutoff = 1e-11;      // relative singular-value cutoff for rank decisions
constexpr double kAngleTol = 1e-10;        // principal-angle threshold for subspace equality
constexpr double kTrigOverflowGuard = 700; // |Im w| beyond which cot/csc saturate

struct Tolerance {
    double abs = 1e-10;
    double rel = 1e-12;
};

/// (A + A*)/2.
template <typename Derived>
Matrix hermitian_part(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) fail(ErrorKind::DimensionMismatch, "hermitian_part: matrix not square");
    return 0.5 * (a.derived() + a.derived().adjoint());
}

/// (A - A*)/(2i); Hermitian, and A = Re A + i Im A.
template <typename Derived>
Matrix imaginary_part(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) fail(ErrorKind::DimensionMismatch, "imaginary_part: matrix not square");
    return (a.derived() - a.derived().adjoint()) / Complex(0, 2);
}

double operator_norm(const Matrix& a);
double smallest_singular_value(const Matrix& a);
Complex det(const Matrix& a);
Matrix inverse(const Matrix& a, double sigma_min_tol = 1e-13);

/// True iff the smallest eigenvalue of H exceeds -(tol.abs + tol.rel * ||H||).
bool psd_check(const Matrix& h, Tolerance tol = {});

/// Hermiticity residual ||H - H*||.
double hermiticity_defect(const Matrix& h);

// --- complex scalar analysis -------------------------------------------------

/// cot(w) via componentwise sin/cos with +-i saturation for |Im w| > 700.
Complex cot_c(Complex w);
/// 1/sin(w), -> 0 in the saturation regime.
Complex csc_c(Complex w);
/// sin(w)/w, entire (series near 0).
Complex sinc_c(Complex w);
/// (1 - cos w)/w^2, entire (series near 0).
Complex cosm1_over_w2(Complex w);

// --- scalar root bracketing --------------------------------------------------

struct BracketedRoot {
    double x = 0;
    double residual = 0;      // |f(x)| relative to the bracket scale
    double bracket_width = 0;
};

struct RootScanResult {
    std::vector<BracketedRoot> roots;
    bool grid_too_coarse = false; // adjacent roots closer than two grid cells
    int excluded_cells = 0;       // grid cells skipped over flagged poles
};

/// Scan f on [lo,hi] with a uniform grid, bracket sign changes between valid
/// evaluations and refine by bisection (to width <= 1e-12 * scale) plus one
/// safeguarded secant step.  Evaluations returning nullopt mark pole cells;
/// sign changes across such cells are discarded.
RootScanResult bracket_roots(const std::function<std::optional<double>(double)>& f,
                             double lo, double hi, int grid, double f_tol = 1e-9);

// --- misc --------------------------------------------------------------------

/// Deterministic random matrix with entries uniform in the unit square of C.
Matrix random_matrix(int rows, int cols, unsigned seed);
/// Random Hermitian matrix.
Matrix random_hermitian(int n, unsigned seed);
/// Random Hermitian positive definite matrix with spectrum in [lo, hi].
Matrix random_hpd(int n, unsigned seed, double lo = 0.5, double hi = 2.0);

} // namespace weylkit
