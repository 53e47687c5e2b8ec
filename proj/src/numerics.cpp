#include "weylkit/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace weylkit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::Singular: return "Singular";
        case ErrorKind::SingularG: return "SingularG";
        case ErrorKind::PoleProximity: return "PoleProximity";
        case ErrorKind::ResolventPole: return "ResolventPole";
        case ErrorKind::ZeroLambda: return "ZeroLambda";
        case ErrorKind::MultivaluedBoundary: return "MultivaluedBoundary";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::NoCommonGap: return "NoCommonGap";
        case ErrorKind::GapViolation: return "GapViolation";
        case ErrorKind::SchemeMismatch: return "SchemeMismatch";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::EigenvalueHit: return "EigenvalueHit";
        case ErrorKind::NonSelfadjointTheta: return "NonSelfadjointTheta";
        case ErrorKind::InputError: return "InputError";
        case ErrorKind::ValidationFailure: return "ValidationFailure";
    }
    return "Error";
}

double operator_norm(const Matrix& a) {
    if (a.size() == 0) return 0;
    return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

double smallest_singular_value(const Matrix& a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

Complex det(const Matrix& a) {
    if (a.rows() != a.cols()) fail(ErrorKind::DimensionMismatch, "det: matrix not square");
    return a.determinant();
}

Matrix inverse(const Matrix& a, double sigma_min_tol) {
    if (a.rows() != a.cols()) fail(ErrorKind::DimensionMismatch, "inverse: matrix not square");
    const double smin = smallest_singular_value(a);
    if (smin <= sigma_min_tol * std::max(1.0, operator_norm(a)))
        fail(ErrorKind::Singular, "inverse: smallest singular value " + std::to_string(smin));
    return a.partialPivLu().inverse();
}

double hermiticity_defect(const Matrix& h) {
    return operator_norm(Matrix(h - h.adjoint()));
}

bool psd_check(const Matrix& h, Tolerance tol) {
    if (h.rows() != h.cols()) fail(ErrorKind::DimensionMismatch, "psd_check: matrix not square");
    if (h.size() == 0) return true;
    const double norm = operator_norm(h);
    if (hermiticity_defect(h) > 1e-8 * (1 + norm) + tol.abs)
        fail(ErrorKind::NotHermitian, "psd_check: Hermiticity defect too large");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -(tol.abs + tol.rel * norm);
}

Complex cot_c(Complex w) {
    if (w.imag() > kTrigOverflowGuard) return Complex(0, -1);
    if (w.imag() < -kTrigOverflowGuard) return Complex(0, 1);
    return std::cos(w) / std::sin(w);
}

Complex csc_c(Complex w) {
    if (std::abs(w.imag()) > kTrigOverflowGuard) return Complex(0, 0);
    return Complex(1, 0) / std::sin(w);
}

Complex sinc_c(Complex w) {
    if (std::abs(w) < 1e-4) {
        const Complex w2 = w * w;
        return 1.0 + w2 * (-1.0 / 6.0 + w2 * (1.0 / 120.0 - w2 / 5040.0));
    }
    return std::sin(w) / w;
}

Complex cosm1_over_w2(Complex w) {
    if (std::abs(w) < 1e-4) {
        const Complex w2 = w * w;
        return -0.5 + w2 * (1.0 / 24.0 - w2 / 720.0);
    }
    return (std::cos(w) - 1.0) / (w * w);
}

RootScanResult bracket_roots(const std::function<std::optional<double>(double)>& f,
                             double lo, double hi, int grid, double f_tol) {
    RootScanResult out;
    if (!(hi > lo) || grid < 2) fail(ErrorKind::InputError, "bracket_roots: bad interval or grid");
    const double h = (hi - lo) / grid;

    std::vector<double> xs(grid + 1);
    std::vector<std::optional<double>> fs(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        xs[i] = lo + i * h;
        fs[i] = f(xs[i]);
        if (!fs[i]) ++out.excluded_cells;
    }

    auto refine = [&](double a, double b, double fa, double fb) -> std::optional<BracketedRoot> {
        const double scale = std::max({std::abs(fa), std::abs(fb), 1e-300});
        // bisection until the bracket is tiny in both absolute and relative terms
        for (int it = 0; it < 200 && (b - a) > 1e-12 * (1 + std::abs(a) + std::abs(b)); ++it) {
            const double m = 0.5 * (a + b);
            const auto fm = f(m);
            if (!fm) return std::nullopt; // pole inside the bracket
            if (*fm == 0) { a = b = m; fa = fb = 0; break; }
            if ((fa < 0) != (*fm < 0)) { b = m; fb = *fm; }
            else { a = m; fa = *fm; }
        }
        double x = 0.5 * (a + b);
        // one safeguarded secant step
        if (fb != fa) {
            const double xs_ = b - fb * (b - a) / (fb - fa);
            if (xs_ > a && xs_ < b) x = xs_;
        }
        const auto fx = f(x);
        if (!fx) return std::nullopt;
        BracketedRoot r;
        r.x = x;
        r.residual = std::abs(*fx) / scale;
        r.bracket_width = b - a;
        if (r.residual > f_tol && std::abs(*fx) > f_tol) return std::nullopt;
        return r;
    };

    for (int i = 0; i < grid; ++i) {
        if (!fs[i] || !fs[i + 1]) continue;
        const double fa = *fs[i], fb = *fs[i + 1];
        if (fa == 0) {
            if (out.roots.empty() || std::abs(out.roots.back().x - xs[i]) > 0.5 * h)
                out.roots.push_back({xs[i], 0, 0});
            continue;
        }
        if ((fa < 0) == (fb < 0)) continue;
        if (auto r = refine(xs[i], xs[i + 1], fa, fb)) out.roots.push_back(*r);
    }
    if (fs[grid] && *fs[grid] == 0) out.roots.push_back({xs[grid], 0, 0});

    for (size_t i = 1; i < out.roots.size(); ++i)
        if (out.roots[i].x - out.roots[i - 1].x < 2 * h) out.grid_too_coarse = true;
    return out;
}

Matrix random_matrix(int rows, int cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    Matrix a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = Complex(u(rng), u(rng));
    return a;
}

Matrix random_hermitian(int n, unsigned seed) {
    Matrix a = random_matrix(n, n, seed);
    return hermitian_part(a);
}

Matrix random_hpd(int n, unsigned seed, double lo, double hi) {
    Matrix a = random_matrix(n, n, seed);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> u(lo, hi);
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = u(rng);
    return q * d.asDiagonal() * q.adjoint();
}

} // namespace weylkit
