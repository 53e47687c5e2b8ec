#pragma once

#include "weylkit/triple.hpp"

#include <vector>

namespace weylkit {

// --- model selection ----------------------------------------------------------

enum class Model { Momentum, Schroedinger, Dirac };

struct ModelKind {
    Model model = Model::Schroedinger;
    double c = 1.0; // speed of light, Dirac only

    static ModelKind momentum() { return {Model::Momentum, 0}; }
    static ModelKind schroedinger() { return {Model::Schroedinger, 0}; }
    static ModelKind dirac(double c);

    int boundary_dim() const { return model == Model::Momentum ? 1 : 2; }
    int components() const { return model == Model::Dirac ? 2 : 1; }
};

/// k(z) = sqrt(z^2 - (c^2/2)^2)/c and k1(z) = c k(z)/(z + c^2/2).
/// k1 is always derived from k, never an independent square root.
struct DiracKinematics {
    Complex k;
    Complex k1;

    static DiracKinematics at(double c, Complex z, int branch = +1);
};

// --- per-interval Weyl matrices -------------------------------------------------

/// Interval Weyl matrix:
///   momentum      M(z) = -cot(z d / 2)                       (1x1)
///   Schroedinger  M(z) = (-1/sqrt z) [[cot(w), -1/sin(w)], [-1/sin(w), cot(w)]], w = sqrt(z) d
///   Dirac         M(z) = (1/cos(dk)) [[c k1 sin(dk), 1], [1, sin(dk)/(c k1)]]
/// All three are even in the square-root branch; `branch` flips the internal
/// root for the invariance tests.
Matrix weyl_block(const ModelKind& model, double d, Complex z, int branch = +1);

/// Analytic z-derivative at a real gap point (Schroedinger a < 0, Dirac |a| < c^2/2).
/// Momentum has no common gap and is rejected.
Matrix weyl_block_derivative(const ModelKind& model, double d, double a);

bool gap_contains(const ModelKind& model, double a);

/// True when z is within the pole-proximity window of the block formula.
bool near_block_pole(const ModelKind& model, double d, Complex z);

/// Real block poles (A0 eigenvalues) inside [lo, hi].
std::vector<double> block_pole_locations(const ModelKind& model, double d, double lo, double hi);

// --- exact interval calculus ----------------------------------------------------

/// One term  coeff * x^power * e^{exponent x}.
struct ExpPolyTerm {
    Complex coeff{};
    int power = 0;
    Complex exponent{};
};

/// Finite sums of polynomial-times-exponential terms; closed under
/// differentiation and products, with exact integrals.
class ExpPoly {
public:
    ExpPoly() = default;
    explicit ExpPoly(std::vector<ExpPolyTerm> terms) : terms_(std::move(terms)) {}
    static ExpPoly exponential(Complex coeff, Complex exponent) {
        return ExpPoly({{coeff, 0, exponent}});
    }
    static ExpPoly constant(Complex c) { return exponential(c, 0); }

    const std::vector<ExpPolyTerm>& terms() const { return terms_; }
    Complex eval(double x) const;
    ExpPoly derivative() const;
    ExpPoly conjugated() const; // conjugate coefficients and exponents (valid on the real axis)
    ExpPoly operator*(const ExpPoly& rhs) const;
    ExpPoly operator+(const ExpPoly& rhs) const;
    ExpPoly operator*(Complex s) const;

private:
    std::vector<ExpPolyTerm> terms_;
};

/// Exact integral over [a, b].
Complex integrate(const ExpPoly& f, double a, double b);

/// A C^k-valued function on [0, d] with ExpPoly components.
struct IntervalFunction {
    std::vector<ExpPoly> comp;
    double length = 0;

    Complex eval(int component, double x) const { return comp[component].eval(x); }
};

/// Exact L^2(0,d)^k inner product <f, g>.
Complex l2_inner(const IntervalFunction& f, const IntervalFunction& g);

/// The model differential expression applied componentwise (exact).
IntervalFunction apply_expression(const ModelKind& model, const IntervalFunction& f);

// --- boundary maps and trace reduction ------------------------------------------

/// Trace coordinates per model (local interval [0, d], a = 0+, b = d-):
///   momentum      (f(a), f(b))
///   Schroedinger  (f(a), f(b), f'(a), f'(b))
///   Dirac         (f1(a), f2(a), f1(b), f2(b))
struct BoundaryMaps {
    Matrix gamma0;       // h x trace_dim
    Matrix gamma1;       // h x trace_dim
    Matrix green_form;   // trace_dim x trace_dim anti-Hermitian B with (lf,g)-(f,lg) = s^* B t
    int trace_dim = 0;
    std::vector<std::string> trace_labels;
};

BoundaryMaps boundary_maps(const ModelKind& model, double d);

/// Trace vector of an IntervalFunction in the BoundaryMaps coordinates.
Vector traces(const ModelKind& model, const IntervalFunction& f);

/// The interval triple reduced to trace coordinates, as a FiniteTriple whose
/// state-side symmetry is -iB.  Kreida-unitarity of this finite object is the
/// boundary-triple property of the interval maps.
FiniteTriple trace_triple(const ModelKind& model, double d);

// --- defect solutions -------------------------------------------------------------

struct DefectSolution {
    IntervalFunction f;   // the solution with Gamma_0 f = h
    Vector gamma1_data;   // its Gamma_1 trace data
};

/// Unique solution of the interval equation (expression - z) f = 0 with
/// Gamma_0 f = h; its Gamma_1 data reproduces weyl_block(z) * h.
DefectSolution defect_gamma(const ModelKind& model, double d, Complex z, const Vector& h);

} // namespace weylkit
