#pragma once

#include "weylkit/lattice.hpp"

namespace weylkit {

enum class Cutoff { DirichletEnd, NeumannEnd, DiracHardWall, PeriodicWrap };

enum class ThetaProvenance { SchroedingerDelta, DiracGS, MomentumPhase, Free, Custom };

/// A boundary condition for the truncated direct-sum triple: a selfadjoint
/// relation Theta in the Gamma-coordinates (dimension 2N, or N for momentum).
struct BoundaryCondition {
    Relation theta;
    ThetaProvenance provenance = ThetaProvenance::Custom;
    std::vector<double> alpha;
    Cutoff cutoff = Cutoff::DirichletEnd;
};

/// Assemble Theta for the local point interactions:
///   Schroedinger: f continuous at x_n, f'(x_n+) - f'(x_n-) = alpha_n f(x_n);
///                 Dirichlet or Neumann conditions at both cut ends.
///   Dirac (GS):   f1 continuous, f2(x_n+) - f2(x_n-) = -(i alpha_n / c) f1(x_n);
///                 hard wall f2(0+) = 0, f1(x_N-) = 0.
///   momentum:     f(x_n+) = e^{i alpha_n} f(x_n-); periodic wrap f(0+) = f(x_N-).
/// interactions.size() must equal N - 1 (the interior lattice points).
BoundaryCondition build_theta(const ModelKind& model, const LatticeSpec& lattice,
                              const std::vector<double>& interactions, Cutoff cutoff);

struct SpectrumPoint {
    double lambda = 0;
    double residual = 0;
    double bracket_width = 0;
};

struct SpectrumResult {
    std::vector<SpectrumPoint> roots;
    int grid = 0;
    std::vector<std::pair<double, double>> excluded_windows; // masked pole windows
    bool grid_too_coarse = false;
    std::string method;
};

/// Roots of det(M(lambda) U - V) on [lo, hi] where [U; V] spans Theta; block
/// poles are masked with a 1e-6 window.  `threads` splits the scan interval.
SpectrumResult det_scan(const ModelKind& model, const LatticeSpec& lattice,
                        const BoundaryCondition& bc, double lo, double hi, int grid,
                        int threads = 1);

/// Independent eigenvalue oracle: zeros of the cutoff functional of the product
/// of exact interval propagators interleaved with jump matrices.
SpectrumResult shooting_oracle(const ModelKind& model, const LatticeSpec& lattice,
                               const std::vector<double>& interactions, Cutoff cutoff, double lo,
                               double hi, int grid, int threads = 1);

/// Principal-angle between graph(M(lambda)) and Theta (relation-case root
/// functional; zero exactly at eigenvalues).
double theta_graph_angle(const ModelKind& model, const LatticeSpec& lattice,
                         const BoundaryCondition& bc, double lambda);

/// Per-interval data for resolvent tests.
using PiecewiseData = std::vector<IntervalFunction>;

/// <(A_Theta - lambda)^{-1} f, g> assembled by the Krein-type formula:
/// per-interval A0 resolvent + gamma(lambda) (Theta - M(lambda))^{-1} gamma(conj lambda)^*.
Complex krein_resolvent_element(const ModelKind& model, const LatticeSpec& lattice,
                                const BoundaryCondition& bc, Complex lambda,
                                const PiecewiseData& f, const PiecewiseData& g);

/// Independent route: solve (A_Theta - lambda) u = f directly as one coupled
/// linear system over the interval solution bases, then return <u, g>.
Complex direct_resolvent_element(const ModelKind& model, const LatticeSpec& lattice,
                                 const BoundaryCondition& bc, Complex lambda,
                                 const PiecewiseData& f, const PiecewiseData& g);

/// (A0 - lambda)^{-1} f per interval (A0 = ker Gamma_0 blockwise).
PiecewiseData a0_resolvent_apply(const ModelKind& model, const LatticeSpec& lattice, Complex lambda,
                                 const PiecewiseData& f);

/// L^2 inner product over the whole lattice.
Complex lattice_inner(const PiecewiseData& f, const PiecewiseData& g);

} // namespace weylkit
