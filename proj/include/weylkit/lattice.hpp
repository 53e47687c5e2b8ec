#pragma once

#include "weylkit/interval.hpp"

#include <optional>
#include <string>

namespace weylkit {

// --- lattice specification -------------------------------------------------------

enum class LatticeRule { Explicit, OneOverN, Constant, Geometric, Power };

/// Interval lengths d_n, either an explicit list or a generator rule with
/// declared analytic endpoints d_* = inf d_n and d^* = sup d_n.
struct LatticeSpec {
    LatticeRule rule = LatticeRule::Explicit;
    std::vector<double> explicit_d;
    double constant_h = 1.0;  // Constant
    double ratio = 0.5;       // Geometric: d_n = coeff * ratio^n
    double coeff = 1.0;       // Geometric / Power scale
    double power = 1.0;       // Power: d_n = coeff * n^{-power}
    int truncation = 1;       // N

    static LatticeSpec one_over_n(int n);
    static LatticeSpec constant(double h, int n);
    static LatticeSpec geometric(double r, int n, double coeff = 1.0);
    static LatticeSpec power_law(double p, int n, double coeff = 1.0);
    static LatticeSpec explicit_list(std::vector<double> d);

    double d(int n) const; // 1-based
    std::vector<double> lengths() const;
    double total_length() const;

    /// inf / sup over the full (infinite, for rules) family.
    double d_star() const;
    double d_sup() const; // may be +infinity for divergent rules
    bool is_rule() const { return rule != LatticeRule::Explicit; }
    /// d_n accumulates at 0 (rules with d_* = 0).
    bool accumulates_at_zero() const;
    /// d_n -> infinity along the rule.
    bool grows_unbounded() const;

    void validate() const;
};

// --- renormalization schemes -------------------------------------------------------

enum class RenormScheme { None, DiagSqrt, SchrodingerRegularized, DiracTilde };

/// Per-block Weyl matrix with an optional renormalization scheme and/or
/// triple transposition applied.  Schemes:
///   DiagSqrt                G = diag(sqrt(min(1,d_n))), M_G = G M G
///   SchrodingerRegularized  M^r = -dt^{-1} M^{-1} + dt^{-2} [[1,1],[1,1]], dt = min(1,d)
///   DiracTilde              M~ = ([[0,1],[1,0]] - M)^{-1}
struct BlockEvaluator {
    ModelKind model;
    RenormScheme scheme = RenormScheme::None;
    bool transposed = false;

    int block_size() const { return model.boundary_dim(); }
    Matrix operator()(double d, Complex z) const;
};

BlockEvaluator make_evaluator(const ModelKind& model, RenormScheme scheme = RenormScheme::None,
                              bool transposed = false);

// --- direct sums ---------------------------------------------------------------------

/// Block-diagonal matrix kept as its list of blocks.
struct BlockDiagonal {
    std::vector<Matrix> blocks;

    int dimension() const;
    Matrix dense() const;
    double norm() const; // max block norm
    bool psd(Tolerance tol = {}) const;
    BlockDiagonal adjoint() const;
};

/// Direct sum of per-interval Weyl blocks at z; PoleProximity carries the
/// offending block index in its message.
BlockDiagonal direct_sum_weyl(const BlockEvaluator& eval, const LatticeSpec& lattice, Complex z);

// --- classification -------------------------------------------------------------------

enum class TripleVerdict { Ordinary, BGeneralized, SGeneralized, ESGeneralizedOnly };

const char* to_string(TripleVerdict v);

struct ConstantReport {
    std::string name;
    std::vector<double> curve;        // per-block values, n = 1..N
    double truncation_sup = 0;
    bool increasing_trend = false;    // diagnostic flag for explicit lattices
    std::optional<bool> limit_bounded; // rule lattices: analytic-limit verdict
    double limit_value = 0;            // sup contribution of the closed-form limits when bounded
};

struct ClassificationReport {
    ConstantReport c1;    // sup ||M_n(i)||
    ConstantReport c2;    // sup ||(Im M_n(i))^{-1}||
    ConstantReport c_im;  // sup ||Im M_n(i)||
    std::optional<ConstantReport> c3; // sup ||M_n(a)||
    std::optional<ConstantReport> c4; // sup ||M_n'(a)||
    std::optional<ConstantReport> c5; // sup ||(M_n'(a))^{-1}||
    TripleVerdict verdict = TripleVerdict::ESGeneralizedOnly;
    bool verdict_from_limits = false; // true for rule lattices
    int truncation = 0;
};

/// Classify the direct-sum triple.  Rule lattices decide boundedness of each
/// constant from the closed-form per-block limits at the accumulation
/// endpoints; explicit lattices report truncation sups and trend flags only.
ClassificationReport classify(const ModelKind& model, const LatticeSpec& lattice,
                              std::optional<double> gap_point = std::nullopt,
                              bool transposed = false, RenormScheme scheme = RenormScheme::None);

// --- weighted-l2 membership -----------------------------------------------------------

enum class MembershipKind { DomM, RanGamma0, FormDomain, DomMTransposed, FormDomainTransposed };

/// A boundary sequence: explicit entries (pairs for 2x2 models, scalars for
/// momentum), optionally generated by component power laws
///   a_n = amp_a n^{-pow_a},  b_n = amp_b n^{-pow_b},
/// which enable closed-form tail verdicts on rule lattices.
struct WeightedSequence {
    std::vector<Vector> entries; // each of size boundary_dim
    bool has_rule = false;
    double amp_a = 0, pow_a = 0;
    double amp_b = 0, pow_b = 0;

    static WeightedSequence power_pairs(int n, double amp_a, double pa, double amp_b, double pb);
    static WeightedSequence power_scalars(int n, double amp, double p);
};

struct MembershipReport {
    bool in_set = false;          // verdict (analytic for rules, truncation otherwise)
    bool analytic = false;        // verdict came from a closed-form comparison test
    double weighted_partial_sum = 0;
    std::vector<double> partial_sums; // diagnostics at N/4, N/2, 3N/4, N
    bool growing = false;          // partial sums still growing at truncation
};

MembershipReport membership(const ModelKind& model, const LatticeSpec& lattice,
                            const WeightedSequence& seq, MembershipKind kind);

} // namespace weylkit
