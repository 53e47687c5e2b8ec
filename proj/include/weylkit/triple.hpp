#pragma once

#include "weylkit/relation.hpp"

namespace weylkit {

/// Block symmetry [[0, -iI],[iI, 0]] turning C^{2n} into a Krein space whose
/// indefinite form encodes the abstract Green identity.
struct FundamentalSymmetry {
    int half_dimension = 0;
    Matrix matrix;

    static FundamentalSymmetry standard(int half_dimension);
};

/// A finite-dimensional boundary triple: the graph of Gamma as a relation from
/// the state graph space C^{2m} (pairs (f, f')) to the boundary space C^{2h}
/// (pairs (Gamma_0 f, Gamma_1 f)).  Gamma may be multivalued or non-densely
/// defined.  The Krein structures default to the standard block symmetries but
/// trace-reduced interval triples may carry their own.
struct FiniteTriple {
    int state_dim = 0;    // m
    int boundary_dim = 0; // h
    Relation gamma;       // subspace of C^{2m} + C^{2h}
    Matrix j_state;       // 2m x 2m Hermitian involution
    Matrix j_boundary;    // 2h x 2h Hermitian involution

    static FiniteTriple from_gamma_operator(int state_dim, int boundary_dim, const Matrix& gamma_matrix);
    static FiniteTriple from_graph(int state_dim, int boundary_dim, const Matrix& graph_span);

    Matrix graph_state_rows() const { return gamma.graph().basis().topRows(2 * state_dim); }
    Matrix graph_boundary_rows() const { return gamma.graph().basis().bottomRows(2 * boundary_dim); }
};

struct WeylValue {
    Complex point{};
    Relation value;           // relation in C^h x C^h: graph of M(lambda)
    bool single_valued = false;
    Matrix operator_matrix;   // set when the relation is an everywhere-defined operator
    bool has_operator = false;
};

/// Krein-space adjoint of a relation between (C^{2m}, J_dom) and (C^{2h}, J_ran).
Relation krein_adjoint(const Relation& gamma, const Matrix& j_dom, const Matrix& j_ran);

/// Max Green-identity residual over the graph basis: the Gram defect
/// F*J_dom F - H*J_ran H of the two sides of the graph.
double green_residual(const FiniteTriple& t);

struct IsometryVerdict {
    bool holds = false;
    double residual = 0;
};

IsometryVerdict is_isometric(const FiniteTriple& t, double tol = 1e-12);
IsometryVerdict is_unitary(const FiniteTriple& t, double tol = 1e-10);

/// Main transform: ((f,f'),(h,h')) -> ((f,h),(f',-h')), a relation in C^{m+h}.
Relation main_transform(const FiniteTriple& t);

/// Defect pairs {(f, lambda f)} inside dom Gamma, as coordinates in the graph basis.
Matrix defect_coordinates(const FiniteTriple& t, Complex lambda, double rank_cutoff = kRankCutoff);

WeylValue weyl_of_triple(const FiniteTriple& t, Complex lambda);

/// gamma-field as a matrix dom M(lambda) -> C^m (least-squares on the domain).
Matrix gamma_field(const FiniteTriple& t, Complex lambda);

/// ker Gamma_0 as a relation in C^m.
Relation kernel_extension(const FiniteTriple& t, int which /* 0 or 1 */);

/// A_Theta = { fhat in dom Gamma : Gamma fhat in Theta }.
Relation constrained_extension(const FiniteTriple& t, const Relation& theta);

/// t_M[u,v] = (lambda - conj(lambda))^{-1} [ (Mu,v) - (u,Mv) ].
Complex weyl_form(const WeylValue& m, const Vector& u, const Vector& v);

/// theta = (M - i)(M + i)^{-1}; contractive for Nevanlinna samples in C_+.
Matrix cayley_to_contraction(const Matrix& m_op, Complex lambda);
/// M = i (I + theta)(I - theta)^{-1}.
Matrix contraction_to_weyl(const Matrix& theta);

/// V = [[G^{-1}, 0],[E G^{-1}, G^*]] applied to the boundary side; the new Weyl
/// function is E + G^* M G.  G must be injective (square here), E Hermitian.
FiniteTriple triangular_transform(const FiniteTriple& t, const Matrix& g, const Matrix& e);

/// Transposed triple {Gamma_1, -Gamma_0}.
FiniteTriple transpose_triple(const FiniteTriple& t);

/// Conditions M(x) = M(x)^* and 0 in rho(M(x) + x) at a real point.
bool real_point_certificate(const FiniteTriple& t, double x, double tol = 1e-9);

/// Gamma = exp(K) with J K^* J = -K: exactly Krein-unitary in theory.
Matrix random_krein_unitary(int half_dim, unsigned seed);
FiniteTriple random_unitary_triple(int half_dim, unsigned seed);

} // namespace weylkit
