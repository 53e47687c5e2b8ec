#pragma once

#include "weylkit/triple.hpp"

namespace weylkit {

/// Finite-matrix factory for S-/ES-generalized triples built from a bounded
/// inverse A0^{-1}, an injective G and a Hermitian E:
///   Gamma_0 fhat = phi,  Gamma_1 fhat = G^* f' + E phi
/// on pairs fhat = (A0^{-1} f' + G phi, f').
struct RyzhovTriple {
    Matrix a0_inv; // Hermitian, ker = 0
    Matrix g;      // injective, state_dim x boundary_dim
    Matrix e;      // Hermitian, boundary_dim x boundary_dim

    int state_dim() const { return static_cast<int>(a0_inv.rows()); }
    int boundary_dim() const { return static_cast<int>(g.cols()); }

    void validate() const;
    static RyzhovTriple random(int n, int h, unsigned seed, bool a0_positive = false,
                               bool e_negative = false);
};

/// Block decomposition of A0^{-1} with respect to ran G and its complement.
struct SchurData {
    Matrix q_ran;   // n x r orthonormal basis of ran G
    Matrix q_perp;  // n x (n-r)
    Matrix a11;     // r x r
    Matrix a21;     // (n-r) x r
    Matrix a22;     // (n-r) x (n-r)

    static SchurData decompose(const RyzhovTriple& t);
    Matrix reassemble() const;
};

/// M(lambda) = E + lambda G^* (I - lambda A0^{-1})^{-1} G.
Matrix ryzhov_weyl(const RyzhovTriple& t, Complex lambda);

/// gamma(lambda) = (I - lambda A0^{-1})^{-1} G.
Matrix ryzhov_gamma(const RyzhovTriple& t, Complex lambda);

/// M0(lambda) = lambda G^* (I - lambda A0^{-1})^{-1} G (the E = 0 part).
Matrix ryzhov_m0(const RyzhovTriple& t, Complex lambda);

/// -M0(lambda)^{-1}; Stieltjes sample when A0 >= 0.
Matrix tilde_transform(const RyzhovTriple& t, Complex lambda);

/// Schur complement S0(lambda) = A11 - 1/lambda - A21^* (A22 - 1/lambda)^{-1} A21,
/// the Weyl function of the renormalized ordinary triple.
Matrix schur_renormalize(const RyzhovTriple& t, Complex lambda);

/// Largest principal angle between ran P_G (I - mu A0^{-1})^{-1} G and the same
/// range at lambda; 0 iff the domain-invariance criterion holds at (lambda, mu).
double domain_invariance_probe(const RyzhovTriple& t, Complex lambda, Complex mu);

/// Assemble the boundary triple as a FiniteTriple on C^n (+ C^h boundary).
FiniteTriple assemble_triple(const RyzhovTriple& t);

/// A0 = (a0_inv)^{-1} as a relation in C^n.
Relation ryzhov_a0(const RyzhovTriple& t);

} // namespace weylkit
