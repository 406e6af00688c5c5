#pragma once

#include <vector>

#include "tj/model.hpp"
#include "tj/numerics.hpp"

namespace tj::scatter {

// Operator on a register of 2-state spin slots; dim(mat) = 2^slots.
struct SpinOperator {
    int slots = 0;
    Matrix mat;
};

// Quasi-momentum k and rapidity lambda kept consistent through
// e^{ik} = (lambda - i/2)/(lambda + i/2).  k is reported on the principal
// logarithm branch; all physics downstream uses e^{ik} only.
struct Momentum {
    cplx k;
    cplx lambda;
    static Momentum from_k(cplx k);
    static Momentum from_lambda(cplx lambda);
    cplx phase() const;  // e^{ik}
};

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
// 2x2 matrix h . sigma.
Matrix dot_sigma(const Vec3& h);
// Two-slot permutation operator P on C^2 (x) C^2.
Matrix permutation2();

// Two-body S-matrix S(delta) = (delta + i P)/(delta + i) on two slots.
// Throws PoleEncountered within 1e-8 of delta = -i.
SpinOperator s_matrix(cplx delta);

// Embeds a one-slot (2x2) operator at slot `a` (0-based) of `slots` slots.
Matrix embed_one(const Matrix& op, int a, int slots);
// Embeds a two-slot (4x4) operator at slots (a, b), a != b, of `slots`
// slots; the operator's first factor goes to slot a, second to slot b.
Matrix embed_two(const Matrix& op, int a, int b, int slots);
// S(delta) embedded at slots (a, b).
Matrix s_embedded(cplx delta, int a, int b, int slots);

// Boundary matrices of the quasi-momentum layer, valid for arbitrary (not
// necessarily integrable) boundary parameters:
//   Kbar+(k) = -[t^2+xi1^2-h1^2+2 xi1 t cos k - 2 i t sin k h1.sigma]
//              / [(t+xi1 e^{ik})^2 - h1^2 e^{2ik}]
//   Kbar-(k) = -[t^2+xiN^2-hN^2+2 xiN t cos k - 2 i t sin k hN.sigma]
//              / [(t e^{-ik}+xiN)^2 - hN^2]
SpinOperator kbar_plus_raw(cplx k, const BoundaryFields& b);
SpinOperator kbar_minus_raw(cplx k, const BoundaryFields& b);

// Reduced forms valid on the integrable manifold:
//   Kbar-(l) = [(2l-i)/(2l+i)] [xiN - 2il hN.sigma]/[xiN + 2il(t+xiN)]
//   Kbar+(l) = [(2l+i)/(2l-i)] [xi1 - 2il h1.sigma]/[xi1 + 2il(t+xi1)]
SpinOperator kbar_plus_reduced(cplx lambda, const BoundaryFields& b);
SpinOperator kbar_minus_reduced(cplx lambda, const BoundaryFields& b);

// Max-entry residual of the reflection equation
//   S(u1-u2) K1(u1) S(u1+u2) K2(u2) = K2(u2) S(u1+u2) K1(u1) S(u1-u2)
// for the reduced Kbar of the requested side (+1 or -1), scaled by the
// magnitude of the two sides.
double reflection_residual(const BoundaryFields& b, cplx u1, cplx u2,
                           int side);

// The ordered product of S-matrices and boundary matrices acting on slot j
// (0-based) of an M-slot register:
//   S_{j-1,j}(l_{j-1}-u) ... S_{1,j}(l_1-u) Kbar+_j(u)
//   S_{j,1}(-u-l_1) ... S_{j,j-1}(-u-l_{j-1})
//   S_{j,j+1}(-u-l_{j+1}) ... S_{j,M}(-u-l_M) Kbar-_j(u)
//   S_{M,j}(l_M-u) ... S_{j+1,j}(l_{j+1}-u)
SpinOperator bar_tau(cplx u, const std::vector<cplx>& roots, int j,
                     const BoundaryFields& b);

}  // namespace tj::scatter
