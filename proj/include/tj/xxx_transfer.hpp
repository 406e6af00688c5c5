#pragma once

#include <vector>

#include "tj/model.hpp"
#include "tj/numerics.hpp"

namespace tj::xxx {

// Crossing parameter of the auxiliary spin chain.
inline const cplx eta{0.0, 1.0};

// Crossing matrix V = -i sigma^y.
Matrix crossing_v();

// R(u) = u + eta * P on two slots (4x4).
Matrix r_matrix(cplx u);

// Boundary matrices K-(u) = p + u hN.sigma and K+(u) = q - (u+eta) h1.sigma.
Matrix k_minus(cplx u, const BoundaryFields& b);
Matrix k_plus(cplx u, const BoundaryFields& b);

struct IdentityResiduals {
    double ybe = 0.0;       // Yang-Baxter equation (three slots)
    double re = 0.0;        // reflection equation for K-
    double dre = 0.0;       // dual reflection equation for K+
    double crossing = 0.0;  // R(u) = V1 R^{t2}(-u-eta) V1
};

// Scaled max-entry residuals of the four defining identities at (u, v).
IdentityResiduals identity_residuals(cplx u, cplx v, const BoundaryFields& b);

// Double-row transfer matrix tau(u) = tr_0 { K+_0(u) R_{0,1}(u-l_1) ...
// R_{0,M}(u-l_M) K-_0(u) R_{M,0}(u+l_M) ... R_{1,0}(u+l_1) } on the
// 2^M-dimensional quantum space.
Matrix transfer_matrix(cplx u, const std::vector<cplx>& inhom,
                       const BoundaryFields& b);

// The factorized form of tau(-l_j): R-strings around the boundary trace
// tr_0{K+_0(-l_j) R_{0,j}(-2 l_j) R_{0,j}(0)} and K-_j(l_j).  Used to
// cross-check transfer_matrix at the special points.
Matrix tau_at_minus_lambda_product(int j, const std::vector<cplx>& inhom,
                                   const BoundaryFields& b);

struct LambdaPolynomials {
    std::vector<std::vector<cplx>> polys;  // one coefficient vector per state
    double max_fit_residual = 0.0;
    double max_offdiag_leakage = 0.0;
    std::vector<cplx> nodes;
};

// Extracts the eigenvalue functions Lambda(u) of the commuting family
// {tau(u)}: diagonalizes tau at a generic reference point, reads the family
// diagonal at 2M+4 circle nodes, and fits degree-(2M+2) polynomials.
// Throws DegenerateEigenbasis when no reference point separates the
// spectrum after several retries.
LambdaPolynomials extract_lambda(const std::vector<cplx>& inhom,
                                 const BoundaryFields& b, int n_nodes = 0);

struct LambdaPropertyResiduals {
    double crossing = 0.0;    // Lambda(u) = Lambda(-u-eta) at random points
    double at_zero = 0.0;     // Lambda(0) = 2pq prod[-(l-eta)(l+eta)]
    double leading = 0.0;     // leading coefficient = -2 h1.hN
    double functional = 0.0;  // product identity at each inhomogeneity
};

LambdaPropertyResiduals lambda_property_residuals(
    const std::vector<cplx>& poly, const std::vector<cplx>& inhom,
    const BoundaryFields& b);

// Scaled residual of the identification
//   bar_tau(l_j) = prod_{l != j} [(l_j-l_l-eta)(l_j+l_l-eta)]^{-1}
//                  * [2 eta (l_j-eta)]^{-1}
//                  * tau(-l_j) / {[p+l_j(t+xiN)][-q+l_j(t+xi1)]}
// with bar_tau built from the quasi-momentum layer and tau from this
// module.  Throws SingularPrefactor when a prefactor denominator vanishes.
double identification_residual(int j, const std::vector<cplx>& roots,
                               const BoundaryFields& b);

}  // namespace tj::xxx
