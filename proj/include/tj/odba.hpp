#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "tj/model.hpp"
#include "tj/numerics.hpp"
#include "tj/xxx_transfer.hpp"

// T-Q parametrization of the transfer-matrix eigenvalues and the coupled
// Bethe-ansatz equations that quantize the momenta lambda together with the
// auxiliary roots (mu for the inhomogeneous cases, gamma for collinear
// boundary fields).  All formulas use eta = i (see xxx_transfer.hpp).
namespace tj::odba {

enum class Case {
    even_inhomogeneous,  // M even, M auxiliary roots mu
    odd_inhomogeneous,   // M odd, M+1 auxiliary roots mu
    parallel             // collinear fields, m <= M auxiliary roots gamma
};

// Number of auxiliary roots demanded by the case (parallel: caller's m).
int aux_count(Case kind, int m_electrons, int m_pairs = 0);

struct BetheRoots {
    Case kind = Case::even_inhomogeneous;
    std::vector<cplx> lambda;  // finite momentum roots
    std::vector<cplx> aux;     // finite mu or gamma roots
    // Zero-momentum bound pairs: when (t+xi1)(t+xiN) = s|h1||hN| the leading
    // coefficient of the cleared momentum equation cancels and a state may
    // carry a (lambda, aux) pair at infinity.  Such a pair drops out of every
    // remaining equation, so `lambda`/`aux` hold the finite content (a
    // solution of the system with M - n_infinite electrons) and each pair
    // contributes -2t to the energy (cos k = 1 exactly).
    int n_infinite = 0;
    double residual = std::numeric_limits<double>::quiet_NaN();
};

// Coefficient functions of the T-Q ansatz for a fixed set of lambda roots:
//   A(u) = prod_l (u - l_l + eta)(u + l_l + eta)
//   a(u) = [(2u+2eta)/(2u+eta)] (p + u s|hN|) (q - u|h1|) A(u)
//   d(u) = [2u/(2u+eta)] (p - (u+eta)s|hN|) (q + (u+eta)|h1|)
//          prod_l (u - l_l)(u + l_l)            ( = a(-u-eta) identically )
//   c    = 2 (s|h1||hN| - h1.hN),   s = sign(h1.hN), sign(0) := +1
// Q1(u) = prod_j (u - mu_j), Q2(u) = Q1(-u-eta) for the inhomogeneous cases;
// Q(u) = prod_l (u - g_l)(u + g_l + eta) for the parallel case.
class TQProfile {
  public:
    TQProfile(Case kind, const BoundaryFields& b, std::vector<cplx> lambda);

    Case kind() const { return kind_; }
    cplx A(cplx u) const;
    cplx a(cplx u) const;
    cplx d(cplx u) const;
    cplx c_inhom() const { return c_; }
    cplx Q1(cplx u, const std::vector<cplx>& mu) const;
    cplx Q2(cplx u, const std::vector<cplx>& mu) const;
    cplx Q(cplx u, const std::vector<cplx>& gamma) const;

  private:
    Case kind_;
    std::vector<cplx> lambda_;
    double sgn_, h1n_, hNn_;
    cplx p_, q_, c_;
};

// T-Q expression for the transfer-matrix eigenvalue at u.  On Bethe-root
// solutions the apparent poles at the Q zeros cancel and the function is a
// polynomial of degree 2M+2.  Guards (radius 1e-10): zeros of the active Q
// denominators and the crossing point u = -eta/2.
cplx tq_lambda(cplx u, const BetheRoots& roots, const BoundaryFields& b);

// Residuals of the Bethe-ansatz equations, one per unknown (lambda equations
// first, then auxiliary equations).  Each equation is cleared of exactly one
// denominator layer, written as T1 -/+ T2 = 0, and scaled by
// max(1, |T1|, |T2|).
std::vector<double> bae_residual(const BetheRoots& roots,
                                 const BoundaryFields& b, int n_sites);

struct SolveOptions {
    std::uint64_t seed = 20260823ULL;
    int random_starts = 300;      // random-box Newton starts per system
    int aux_starts = 6;           // auxiliary draws per structured lambda seed
    int newton_cap = 200;         // outer Newton iterations
    int max_halvings = 30;        // step-halving attempts per iteration
    double converge_tol = 1e-12;  // scaled infinity-norm target
    double accept_tol = 1e-10;    // stagnated solutions kept below this
    bool free_chain_seeds = true;
    bool homotopy_seeds = true;   // continuation from a collinear companion
    // Quantize the transfer-matrix eigenvalue branches in lambda alone, then
    // recover the auxiliary roots from the T-Q relation in coefficient
    // space; converged pairs are polished on the full printed system.  This
    // is the workhorse seed family for the inhomogeneous cases.
    bool operator_seeds = true;
    int operator_lambda_starts = 120;  // random lambda draws for that family
    // Extra caller-supplied lambda guesses for the branch quantization.
    std::vector<std::vector<cplx>> operator_lambda_seeds;
    int parallel_m = -1;          // restrict the parallel sweep to one m
    // Append states with zero-momentum bound pairs (roots at infinity) by
    // solving the reduced sector recursively when the degree-drop condition
    // (t+xi1)(t+xiN) = s|h1||hN| holds.  Parallel case only.
    bool infinite_lift = true;
    std::vector<BetheRoots> user_seeds;
};

struct SolveStats {
    int attempts = 0;
    int converged = 0;
    int rejected_guard = 0;
    int rejected_energy = 0;
    int rejected_structure = 0;  // lambda at zero / coincident roots
    int duplicates = 0;
    int lifted = 0;  // states appended with a zero-momentum bound pair
};

// Multi-start damped Newton on the joint (lambda, aux) system.  Seeds come
// from free-chain momenta k = pi n/(N+1), random boxes, continuation from a
// collinear companion configuration, and user_seeds.  Results are
// deduplicated under root permutations and the lambda -> -lambda reporting
// symmetry, filtered against cleared-denominator zeros (1e-6), lambda = 0,
// coincident roots, and complex total energy; each carries its residual.
// The parallel case sweeps m = 0..M unless opts.parallel_m >= 0.
std::vector<BetheRoots> solve_bae(Case kind, int n_sites, int m_electrons,
                                  const BoundaryFields& b,
                                  const SolveOptions& opts = {},
                                  SolveStats* stats = nullptr);

// E = -2t sum_j (l_j^2 - 1/4)/(l_j^2 + 1/4) - 2t n_infinite;
// requires |Im E| < 1e-8.
double energy_from_roots(const BetheRoots& roots, double t);

struct VerificationReport {
    double bae_max = 0.0;          // max scaled equation residual
    double tq_fit = 0.0;           // polynomial fit residual of tq_lambda
    xxx::LambdaPropertyResiduals lambda_props;
    double quantization = 0.0;     // transfer eigenvalue at -lambda_j vs
                                   // [(2l-eta)/(2l+eta)]^{-2N} x prefactor
    double tq_vs_operator = -1.0;  // fitted T-Q poly vs an extracted
                                   // eigenvalue poly (M <= 3; -1 = skipped)
    double energy = 0.0;
    double energy_imag = 0.0;
    bool ed_checked = false;
    double ed_distance = 0.0;      // min |E - level| over a supplied spectrum

    bool pass(double tol = 1e-8) const;
};

// Full consistency report for a converged solution: polynomiality of the
// T-Q expression (degree 2M+2 fit at 2M+6 nodes), the four eigenvalue
// properties, the quantization condition at every lambda_j, agreement with
// an operator-extracted eigenvalue polynomial, and optional containment of
// the energy in a supplied exact-diagonalization spectrum.
VerificationReport verify_solution(const BetheRoots& roots,
                                   const BoundaryFields& b, int n_sites,
                                   const RealVector* ed_levels = nullptr);

}  // namespace tj::odba
