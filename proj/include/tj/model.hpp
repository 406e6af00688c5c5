#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "tj/numerics.hpp"

namespace tj {

using Vec3 = std::array<double, 3>;

double norm3(const Vec3& v);
double dot3(const Vec3& a, const Vec3& b);

// Boundary data of the open chain: hopping t, boundary potentials xi1/xiN
// and boundary field vectors h1/hN.  Derived quantities used throughout the
// library are computed once at construction:
//   p = xiN / (2i),  q = -xi1 / (2i),
//   s = sign(h1.hN) with sign(0) := +1,
//   c = 2 * (s*|h1|*|hN| - h1.hN).
class BoundaryFields {
public:
    BoundaryFields(double t, double xi1, double xiN, const Vec3& h1,
                   const Vec3& hN);

    // Constructs fields satisfying the integrability constraints exactly:
    // xi1 = sign1*|h1| - t and xiN = signN*|hN| - t.
    static BoundaryFields integrable(double t, int sign1, int signN,
                                     const Vec3& h1, const Vec3& hN);

    double t() const { return t_; }
    double xi1() const { return xi1_; }
    double xiN() const { return xiN_; }
    const Vec3& h1() const { return h1_; }
    const Vec3& hN() const { return hN_; }

    cplx p() const { return p_; }
    cplx q() const { return q_; }
    double h1_norm() const { return h1_norm_; }
    double hN_norm() const { return hN_norm_; }
    double dot() const { return dot_; }
    double sgn_dot() const { return sgn_dot_; }
    double c_inhom() const { return c_inhom_; }

    // |t+xi1| == |h1| and |t+xiN| == |hN| within tol.
    bool is_integrable(double tol = 1e-12) const;
    // c vanishes (fields collinear or at least one of them zero).
    bool is_collinear(double tol = 1e-12) const;

private:
    double t_, xi1_, xiN_;
    Vec3 h1_, hN_;
    cplx p_, q_;
    double h1_norm_, hN_norm_, dot_, sgn_dot_, c_inhom_;
};

namespace model {

// One basis state of the fixed-electron-number sector: electron positions in
// strictly increasing order (1-based sites) and the spin word aligned with
// them (0 = up, 1 = down).
struct Config {
    std::vector<int> pos;
    std::vector<int> spin;
    auto operator<=>(const Config&) const = default;
};

// Ordered basis of the M-electron sector of an N-site chain with no double
// occupancy.  Dimension is C(N, M) * 2^M; states are ordered
// lexicographically by (positions, spin word).
struct SectorBasis {
    int n_sites = 0;
    int n_electrons = 0;
    std::vector<Config> states;

    static SectorBasis build(int n_sites, int n_electrons);
    std::size_t dim() const { return states.size(); }
    // Index of a configuration (positions must be sorted).  Returns -1 when
    // absent.
    std::ptrdiff_t index_of(const Config& c) const;
};

// Dense Hamiltonian of the open chain in the given sector: projected nearest
// neighbour hopping (-t), spin exchange 2t*(S.S - nn'/4) on adjacent
// occupied pairs, and the boundary terms xi*n + 2 h.S on sites 1 and N.
Matrix build_hamiltonian(const SectorBasis& basis, const BoundaryFields& b);

// Eigenvalues of the sector Hamiltonian, ascending.
RealVector ed_spectrum(const SectorBasis& basis, const BoundaryFields& b);

// Total spin-z and spin-raising operators on the sector (spin lowering is
// the adjoint).  Used for symmetry checks at zero boundary field.
Matrix total_sz(const SectorBasis& basis);
Matrix total_splus(const SectorBasis& basis);

}  // namespace model

// Random draw of boundary data satisfying the integrability constraints
// exactly, with all derived scales (|h|, |xi|, p, q, h1.hN) kept away from
// zero so the draw is usable in every cross-check.  Field norms are sampled
// in [0.3, 1.4]; the branch signs are chosen so that the momentum-equation
// ratio at infinite rapidity never degenerates to 1 (no level escapes to
// infinity).
struct DrawOptions {
    double t = 1.0;
    bool parallel = false;      // collinear field pair instead of a generic one
    bool antiparallel = false;  // only with parallel = true
};

BoundaryFields random_integrable_fields(std::mt19937_64& rng,
                                        const DrawOptions& opts = {});

}  // namespace tj
