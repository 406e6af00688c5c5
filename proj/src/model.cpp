#include "tj/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace tj {

double norm3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

BoundaryFields::BoundaryFields(double t, double xi1, double xiN,
                               const Vec3& h1, const Vec3& hN)
    : t_(t), xi1_(xi1), xiN_(xiN), h1_(h1), hN_(hN) {
    p_ = cplx(0.0, -0.5) * xiN_;  // xiN / (2i)
    q_ = cplx(0.0, 0.5) * xi1_;   // -xi1 / (2i)
    h1_norm_ = norm3(h1_);
    hN_norm_ = norm3(hN_);
    dot_ = dot3(h1_, hN_);
    sgn_dot_ = (dot_ < 0.0) ? -1.0 : 1.0;  // sign(0) := +1
    c_inhom_ = 2.0 * (sgn_dot_ * h1_norm_ * hN_norm_ - dot_);
}

BoundaryFields BoundaryFields::integrable(double t, int sign1, int signN,
                                          const Vec3& h1, const Vec3& hN) {
    const double xi1 = sign1 * norm3(h1) - t;
    const double xiN = signN * norm3(hN) - t;
    return BoundaryFields(t, xi1, xiN, h1, hN);
}

bool BoundaryFields::is_integrable(double tol) const {
    const double d1 = std::abs((t_ + xi1_) * (t_ + xi1_) - h1_norm_ * h1_norm_);
    const double dN = std::abs((t_ + xiN_) * (t_ + xiN_) - hN_norm_ * hN_norm_);
    return d1 <= tol && dN <= tol;
}

bool BoundaryFields::is_collinear(double tol) const {
    return std::abs(c_inhom_) <= tol;
}

namespace model {

SectorBasis SectorBasis::build(int n_sites, int n_electrons) {
    if (n_sites < 1 || n_electrons < 0 || n_electrons > n_sites)
        throw InvalidSector("sector requires 1 <= N and 0 <= M <= N");
    if (n_sites > 24)
        throw InvalidSector("chain length too large for dense enumeration");
    SectorBasis basis;
    basis.n_sites = n_sites;
    basis.n_electrons = n_electrons;
    const std::uint32_t top = 1u << n_sites;
    for (std::uint32_t mask = 0; mask < top; ++mask) {
        if (std::popcount(mask) != n_electrons) continue;
        Config base;
        for (int site = 1; site <= n_sites; ++site)
            if (mask & (1u << (site - 1))) base.pos.push_back(site);
        const std::uint32_t spin_top = 1u << n_electrons;
        for (std::uint32_t word = 0; word < spin_top; ++word) {
            Config c = base;
            c.spin.resize(static_cast<std::size_t>(n_electrons));
            for (int a = 0; a < n_electrons; ++a)
                c.spin[static_cast<std::size_t>(a)] =
                    (word >> (n_electrons - 1 - a)) & 1u;
            basis.states.push_back(std::move(c));
        }
    }
    // Mask enumeration is not lexicographic in positions once N > 3 (e.g.
    // (1,4) follows (2,3)); index_of relies on sorted order.
    std::sort(basis.states.begin(), basis.states.end());
    return basis;
}

std::ptrdiff_t SectorBasis::index_of(const Config& c) const {
    const auto it = std::lower_bound(states.begin(), states.end(), c);
    if (it == states.end() || *it != c) return -1;
    return it - states.begin();
}

namespace {

// 2x2 matrix of h . sigma in the (up, down) basis.
std::array<std::array<cplx, 2>, 2> field_matrix(const Vec3& h) {
    return {{{cplx(h[2], 0.0), cplx(h[0], -h[1])},
             {cplx(h[0], h[1]), cplx(-h[2], 0.0)}}};
}

// Removes the electron at ordinal `a` and reinserts it at site `target`,
// returning the new configuration and the fermionic parity of the move.
std::pair<Config, int> hop(const Config& c, std::size_t a, int target) {
    Config out;
    const int spin = c.spin[a];
    int sign = (a % 2 == 0) ? 1 : -1;  // annihilate at ordinal a
    std::size_t b = 0;
    for (std::size_t i = 0; i < c.pos.size(); ++i) {
        if (i == a) continue;
        if (c.pos[i] < target) ++b;
    }
    sign *= (b % 2 == 0) ? 1 : -1;  // recreate at ordinal b
    for (std::size_t i = 0; i < c.pos.size(); ++i) {
        if (i == a) continue;
        out.pos.push_back(c.pos[i]);
        out.spin.push_back(c.spin[i]);
    }
    out.pos.insert(out.pos.begin() + static_cast<std::ptrdiff_t>(b), target);
    out.spin.insert(out.spin.begin() + static_cast<std::ptrdiff_t>(b), spin);
    return {std::move(out), sign};
}

}  // namespace

Matrix build_hamiltonian(const SectorBasis& basis, const BoundaryFields& b) {
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    Matrix h = Matrix::Zero(dim, dim);
    const auto m1 = field_matrix(b.h1());
    const auto mN = field_matrix(b.hN());
    const int n_sites = basis.n_sites;
    const double t = b.t();

    for (Eigen::Index col = 0; col < dim; ++col) {
        const Config& c = basis.states[static_cast<std::size_t>(col)];
        const std::size_t m = c.pos.size();
        for (std::size_t a = 0; a < m; ++a) {
            const int site = c.pos[a];
            // Boundary potential and field terms act on edge electrons only.
            const auto add_edge_term =
                [&](const std::array<std::array<cplx, 2>, 2>& fm, double xi) {
                    const int alpha = c.spin[a];
                    h(col, col) += xi;
                    for (int beta = 0; beta < 2; ++beta) {
                        const cplx amp = fm[static_cast<std::size_t>(beta)]
                                           [static_cast<std::size_t>(alpha)];
                        if (amp == cplx(0.0)) continue;
                        Config flipped = c;
                        flipped.spin[a] = beta;
                        h(basis.index_of(flipped), col) += amp;
                    }
                };
            if (site == 1) add_edge_term(m1, b.xi1());
            if (site == n_sites) add_edge_term(mN, b.xiN());
            // Spin exchange 2t (S.S - nn'/4) on adjacent occupied pairs.
            if (a + 1 < m && c.pos[a + 1] == site + 1) {
                if (c.spin[a] != c.spin[a + 1]) {
                    h(col, col) += -t;
                    Config swapped = c;
                    std::swap(swapped.spin[a], swapped.spin[a + 1]);
                    const auto row = basis.index_of(swapped);
                    h(row, col) += t;
                }
            }
            // Projected hopping to empty nearest neighbours.
            for (const int target : {site - 1, site + 1}) {
                if (target < 1 || target > n_sites) continue;
                if (std::binary_search(c.pos.begin(), c.pos.end(), target))
                    continue;
                auto [moved, sign] = hop(c, a, target);
                const auto row = basis.index_of(moved);
                h(row, col) += -t * static_cast<double>(sign);
            }
        }
    }
    return h;
}

RealVector ed_spectrum(const SectorBasis& basis, const BoundaryFields& b) {
    return num::eig_hermitian(build_hamiltonian(basis, b)).values;
}

Matrix total_sz(const SectorBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    Matrix sz = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        double val = 0.0;
        for (const int s : basis.states[static_cast<std::size_t>(i)].spin)
            val += (s == 0) ? 0.5 : -0.5;
        sz(i, i) = val;
    }
    return sz;
}

Matrix total_splus(const SectorBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    Matrix sp = Matrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const Config& c = basis.states[static_cast<std::size_t>(col)];
        for (std::size_t a = 0; a < c.spin.size(); ++a) {
            if (c.spin[a] != 1) continue;
            Config raised = c;
            raised.spin[a] = 0;
            sp(basis.index_of(raised), col) += 1.0;
        }
    }
    return sp;
}

}  // namespace model

BoundaryFields random_integrable_fields(std::mt19937_64& rng,
                                        const DrawOptions& opts) {
    std::uniform_real_distribution<double> norm_dist(0.3, 1.4);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);

    const auto random_direction = [&]() {
        while (true) {
            Vec3 v{unit(rng), unit(rng), unit(rng)};
            const double n = norm3(v);
            if (n > 0.1 && n <= 1.0)
                return Vec3{v[0] / n, v[1] / n, v[2] / n};
        }
    };
    // A branch sign is viable when the implied |xi| stays away from zero.
    const auto sign_ok = [&](int sign, double hn) {
        return std::abs(sign * hn - opts.t) > 0.08;
    };

    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double n1 = norm_dist(rng);
        const double nn = norm_dist(rng);
        Vec3 d1 = random_direction();
        Vec3 dn{};
        if (opts.parallel) {
            const double f = opts.antiparallel ? -1.0 : 1.0;
            dn = {f * d1[0], f * d1[1], f * d1[2]};
        } else {
            dn = random_direction();
            const double cosang = dot3(d1, dn);
            if (std::abs(cosang) < 0.15 || std::abs(cosang) > 0.95) continue;
        }
        const Vec3 h1{n1 * d1[0], n1 * d1[1], n1 * d1[2]};
        const Vec3 hN{nn * dn[0], nn * dn[1], nn * dn[2]};
        const double s = (dot3(h1, hN) < 0.0) ? -1.0 : 1.0;
        // Keep sign1 * signN = -s so the momentum-equation ratio at infinite
        // rapidity is -1, never +1.
        std::array<std::pair<int, int>, 2> sign_pairs;
        if (s > 0.0)
            sign_pairs = {{{1, -1}, {-1, 1}}};
        else
            sign_pairs = {{{1, 1}, {-1, -1}}};
        const auto first = static_cast<std::size_t>(coin(rng));
        for (std::size_t k = 0; k < 2; ++k) {
            const auto [s1, sN] = sign_pairs[(first + k) % 2];
            if (sign_ok(s1, n1) && sign_ok(sN, nn))
                return BoundaryFields::integrable(opts.t, s1, sN, h1, hN);
        }
    }
    throw Error("failed to draw usable boundary fields");
}

}  // namespace tj
