#include "tj/xxx_transfer.hpp"

#include <cmath>
#include <numbers>

#include "tj/scattering.hpp"

namespace tj::xxx {

using scatter::embed_one;
using scatter::embed_two;

Matrix crossing_v() {
    Matrix v(2, 2);
    v << 0, -1, 1, 0;  // -i sigma^y
    return v;
}

Matrix r_matrix(cplx u) {
    return u * num::eye(4) + eta * scatter::permutation2();
}

Matrix k_minus(cplx u, const BoundaryFields& b) {
    return b.p() * num::eye(2) + u * scatter::dot_sigma(b.hN());
}

Matrix k_plus(cplx u, const BoundaryFields& b) {
    return b.q() * num::eye(2) - (u + eta) * scatter::dot_sigma(b.h1());
}

namespace {

// Partial transpose in the second factor of a two-slot (4x4) operator.
Matrix transpose_second(const Matrix& m) {
    Matrix out(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b2 = 0; b2 < 2; ++b2)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    out(a * 2 + b2, c * 2 + d) = m(a * 2 + d, c * 2 + b2);
    return out;
}

// Partial trace over slot 0 (most significant) of an operator on
// 2 x 2^rest dimensions.
Matrix trace_first_slot(const Matrix& m, Eigen::Index rest_dim) {
    Matrix out = Matrix::Zero(rest_dim, rest_dim);
    for (Eigen::Index s = 0; s < 2; ++s)
        out += m.block(s * rest_dim, s * rest_dim, rest_dim, rest_dim);
    return out;
}

}  // namespace

IdentityResiduals identity_residuals(cplx u, cplx v,
                                     const BoundaryFields& b) {
    IdentityResiduals res;
    // Yang-Baxter on three slots (0, 0', 1) -> code slots (0, 1, 2).
    {
        const Matrix r00 = embed_two(r_matrix(u - v), 0, 1, 3);
        const Matrix r01 = embed_two(r_matrix(u), 0, 2, 3);
        const Matrix r11 = embed_two(r_matrix(v), 1, 2, 3);
        res.ybe = num::relative_residual(r00 * r01 * r11, r11 * r01 * r00);
    }
    // Reflection equation for K-.
    {
        const Matrix rd = r_matrix(u - v);
        const Matrix rs = r_matrix(u + v);
        const Matrix k1 = num::kron(k_minus(u, b), num::eye(2));
        const Matrix k2 = num::kron(num::eye(2), k_minus(v, b));
        res.re = num::relative_residual(rd * k1 * rs * k2, k2 * rs * k1 * rd);
    }
    // Dual reflection equation for K+.
    {
        const Matrix rd = r_matrix(v - u);
        const Matrix rs = r_matrix(-u - v - 2.0 * eta);
        const Matrix k1 = num::kron(k_plus(u, b), num::eye(2));
        const Matrix k2 = num::kron(num::eye(2), k_plus(v, b));
        res.dre = num::relative_residual(rd * k1 * rs * k2, k2 * rs * k1 * rd);
    }
    // Crossing relation R(u) = V_1 R^{t2}(-u-eta) V_1.
    {
        const Matrix v1 = num::kron(crossing_v(), num::eye(2));
        const Matrix rhs = v1 * transpose_second(r_matrix(-u - eta)) * v1;
        res.crossing = num::relative_residual(r_matrix(u), rhs);
    }
    return res;
}

Matrix transfer_matrix(cplx u, const std::vector<cplx>& inhom,
                       const BoundaryFields& b) {
    const int m = static_cast<int>(inhom.size());
    const int slots = m + 1;  // auxiliary slot 0, quantum slots 1..M
    const auto qdim = static_cast<Eigen::Index>(1) << m;
    Matrix full = embed_one(k_plus(u, b), 0, slots);
    for (int l = 0; l < m; ++l)
        full *= embed_two(r_matrix(u - inhom[static_cast<std::size_t>(l)]), 0,
                          l + 1, slots);
    full *= embed_one(k_minus(u, b), 0, slots);
    for (int l = m - 1; l >= 0; --l)
        full *= embed_two(r_matrix(u + inhom[static_cast<std::size_t>(l)]),
                          l + 1, 0, slots);
    return trace_first_slot(full, qdim);
}

Matrix tau_at_minus_lambda_product(int j, const std::vector<cplx>& inhom,
                                   const BoundaryFields& b) {
    const int m = static_cast<int>(inhom.size());
    if (j < 0 || j >= m) throw Error("tau product: index out of range");
    const cplx lj = inhom[static_cast<std::size_t>(j)];
    const auto qdim = static_cast<Eigen::Index>(1) << m;

    // tr_0 { K+_0(-l_j) R_{0,j}(-2 l_j) R_{0,j}(0) } as a one-slot operator.
    const Matrix two_slot = num::kron(k_plus(-lj, b), num::eye(2)) *
                            r_matrix(-2.0 * lj) * r_matrix(0.0);
    const Matrix core = trace_first_slot(two_slot, 2);

    Matrix acc = num::eye(qdim);
    for (int l = j - 1; l >= 0; --l)
        acc *= embed_two(r_matrix(inhom[static_cast<std::size_t>(l)] - lj), l,
                         j, m);
    acc *= embed_one(core, j, m);
    for (int l = 0; l < j; ++l)
        acc *= embed_two(r_matrix(-lj - inhom[static_cast<std::size_t>(l)]),
                         j, l, m);
    for (int l = j + 1; l < m; ++l)
        acc *= embed_two(r_matrix(-lj - inhom[static_cast<std::size_t>(l)]),
                         j, l, m);
    acc *= embed_one(k_minus(lj, b), j, m);
    for (int l = m - 1; l >= j + 1; --l)
        acc *= embed_two(r_matrix(inhom[static_cast<std::size_t>(l)] - lj), l,
                         j, m);
    return acc;
}

LambdaPolynomials extract_lambda(const std::vector<cplx>& inhom,
                                 const BoundaryFields& b, int n_nodes) {
    const int m = static_cast<int>(inhom.size());
    const auto qdim = static_cast<Eigen::Index>(1) << m;
    const int degree = 2 * m + 2;
    if (n_nodes <= 0) n_nodes = degree + 2;

    LambdaPolynomials out;
    out.nodes.reserve(static_cast<std::size_t>(n_nodes));
    const cplx center = -0.5 * eta;
    const double radius = 1.5;
    for (int k = 0; k < n_nodes; ++k) {
        const double phi =
            2.0 * std::numbers::pi * static_cast<double>(k) / n_nodes + 0.37;
        out.nodes.push_back(center + radius * std::exp(I * phi));
    }

    // Reference points tried in order until the spectrum separates.
    const cplx refs[] = {cplx(0.83, 0.29), cplx(-1.21, 0.53),
                         cplx(0.47, -0.81), cplx(1.63, 0.17),
                         cplx(-0.39, -0.67), cplx(2.11, 0.41)};
    Matrix vectors;
    bool anchored = false;
    for (const cplx& ref : refs) {
        const auto eig = num::eig_general(transfer_matrix(ref, inhom, b));
        if (eig.possibly_defective) continue;
        double min_gap = 1e300;
        for (Eigen::Index i = 0; i < qdim; ++i)
            for (Eigen::Index k = i + 1; k < qdim; ++k)
                min_gap = std::min(min_gap,
                                   std::abs(eig.values(i) - eig.values(k)));
        if (qdim > 1 && min_gap < 1e-6) continue;
        vectors = eig.vectors;
        anchored = true;
        break;
    }
    if (!anchored)
        throw DegenerateEigenbasis(
            "no reference point separated the transfer-matrix spectrum");

    const Eigen::PartialPivLU<Matrix> lu(vectors);
    std::vector<std::vector<std::pair<cplx, cplx>>> samples(
        static_cast<std::size_t>(qdim));
    for (const cplx& u : out.nodes) {
        const Matrix tau = transfer_matrix(u, inhom, b);
        const Matrix d = lu.solve(tau * vectors);
        double offdiag = 0.0;
        for (Eigen::Index r = 0; r < qdim; ++r)
            for (Eigen::Index c2 = 0; c2 < qdim; ++c2)
                if (r != c2) offdiag = std::max(offdiag, std::abs(d(r, c2)));
        const double scale = std::max(1.0, num::max_abs(d));
        out.max_offdiag_leakage =
            std::max(out.max_offdiag_leakage, offdiag / scale);
        for (Eigen::Index r = 0; r < qdim; ++r)
            samples[static_cast<std::size_t>(r)].emplace_back(u, d(r, r));
    }
    for (Eigen::Index r = 0; r < qdim; ++r) {
        auto fit = num::fit_polynomial(samples[static_cast<std::size_t>(r)],
                                       degree);
        const double scale = std::max(
            1.0, std::abs(samples[static_cast<std::size_t>(r)][0].second));
        out.max_fit_residual =
            std::max(out.max_fit_residual, fit.residual / scale);
        out.polys.push_back(std::move(fit.coeffs));
    }
    return out;
}

LambdaPropertyResiduals lambda_property_residuals(
    const std::vector<cplx>& poly, const std::vector<cplx>& inhom,
    const BoundaryFields& b) {
    LambdaPropertyResiduals res;
    const auto eval = [&](cplx u) { return num::poly_eval(poly, u); };
    const auto scaled = [](cplx x, cplx y) {
        return std::abs(x - y) /
               std::max({1.0, std::abs(x), std::abs(y)});
    };
    // Crossing symmetry at fixed generic points.
    const cplx pts[] = {cplx(0.31, 0.41), cplx(-1.13, 0.27),
                        cplx(0.77, -0.59), cplx(1.41, 0.11),
                        cplx(-0.53, -0.37), cplx(0.09, 0.83)};
    for (const cplx& u : pts)
        res.crossing = std::max(res.crossing, scaled(eval(u), eval(-u - eta)));
    // Value at the origin.
    cplx prod = 1.0;
    for (const cplx& l : inhom) prod *= -(l - eta) * (l + eta);
    res.at_zero = scaled(eval(0.0), 2.0 * b.p() * b.q() * prod);
    // Leading coefficient.
    const cplx lead = poly.empty() ? cplx(0.0) : poly.back();
    res.leading = scaled(lead, cplx(-2.0 * b.dot()));
    // Functional relation at each inhomogeneity.
    const double h1sq = b.h1_norm() * b.h1_norm();
    const double hNsq = b.hN_norm() * b.hN_norm();
    for (const cplx& lj : inhom) {
        const cplx lhs = eval(lj) * eval(lj - eta);
        cplx rhs = 4.0 * (lj * lj - eta * eta) /
                   (4.0 * lj * lj - eta * eta) *
                   (b.q() * b.q() - lj * lj * h1sq) *
                   (b.p() * b.p() - lj * lj * hNsq);
        for (const cplx& ll : inhom)
            rhs *= ((lj + ll) * (lj + ll) - eta * eta) *
                   ((lj - ll) * (lj - ll) - eta * eta);
        res.functional = std::max(res.functional, scaled(lhs, rhs));
    }
    return res;
}

double identification_residual(int j, const std::vector<cplx>& roots,
                               const BoundaryFields& b) {
    const int m = static_cast<int>(roots.size());
    if (j < 0 || j >= m)
        throw Error("identification_residual: index out of range");
    const cplx lj = roots[static_cast<std::size_t>(j)];
    cplx pref = 1.0;
    for (int l = 0; l < m; ++l) {
        if (l == j) continue;
        const cplx ll = roots[static_cast<std::size_t>(l)];
        pref *= (lj - ll - eta) * (lj + ll - eta);
    }
    pref *= 2.0 * eta * (lj - eta);
    pref *= (b.p() + lj * (b.t() + b.xiN())) *
            (-b.q() + lj * (b.t() + b.xi1()));
    if (std::abs(pref) < 1e-8)
        throw SingularPrefactor("identification prefactor vanishes");
    const Matrix scaled_tau = transfer_matrix(-lj, roots, b) / pref;
    const Matrix bar = scatter::bar_tau(lj, roots, j, b).mat;
    return num::relative_residual(bar, scaled_tau);
}

}  // namespace tj::xxx
