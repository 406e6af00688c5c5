#include "tj/scattering.hpp"

#include <cmath>

namespace tj::scatter {

namespace {
constexpr double kPoleGuard = 1e-8;

void check_denominator(cplx den, const char* what) {
    if (std::abs(den) < kPoleGuard)
        throw SingularDenominator(std::string("singular denominator in ") +
                                  what);
}
}  // namespace

Momentum Momentum::from_k(cplx k) {
    Momentum m;
    m.k = k;
    const cplx ph = std::exp(I * k);
    check_denominator(ph - 1.0, "rapidity map");
    // Inverse of e^{ik} = (lambda - i/2)/(lambda + i/2).
    m.lambda = -0.5 * I * (ph + 1.0) / (ph - 1.0);
    return m;
}

Momentum Momentum::from_lambda(cplx lambda) {
    Momentum m;
    m.lambda = lambda;
    check_denominator(lambda + 0.5 * I, "rapidity map");
    const cplx ph = (lambda - 0.5 * I) / (lambda + 0.5 * I);
    m.k = -I * std::log(ph);  // principal branch
    return m;
}

cplx Momentum::phase() const { return std::exp(I * k); }

Matrix pauli_x() {
    Matrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

Matrix pauli_y() {
    Matrix s(2, 2);
    s << 0, -I, I, 0;
    return s;
}

Matrix pauli_z() {
    Matrix s(2, 2);
    s << 1, 0, 0, -1;
    return s;
}

Matrix dot_sigma(const Vec3& h) {
    Matrix s(2, 2);
    s << h[2], cplx(h[0], -h[1]), cplx(h[0], h[1]), -h[2];
    return s;
}

Matrix permutation2() {
    Matrix p = Matrix::Zero(4, 4);
    p(0, 0) = 1;
    p(1, 2) = 1;
    p(2, 1) = 1;
    p(3, 3) = 1;
    return p;
}

SpinOperator s_matrix(cplx delta) {
    if (std::abs(delta + I) < kPoleGuard)
        throw PoleEncountered("S-matrix pole at delta = -i");
    SpinOperator op;
    op.slots = 2;
    op.mat = (delta * num::eye(4) + I * permutation2()) / (delta + I);
    return op;
}

Matrix embed_one(const Matrix& op, int a, int slots) {
    Matrix out = num::eye(1);
    for (int s = 0; s < slots; ++s)
        out = num::kron(out, s == a ? op : num::eye(2));
    return out;
}

Matrix embed_two(const Matrix& op, int a, int b, int slots) {
    const auto dim = static_cast<Eigen::Index>(1) << slots;
    Matrix out = Matrix::Zero(dim, dim);
    const auto bit = [&](Eigen::Index state, int slot) {
        return static_cast<int>((state >> (slots - 1 - slot)) & 1);
    };
    for (Eigen::Index col = 0; col < dim; ++col) {
        const int ca = bit(col, a), cb = bit(col, b);
        for (int ra = 0; ra < 2; ++ra) {
            for (int rb = 0; rb < 2; ++rb) {
                const cplx amp = op(ra * 2 + rb, ca * 2 + cb);
                if (amp == cplx(0.0)) continue;
                Eigen::Index row = col;
                const Eigen::Index mask_a = static_cast<Eigen::Index>(1)
                                            << (slots - 1 - a);
                const Eigen::Index mask_b = static_cast<Eigen::Index>(1)
                                            << (slots - 1 - b);
                row = (row & ~mask_a) | (ra ? mask_a : 0);
                row = (row & ~mask_b) | (rb ? mask_b : 0);
                out(row, col) += amp;
            }
        }
    }
    return out;
}

Matrix s_embedded(cplx delta, int a, int b, int slots) {
    return embed_two(s_matrix(delta).mat, a, b, slots);
}

namespace {

// Shared shape of both raw boundary matrices:
// -[t^2+xi^2-h^2+2 xi t cos k - 2 i t sin k h.sigma] / denominator.
Matrix kbar_raw(cplx k, double t, double xi, const Vec3& h, cplx den,
                const char* what) {
    check_denominator(den, what);
    const double h2 = dot3(h, h);
    const cplx cosk = std::cos(k);
    const cplx sink = std::sin(k);
    const Matrix num = (t * t + xi * xi - h2 + 2.0 * xi * t * cosk) *
                           num::eye(2) -
                       2.0 * I * t * sink * dot_sigma(h);
    return -num / den;
}

}  // namespace

SpinOperator kbar_plus_raw(cplx k, const BoundaryFields& b) {
    const cplx ph = std::exp(I * k);
    const double h2 = dot3(b.h1(), b.h1());
    const cplx den = (b.t() + b.xi1() * ph) * (b.t() + b.xi1() * ph) -
                     h2 * ph * ph;
    return {1, kbar_raw(k, b.t(), b.xi1(), b.h1(), den, "kbar_plus_raw")};
}

SpinOperator kbar_minus_raw(cplx k, const BoundaryFields& b) {
    const cplx phm = std::exp(-I * k);
    const double h2 = dot3(b.hN(), b.hN());
    const cplx den = (b.t() * phm + b.xiN()) * (b.t() * phm + b.xiN()) - h2;
    return {1, kbar_raw(k, b.t(), b.xiN(), b.hN(), den, "kbar_minus_raw")};
}

SpinOperator kbar_plus_reduced(cplx lambda, const BoundaryFields& b) {
    check_denominator(2.0 * lambda - I, "kbar_plus_reduced");
    const cplx den = b.xi1() + 2.0 * I * lambda * (b.t() + b.xi1());
    check_denominator(den, "kbar_plus_reduced");
    const Matrix core =
        b.xi1() * num::eye(2) - 2.0 * I * lambda * dot_sigma(b.h1());
    return {1, ((2.0 * lambda + I) / (2.0 * lambda - I)) * core / den};
}

SpinOperator kbar_minus_reduced(cplx lambda, const BoundaryFields& b) {
    check_denominator(2.0 * lambda + I, "kbar_minus_reduced");
    const cplx den = b.xiN() + 2.0 * I * lambda * (b.t() + b.xiN());
    check_denominator(den, "kbar_minus_reduced");
    const Matrix core =
        b.xiN() * num::eye(2) - 2.0 * I * lambda * dot_sigma(b.hN());
    return {1, ((2.0 * lambda - I) / (2.0 * lambda + I)) * core / den};
}

double reflection_residual(const BoundaryFields& b, cplx u1, cplx u2,
                           int side) {
    const auto kbar = [&](cplx u) {
        return side >= 0 ? kbar_plus_reduced(u, b).mat
                         : kbar_minus_reduced(u, b).mat;
    };
    const Matrix s_diff = s_matrix(u1 - u2).mat;
    const Matrix s_sum = s_matrix(u1 + u2).mat;
    const Matrix k1 = num::kron(kbar(u1), num::eye(2));
    const Matrix k2 = num::kron(num::eye(2), kbar(u2));
    const Matrix lhs = s_diff * k1 * s_sum * k2;
    const Matrix rhs = k2 * s_sum * k1 * s_diff;
    return num::relative_residual(lhs, rhs);
}

SpinOperator bar_tau(cplx u, const std::vector<cplx>& roots, int j,
                     const BoundaryFields& b) {
    const int m = static_cast<int>(roots.size());
    if (j < 0 || j >= m) throw Error("bar_tau: slot index out of range");
    const auto dim = static_cast<Eigen::Index>(1) << m;
    Matrix acc = num::eye(dim);
    // Left S-string: S_{j-1,j}(l_{j-1}-u) ... S_{1,j}(l_1-u).
    for (int l = j - 1; l >= 0; --l)
        acc *= s_embedded(roots[static_cast<std::size_t>(l)] - u, l, j, m);
    acc *= embed_one(kbar_plus_reduced(u, b).mat, j, m);
    // Middle S-string: S_{j,1}(-u-l_1) ... S_{j,j-1}, then l > j.
    for (int l = 0; l < j; ++l)
        acc *= s_embedded(-u - roots[static_cast<std::size_t>(l)], j, l, m);
    for (int l = j + 1; l < m; ++l)
        acc *= s_embedded(-u - roots[static_cast<std::size_t>(l)], j, l, m);
    acc *= embed_one(kbar_minus_reduced(u, b).mat, j, m);
    // Right S-string: S_{M,j}(l_M-u) ... S_{j+1,j}(l_{j+1}-u).
    for (int l = m - 1; l >= j + 1; --l)
        acc *= s_embedded(roots[static_cast<std::size_t>(l)] - u, l, j, m);
    return {m, std::move(acc)};
}

}  // namespace tj::scatter
