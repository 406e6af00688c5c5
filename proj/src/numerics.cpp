#include "tj/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tj::num {

double max_abs(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().maxCoeff();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return max_abs(a - b);
}

double relative_residual(const Matrix& a, const Matrix& b) {
    const double scale = std::max({1.0, max_abs(a), max_abs(b)});
    return max_abs_diff(a, b) / scale;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

HermitianEig eig_hermitian(const Matrix& h, double hermiticity_tol) {
    const double dev = max_abs_diff(h, h.adjoint());
    if (dev > hermiticity_tol)
        throw NotHermitian("matrix deviates from Hermiticity by " +
                           std::to_string(dev));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("Hermitian eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

GeneralEig eig_general(const Matrix& a) {
    Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("general eigensolver failed to converge");
    const Eigen::Index n = a.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const Vector& raw = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        const cplx x = raw(i), y = raw(j);
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    GeneralEig out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = raw(order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) =
            solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    }
    if (n > 0) {
        Eigen::JacobiSVD<Matrix> svd(out.vectors);
        const double smin = svd.singularValues()(n - 1);
        const double smax = svd.singularValues()(0);
        out.possibly_defective = (smin <= 1e-10 * std::max(1.0, smax));
    }
    return out;
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (symmetric halves).
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelResult {
    double integral;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron_sum = 0.0, gauss_sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double node = h * kKronrodNodes[i];
        const double fv = (i == 7) ? f(c) : f(c - node) + f(c + node);
        kron_sum += kKronrodWeights[i] * fv;
        if (i % 2 == 1) gauss_sum += kGaussWeights[i / 2] * fv;
    }
    const double ik = kron_sum * h;
    const double ig = gauss_sum * h;
    const double diff = std::abs(ik - ig);
    // Standard heuristic sharpening of the Gauss/Kronrod discrepancy.
    const double err = diff > 0.0 ? std::pow(200.0 * diff, 1.5) : 0.0;
    return {ik, std::min(diff, err)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth, int max_depth) {
    const PanelResult r = gk15(f, a, b);
    if (r.error <= tol || b - a < 1e-14 * std::max(1.0, std::abs(a)))
        return r.integral;
    if (depth >= max_depth)
        throw ToleranceNotMet("adaptive quadrature exceeded maximum depth");
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol >= 0.0) ||
        !(spec.half_width > 0.0))
        throw DomainError("quadrature spec requires positive tolerances");
    if (a == b) return 0.0;
    const double rough = gk15(f, a, b).integral;
    const double tol =
        std::max(spec.abs_tol, spec.rel_tol * std::abs(rough));
    return adapt(f, a, b, tol, 0, spec.max_depth);
}

double integrate_line(const std::function<double(double)>& f,
                      const QuadratureSpec& spec) {
    return integrate(f, -spec.half_width, 0.0, spec) +
           integrate(f, 0.0, spec.half_width, spec);
}

double integrate_line_even(const std::function<double(double)>& f,
                           const QuadratureSpec& spec) {
    return 2.0 * integrate(f, 0.0, spec.half_width, spec);
}

PolyFit fit_polynomial(const std::vector<std::pair<cplx, cplx>>& points,
                       int degree) {
    if (degree < 0) throw RankDeficient("polynomial degree must be >= 0");
    const auto n = static_cast<Eigen::Index>(points.size());
    const Eigen::Index cols = degree + 1;
    if (n < cols)
        throw RankDeficient("need at least degree+1 nodes for the fit");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (std::abs(points[i].first - points[j].first) < 1e-12)
                throw RankDeficient("coincident fit nodes");
    Matrix vand(n, cols);
    Vector rhs(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const cplx u = points[static_cast<std::size_t>(r)].first;
        cplx pw = 1.0;
        for (Eigen::Index c = 0; c < cols; ++c) {
            vand(r, c) = pw;
            pw *= u;
        }
        rhs(r) = points[static_cast<std::size_t>(r)].second;
    }
    const Vector sol = vand.colPivHouseholderQr().solve(rhs);
    PolyFit fit;
    fit.coeffs.assign(sol.data(), sol.data() + sol.size());
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& [u, v] = points[static_cast<std::size_t>(r)];
        fit.residual = std::max(fit.residual,
                                std::abs(poly_eval(fit.coeffs, u) - v));
    }
    return fit;
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx u) {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * u + *it;
    return acc;
}

}  // namespace tj::num
