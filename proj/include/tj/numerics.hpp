#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "tj/errors.hpp"

namespace tj {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};

namespace num {

// Largest entry magnitude of a matrix (0 for empty).
double max_abs(const Matrix& a);

// Largest entrywise difference |a - b|.
double max_abs_diff(const Matrix& a, const Matrix& b);

// Entrywise difference scaled by max(1, |a|_max, |b|_max).  All identity
// residuals in this library use this normalization so that checks stay
// meaningful when operator entries grow with chain length.
double relative_residual(const Matrix& a, const Matrix& b);

// Kronecker product, row-major slot convention: slot 0 is the leftmost
// (most significant) factor of the tensor basis index.
Matrix kron(const Matrix& a, const Matrix& b);

// Identity of dimension n.
Matrix eye(Eigen::Index n);

struct HermitianEig {
    RealVector values;   // ascending
    Matrix vectors;      // columns are orthonormal eigenvectors
};

// Eigendecomposition of a Hermitian matrix.  Throws NotHermitian when
// max |H - H^dagger| exceeds `hermiticity_tol`.
HermitianEig eig_hermitian(const Matrix& h, double hermiticity_tol = 1e-12);

struct GeneralEig {
    Vector values;    // sorted by (real, imag) ascending
    Matrix vectors;   // columns matched to values
    // Set when the eigenvector matrix is numerically singular, i.e. the
    // matrix may be defective and the eigenbasis should not be trusted.
    bool possibly_defective = false;
};

// Eigendecomposition of a general complex matrix.  Throws
// ConvergenceFailure if the underlying QR iteration fails.
GeneralEig eig_general(const Matrix& a);

struct QuadratureSpec {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double half_width = 80.0;  // truncation W for integrals over the real line
    int max_depth = 48;        // maximum bisection depth per panel
};

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
// Throws ToleranceNotMet when the requested tolerance cannot be certified.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Integral of f over the whole real line, truncated to [-W, W].  The panel
// split at 0 keeps kinks of even kernels (|omega| dependence) harmless.
double integrate_line(const std::function<double(double)>& f,
                      const QuadratureSpec& spec = {});

// Same for even integrands: 2 * integral over [0, W].
double integrate_line_even(const std::function<double(double)>& f,
                           const QuadratureSpec& spec = {});

struct PolyFit {
    std::vector<cplx> coeffs;  // coeffs[k] multiplies u^k
    double residual = 0.0;     // max |p(node) - value| over the input set
};

// Least-squares polynomial fit through (node, value) pairs.  Requires at
// least degree+1 pairwise distinct nodes, otherwise throws RankDeficient.
PolyFit fit_polynomial(const std::vector<std::pair<cplx, cplx>>& points,
                       int degree);

// Evaluate a coefficient vector (coeffs[k] * u^k) at u.
cplx poly_eval(const std::vector<cplx>& coeffs, cplx u);

}  // namespace num
}  // namespace tj
