#include "tj/thermo.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "tj/errors.hpp"
#include "tj/numerics.hpp"

namespace tj::thermo {

namespace {

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

const double kLn3Half = 0.5 * std::log(3.0);

// Alternating-series acceleration (Chebyshev-polynomial scheme); converges
// like (3 + sqrt(8))^{-n} for analytic term sequences.
double accelerate_alternating(const std::function<double(int)>& a,
                              int n = 48) {
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d, s = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        s += c * a(k);
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
    }
    return s / d;
}

double b_series(double p) {
    const double part1 =
        std::pow(2.0, -(p + 1.0)) *
        accelerate_alternating([&](int n) { return 1.0 / (n + p + 1.0); });
    const bool integer_p =
        std::abs(p - std::round(p)) < 1e-12 && std::round(p) >= 0.0;
    int n0 = static_cast<int>(std::floor(p)) + 1;
    if (n0 < 0) n0 = 0;
    const int ip = integer_p ? static_cast<int>(std::round(p)) : -1;
    double head = 0.0, delta = 0.0;
    for (int n = 0; n < n0; ++n) {
        if (n == ip) {
            delta = (ip % 2 == 0 ? 1.0 : -1.0) * std::pow(2.0, -(p + 1.0)) *
                    std::log(2.0);
            continue;
        }
        head += (n % 2 == 0 ? 1.0 : -1.0) *
                (std::pow(2.0, -(n + 1.0)) - std::pow(2.0, -(p + 1.0))) /
                (p - n);
    }
    const double tail_sign = (n0 % 2 == 0) ? 1.0 : -1.0;
    const double tail =
        tail_sign * accelerate_alternating([&](int k) {
            const double n = n0 + k;
            return (std::pow(2.0, -(n + 1.0)) - std::pow(2.0, -(p + 1.0))) /
                   (p - n);
        });
    return part1 + head + delta + tail;
}

double b_quadrature(double p) {
    if (p >= 0.0)
        return num::integrate(
            [&](double x) { return std::pow(x, p) / (2.0 * x + 1.0); }, 0.0,
            1.0);
    // x = y^{1/(1+p)} removes the integrable singularity at the origin.
    const double inv = 1.0 / (1.0 + p);
    return num::integrate(
        [&](double y) {
            return inv / (2.0 * std::pow(y, inv) + 1.0);
        },
        0.0, 1.0);
}

// General-sign finite-size kernel, scaled by 2N.  The optional g slot adds
// the (a~2+1) sgn(g) a~2|g| boundary piece of the mixed case.
double c_bar(double omega, double c, double d,
             const std::optional<double>& g) {
    const double a1 = a_tilde(1.0, omega), a2 = a_tilde(2.0, omega);
    double edge = a2 + 1.0;
    if (g) edge *= 1.0 + sgn(*g) * a_tilde(2.0 * std::abs(*g), omega);
    return edge + a1 * (a1 + sgn(c) * a_tilde(2.0 * std::abs(c), omega) +
                        sgn(d) * a_tilde(2.0 * std::abs(d), omega) - 1.0);
}

// 2Nt Int [C(w)/(2 a~2 + 1)][delta(w) - a~1(w)/2] dw with the delta handled
// analytically; N cancels against the 1/2N in C.
double correction_quadrature(double c, double d,
                             const std::optional<double>& g, double t) {
    const double at_zero = c_bar(0.0, c, d, g) / 3.0;
    const double integral = num::integrate_line_even([&](double w) {
        return c_bar(w, c, d, g) * a_tilde(1.0, w) /
               (2.0 * a_tilde(2.0, w) + 1.0);
    });
    return t * (at_zero - 0.5 * integral);
}

}  // namespace

BoundaryExponents BoundaryExponents::from_fields(const BoundaryFields& b) {
    BoundaryExponents e;
    if (b.hN_norm() > 1e-12) {
        e.c_bnd = -b.xiN() / (2.0 * b.hN_norm()) - 0.5;
        e.g_bnd = b.xiN() / (2.0 * b.hN_norm());
    }
    if (b.h1_norm() > 1e-12)
        e.d_bnd = -b.xi1() / (2.0 * b.h1_norm()) - 0.5;
    return e;
}

double BoundaryExponents::c() const {
    if (!c_bnd) throw UndefinedExponents("c_bnd undefined: |hN| = 0");
    return *c_bnd;
}

double BoundaryExponents::d() const {
    if (!d_bnd) throw UndefinedExponents("d_bnd undefined: |h1| = 0");
    return *d_bnd;
}

double BoundaryExponents::g() const {
    if (!g_bnd) throw UndefinedExponents("g_bnd undefined: |hN| = 0");
    return *g_bnd;
}

double a_kernel(double n, double z) {
    if (n <= 0.0) throw InvalidOrder("a_kernel requires n > 0");
    return 0.5 * std::numbers::inv_pi * n / (z * z + 0.25 * n * n);
}

double a_tilde(double n, double omega) {
    if (n < 0.0) throw InvalidOrder("a_tilde requires n >= 0");
    return std::exp(-0.5 * n * std::abs(omega));
}

double c_function(double omega, const BoundaryExponents& exps, int n_sites) {
    return c_bar(omega, exps.c(), exps.d(), std::nullopt) /
           (2.0 * n_sites);
}

double rho_tilde(double omega, const BoundaryExponents& exps, int n_sites) {
    const double a1 = a_tilde(1.0, omega), a2 = a_tilde(2.0, omega);
    return ((a2 + 1.0) * a1 - c_function(omega, exps, n_sites)) /
           (2.0 * a2 + 1.0);
}

double rho_tilde_periodic(double omega) {
    const double a1 = a_tilde(1.0, omega), a2 = a_tilde(2.0, omega);
    return (a2 + 1.0) * a1 / (2.0 * a2 + 1.0);
}

PeriodicGround periodic_ground_energy(double t) {
    PeriodicGround out;
    out.filling = 2.0 / 3.0;
    out.energy_per_site = (-1.0 / 3.0 + kLn3Half) * t;
    const double integral = num::integrate_line_even([](double w) {
        return rho_tilde_periodic(w) * a_tilde(1.0, w);
    });
    out.quadrature = -2.0 * t * (rho_tilde_periodic(0.0) - 0.5 * integral);
    out.difference = out.energy_per_site - out.quadrature;
    if (std::abs(out.difference) >
        1e-10 * std::max(1.0, std::abs(out.energy_per_site)))
        throw ToleranceNotMet("periodic ground energy: routes disagree by " +
                              std::to_string(out.difference));
    return out;
}

BValue b_value(double p) {
    if (p <= -1.0) throw DomainError("b_value requires p > -1");
    return BValue{b_series(p), b_quadrature(p)};
}

double open_ground_energy(const BoundaryExponents& exps, double t,
                          int sign_case) {
    const double c = exps.c(), d = exps.d();
    if (sign_case > 0 && !(t > 0.0 && c > 0.0 && d > 0.0))
        throw RegimeMismatch(
            "sign_case +1 requires t > 0 with c_bnd, d_bnd > 0");
    if (sign_case <= 0 && !(t < 0.0 && c < 0.0 && d < 0.0))
        throw RegimeMismatch(
            "sign_case -1 requires t < 0 with c_bnd, d_bnd < 0");
    const double closed =
        (sign_case > 0)
            ? (kLn3Half - 2.0 / 3.0 - b_value(c).series - b_value(d).series) *
                  t
            : (kLn3Half - 2.0 + b_value(-c).series + b_value(-d).series) * t;
    const double quad = correction_quadrature(c, d, std::nullopt, t);
    if (std::abs(closed - quad) > 1e-8)
        throw ToleranceNotMet("open ground energy: closed form " +
                              std::to_string(closed) + " vs quadrature " +
                              std::to_string(quad));
    return closed;
}

double surface_energy_parallel(const BoundaryExponents& exps, double t) {
    const double c = exps.c(), d = exps.d();
    return kLn3Half * t + (sgn(c) + sgn(d) - 4.0) / 3.0 * t -
           sgn(c) * b_value(std::abs(c)).series * t -
           sgn(d) * b_value(std::abs(d)).series * t;
}

double boundary_string_energy(double g, double t) {
    if (g <= 0.0)
        throw RegimeMismatch("boundary string requires g > 0 (xi_N > 0)");
    if (std::abs(g - 0.5) < 1e-10)
        throw SingularAtHalf("boundary string energy has a pole at g = 1/2");
    if (g > 0.5 && t >= 0.0)
        throw RegimeMismatch("g > 1/2 corresponds to t < 0");
    if (g < 0.5 && t <= 0.0)
        throw RegimeMismatch("0 < g < 1/2 corresponds to t > 0");
    double closed;
    if (g > 0.5)
        closed = -2.0 * t - t / (g * g - 0.25) +
                 b_value(g - 0.5).series * t - b_value(g + 0.5).series * t;
    else
        closed = -4.0 / 3.0 * t + t / (0.25 - g * g) -
                 b_value(0.5 - g).series * t - b_value(0.5 + g).series * t;
    // Quadrature route: bare string plus the density back-reaction.
    const double bare = -2.0 * t * (-g * g - 0.25) / (-g * g + 0.25);
    const auto big_a = [&](double w) {
        return (g > 0.5)
                   ? a_tilde(2.0 * g + 1.0, w) - a_tilde(2.0 * g - 1.0, w)
                   : a_tilde(1.0 - 2.0 * g, w) + a_tilde(2.0 * g + 1.0, w);
    };
    const double a_at_zero = (g > 0.5) ? 0.0 : 2.0;
    const double integral = num::integrate_line_even([&](double w) {
        const double a1 = a_tilde(1.0, w);
        return a1 * a1 * big_a(w) / (2.0 * a_tilde(2.0, w) + 1.0);
    });
    const double quad = bare + t * a_at_zero / 3.0 - 0.5 * t * integral;
    if (std::abs(closed - quad) > 1e-8)
        throw ToleranceNotMet("boundary string energy: closed form " +
                              std::to_string(closed) + " vs quadrature " +
                              std::to_string(quad));
    return closed;
}

double surface_energy_mixed(const BoundaryExponents& exps, double t) {
    const double c = exps.c(), d = exps.d(), g = exps.g();
    if (std::abs(std::abs(g) - 0.5) < 1e-12)
        throw SingularAtHalf("mixed surface energy excluded at |g| = 1/2");
    return kLn3Half * t +
           (2.0 * sgn(g) + sgn(c) + sgn(d) - 4.0) / 3.0 * t -
           (sgn(c) * b_value(std::abs(c)).series -
            sgn(d) * b_value(std::abs(d)).series +
            sgn(g) * b_value(std::abs(g) - 0.5).series +
            sgn(g) * b_value(std::abs(g) + 0.5).series) *
               t;
}

double surface_energy_mixed_density_route(const BoundaryExponents& exps,
                                          double t) {
    const double c = exps.c(), d = exps.d(), g = exps.g();
    if (std::abs(std::abs(g) - 0.5) < 1e-12)
        throw SingularAtHalf("mixed surface energy excluded at |g| = 1/2");
    return correction_quadrature(c, d, g, t);
}

}  // namespace tj::thermo
