#include "tj/odba.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>

#include "tj/errors.hpp"

namespace tj::odba {

using xxx::eta;

int aux_count(Case kind, int m_electrons, int m_pairs) {
    switch (kind) {
        case Case::even_inhomogeneous: return m_electrons;
        case Case::odd_inhomogeneous: return m_electrons + 1;
        case Case::parallel: return m_pairs;
    }
    throw Error("aux_count: bad case");
}

TQProfile::TQProfile(Case kind, const BoundaryFields& b,
                     std::vector<cplx> lambda)
    : kind_(kind),
      lambda_(std::move(lambda)),
      sgn_(static_cast<double>(b.sgn_dot())),
      h1n_(b.h1_norm()),
      hNn_(b.hN_norm()),
      p_(b.p()),
      q_(b.q()),
      c_(b.c_inhom()) {}

cplx TQProfile::A(cplx u) const {
    cplx prod = 1.0;
    for (const cplx& l : lambda_) prod *= (u - l + eta) * (u + l + eta);
    return prod;
}

cplx TQProfile::a(cplx u) const {
    return (2.0 * u + 2.0 * eta) / (2.0 * u + eta) * (p_ + u * sgn_ * hNn_) *
           (q_ - u * h1n_) * A(u);
}

cplx TQProfile::d(cplx u) const {
    cplx prod = 1.0;
    for (const cplx& l : lambda_) prod *= (u - l) * (u + l);
    return 2.0 * u / (2.0 * u + eta) * (p_ - (u + eta) * sgn_ * hNn_) *
           (q_ + (u + eta) * h1n_) * prod;
}

cplx TQProfile::Q1(cplx u, const std::vector<cplx>& mu) const {
    cplx prod = 1.0;
    for (const cplx& m : mu) prod *= u - m;
    return prod;
}

cplx TQProfile::Q2(cplx u, const std::vector<cplx>& mu) const {
    return Q1(-u - eta, mu);
}

cplx TQProfile::Q(cplx u, const std::vector<cplx>& gamma) const {
    cplx prod = 1.0;
    for (const cplx& g : gamma) prod *= (u - g) * (u + g + eta);
    return prod;
}

cplx tq_lambda(cplx u, const BetheRoots& roots, const BoundaryFields& b) {
    constexpr double kGuard = 1e-10;
    const TQProfile tq(roots.kind, b, roots.lambda);
    if (std::abs(2.0 * u + eta) < kGuard)
        throw PoleEncountered("tq_lambda: u at the crossing point -eta/2");
    if (roots.kind == Case::parallel) {
        const cplx qu = tq.Q(u, roots.aux);
        if (std::abs(qu) < kGuard)
            throw PoleEncountered("tq_lambda: u at a zero of Q");
        return tq.a(u) * tq.Q(u - eta, roots.aux) / qu +
               tq.d(u) * tq.Q(u + eta, roots.aux) / qu;
    }
    const cplx q1 = tq.Q1(u, roots.aux);
    const cplx q2 = tq.Q2(u, roots.aux);
    if (std::abs(q1) < kGuard || std::abs(q2) < kGuard)
        throw PoleEncountered("tq_lambda: u at a zero of Q1 or Q2");
    const cplx uu = (roots.kind == Case::even_inhomogeneous)
                        ? u * (u + eta)
                        : u * u * (u + eta) * (u + eta);
    return tq.a(u) * tq.Q1(u - eta, roots.aux) / q2 +
           tq.d(u) * tq.Q2(u + eta, roots.aux) / q1 +
           tq.c_inhom() * uu * tq.A(u) * tq.A(-u - eta) / (q1 * q2);
}

namespace {

// Set TJ_ODBA_DEBUG=1 to get per-stage solver diagnostics on stderr.
bool debug_enabled() {
    static const bool on = std::getenv("TJ_ODBA_DEBUG") != nullptr;
    return on;
}

// Joint polynomial system for one case: unknowns z = [lambda..., aux...].
struct System {
    Case kind;
    int n_sites = 0;
    int n_lambda = 0;
    int n_aux = 0;
    const BoundaryFields* b = nullptr;

    int size() const { return n_lambda + n_aux; }

    // Cleared equations, lambda block first.  F[j] = T1 -/+ T2, with
    // sc[j] = max(1, |T1|, |T2|).
    //
    // When p = 0 (xi_N = 0) or q = 0 (xi_1 = 0) the cleared forms share an
    // exact common factor between T1 and T2 (lambda row: lambda itself; aux
    // row: mu + eta, or gamma and gamma + eta).  The ratio-form equations are
    // regular there, so the common factor is divided out analytically; left
    // in, it creates spurious solution sheets and destroys conditioning for
    // genuine roots nearby.
    void eval(const std::vector<cplx>& z, std::vector<cplx>& f,
              std::vector<double>& sc) const {
        const double s = static_cast<double>(b->sgn_dot());
        const double h1n = b->h1_norm(), hNn = b->hN_norm();
        const cplx p = b->p(), q = b->q(), c = b->c_inhom();
        const double t = b->t(), xi1 = b->xi1(), xiN = b->xiN();
        const bool pz = std::abs(p) < 1e-12, qz = std::abs(q) < 1e-12;
        // Secondary degeneracy: when p = eta s|hN|/2 (resp. q = -eta|h1|/2,
        // i.e. |h| = t/2 on the usual branch) the two boundary factors of the
        // aux equations share a zero at the crossing point, producing another
        // exact common factor after clearing.
        const bool ph = !pz && std::abs(p - 0.5 * eta * s * hNn) < 1e-12;
        const bool qh = !qz && std::abs(q + 0.5 * eta * h1n) < 1e-12;
        const int twoN = 2 * n_sites;
        f.assign(static_cast<std::size_t>(size()), 0.0);
        sc.assign(static_cast<std::size_t>(size()), 1.0);
        const auto lam = [&](int l) { return z[static_cast<std::size_t>(l)]; };
        const auto aux = [&](int l) {
            return z[static_cast<std::size_t>(n_lambda + l)];
        };
        for (int j = 0; j < n_lambda; ++j) {
            const cplx lj = lam(j);
            const cplx p1 = pz ? cplx(-s * hNn) : (p - lj * s * hNn);
            const cplx q1 = qz ? cplx(h1n) : (q + lj * h1n);
            const cplx p2 = pz ? cplx(t + xiN) : (p + lj * (t + xiN));
            const cplx q2 = qz ? cplx(-(t + xi1)) : (q - lj * (t + xi1));
            cplx t1 = p1 * q1 * std::pow(2.0 * lj - eta, twoN);
            cplx t2 = p2 * q2 * std::pow(2.0 * lj + eta, twoN);
            if (kind == Case::parallel) {
                for (int l = 0; l < n_aux; ++l) {
                    t1 *= (lj + aux(l) + eta) * (lj - aux(l));
                    t2 *= (lj - aux(l) - eta) * (lj + aux(l));
                }
            } else {
                for (int l = 0; l < n_aux; ++l) {
                    t1 *= lj + aux(l) + eta;
                    t2 *= lj - aux(l) - eta;
                }
            }
            f[static_cast<std::size_t>(j)] = t1 - t2;
            sc[static_cast<std::size_t>(j)] =
                std::max({1.0, std::abs(t1), std::abs(t2)});
        }
        for (int j = 0; j < n_aux; ++j) {
            const int row = n_lambda + j;
            cplx t1, t2;
            if (kind == Case::parallel) {
                const cplx gj = aux(j);
                // With p = 0 the boundary factors contribute gamma (T2) and
                // gamma + eta (T1); together with the explicit prefactors the
                // pair shares gamma*(gamma+eta) exactly.  Same with q = 0.
                // With p at the half-point both p-factors carry gamma+eta/2,
                // cancelled against each other (prefactors untouched).
                const int k = (pz ? 1 : 0) + (qz ? 1 : 0);
                const cplx p1 = (pz || ph) ? cplx(-s * hNn)
                                           : (p - (gj + eta) * s * hNn);
                const cplx q1 =
                    (qz || qh) ? cplx(h1n) : (q + (gj + eta) * h1n);
                const cplx p2 =
                    (pz || ph) ? cplx(s * hNn) : (p + gj * s * hNn);
                const cplx q2 = (qz || qh) ? cplx(-h1n) : (q - gj * h1n);
                if (k == 0) {
                    t1 = gj * p1 * q1;
                    t2 = (gj + eta) * p2 * q2;
                } else if (k == 1) {
                    t1 = p1 * q1;
                    t2 = p2 * q2;
                } else {
                    t1 = (gj + eta) * p1 * q1;
                    t2 = gj * p2 * q2;
                }
                for (int l = 0; l < n_lambda; ++l) {
                    t1 *= (gj + lam(l)) * (gj - lam(l));
                    t2 *= (gj - lam(l) + eta) * (gj + lam(l) + eta);
                }
                for (int l = 0; l < n_aux; ++l) {
                    t1 *= (gj - aux(l) + eta) * (gj + aux(l) + 2.0 * eta);
                    t2 *= (gj - aux(l) - eta) * (gj + aux(l));
                }
            } else {
                const cplx mj = aux(j);
                // Common-factor budgets in T1: (mu+eta) appears once (even)
                // or twice (odd); (2mu+eta) appears once in either case and
                // absorbs the half-point cancellations.
                const int budget = (kind == Case::even_inhomogeneous) ? 1 : 2;
                int cancelled = 0;
                int half = 0;
                cplx pf = p - (mj + eta) * s * hNn;
                if (pz && cancelled < budget) {
                    pf = -s * hNn;
                    ++cancelled;
                } else if (ph && half < 1) {
                    pf = -s * hNn;
                    ++half;
                }
                cplx qf = q + (mj + eta) * h1n;
                if (qz && cancelled < budget) {
                    qf = h1n;
                    ++cancelled;
                } else if (qh && half < 1) {
                    qf = h1n;
                    ++half;
                }
                t1 = c * (half ? cplx(2.0) : (2.0 * mj + eta));
                if (kind == Case::odd_inhomogeneous) t1 *= mj;
                for (int r = cancelled; r < budget; ++r) t1 *= mj + eta;
                for (int l = 0; l < n_lambda; ++l)
                    t1 *= (mj - lam(l) + eta) * (mj + lam(l) + eta);
                t2 = 2.0 * pf * qf;
                for (int l = 0; l < n_aux; ++l)
                    t2 *= (mj + aux(l) + eta) * (mj + aux(l) + 2.0 * eta);
            }
            f[static_cast<std::size_t>(row)] = t1 + t2;
            sc[static_cast<std::size_t>(row)] =
                std::max({1.0, std::abs(t1), std::abs(t2)});
        }
    }

    // Distance (in root space) to the nearest cleared-denominator zero or
    // structurally spurious point of the cleared system.
    double guard_distance(const std::vector<cplx>& z) const {
        const double s = static_cast<double>(b->sgn_dot());
        const double h1n = b->h1_norm(), hNn = b->hN_norm();
        const cplx p = b->p(), q = b->q();
        const double t = b->t(), xi1 = b->xi1(), xiN = b->xiN();
        double dmin = 1e300;
        const auto upd = [&](cplx zz) { dmin = std::min(dmin, std::abs(zz)); };
        const auto lam = [&](int l) { return z[static_cast<std::size_t>(l)]; };
        const auto aux = [&](int l) {
            return z[static_cast<std::size_t>(n_lambda + l)];
        };
        for (int j = 0; j < n_lambda; ++j) {
            const cplx lj = lam(j);
            if (std::abs(t + xiN) > 1e-12) upd(lj + p / (t + xiN));
            if (std::abs(t + xi1) > 1e-12) upd(lj - q / (t + xi1));
            upd(lj + 0.5 * eta);
            upd(lj - 0.5 * eta);
            for (int l = 0; l < n_aux; ++l) {
                if (kind == Case::parallel) {
                    upd(lj + aux(l) + eta);
                    upd(lj - aux(l));
                } else {
                    upd(lj + aux(l) + eta);
                }
            }
        }
        const bool pz = std::abs(p) < 1e-12, qz = std::abs(q) < 1e-12;
        const bool ph = !pz && std::abs(p - 0.5 * eta * s * hNn) < 1e-12;
        const bool qh = !qz && std::abs(q + 0.5 * eta * h1n) < 1e-12;
        for (int j = 0; j < n_aux; ++j) {
            const cplx aj = aux(j);
            if (kind == Case::parallel) {
                // With p = 0 or q = 0 the cleared equations cancel the
                // gamma*(gamma+eta) pair analytically, and gamma = 0 (orbit
                // image -eta) becomes a regular boundary-pin position.  At
                // the half-point degeneracies the pin collapses onto the
                // crossing point and is likewise regularized.
                if (!pz && !qz) {
                    upd(aj);
                    upd(aj + eta);
                }
                if (!pz && !ph && std::abs(s * hNn) > 1e-12)
                    upd(aj + p / (s * hNn));
                if (!qz && !qh && std::abs(h1n) > 1e-12) upd(aj - q / h1n);
                for (int l = 0; l < n_lambda; ++l) {
                    upd(aj - lam(l) + eta);
                    upd(aj + lam(l) + eta);
                }
                for (int l = 0; l < n_aux; ++l) {
                    // Coalesced Q zeros ({gamma_l} with {-gamma_l-eta}) give
                    // a double pole the residue conditions cannot see.  The
                    // self term 2*gamma+eta pins the crossing point, which
                    // at a half-point degeneracy hosts a genuine boundary
                    // string (both boundary factors share the zero there).
                    if (l != j || (!ph && !qh))
                        upd(aj + aux(l) + eta);
                    if (l == j) continue;
                    upd(aj - aux(l));
                    upd(aj - aux(l) + eta);
                    upd(aj + aux(l) + 2.0 * eta);
                }
            } else {
                // The crossing point is a pole of the ratio-form auxiliary
                // equation except at a half-point degeneracy, where the
                // shared boundary zero cancels it and a genuine root can
                // sit exactly on -eta/2.
                if (!ph && !qh) upd(aj + 0.5 * eta);
                // mu = -eta forces Lambda(0) = 0, consistent only when
                // 2pq prod(...) = 0, i.e. when p or q vanishes.
                if (!pz && !qz) upd(aj + eta);
                if (!pz && !ph && std::abs(s * hNn) > 1e-12)
                    upd(aj + eta - p / (s * hNn));
                if (!qz && !qh && std::abs(h1n) > 1e-12)
                    upd(aj + eta + q / h1n);
                for (int l = 0; l < n_lambda; ++l) {
                    upd(aj - lam(l) + eta);
                    upd(aj + lam(l) + eta);
                }
                for (int l = 0; l < n_aux; ++l) {
                    // Coalesced zeros of Q1 (or of Q1 with Q2) give a double
                    // pole the first-order residue conditions cannot see.
                    upd(aj + aux(l) + eta);
                    if (l != j) upd(aj - aux(l));
                }
            }
        }
        return dmin;
    }
};

double scaled_inf_norm(const std::vector<cplx>& f,
                       const std::vector<double>& sc) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        m = std::max(m, std::abs(f[i]) / sc[i]);
    return m;
}

// Damped Newton on the holomorphic system (complex Jacobian by forward
// differences).  Returns true when the final scaled residual is acceptable.
bool newton(const System& sys, std::vector<cplx>& z, double& out_residual,
            const SolveOptions& o) {
    const int k = sys.size();
    if (k == 0) {
        out_residual = 0.0;
        return true;
    }
    std::vector<cplx> f, ft;
    std::vector<double> sc, sct;
    sys.eval(z, f, sc);
    double merit = scaled_inf_norm(f, sc);
    for (int it = 0; it < o.newton_cap && merit >= o.converge_tol; ++it) {
        Eigen::MatrixXcd jac(k, k);
        for (int l = 0; l < k; ++l) {
            const double h =
                1e-7 * std::max(1.0, std::abs(z[static_cast<std::size_t>(l)]));
            auto zp = z;
            zp[static_cast<std::size_t>(l)] += h;
            sys.eval(zp, ft, sct);
            for (int r = 0; r < k; ++r)
                jac(r, l) = (ft[static_cast<std::size_t>(r)] -
                             f[static_cast<std::size_t>(r)]) /
                            h;
        }
        Eigen::VectorXcd rhs(k);
        for (int r = 0; r < k; ++r) {
            jac.row(r) /= sc[static_cast<std::size_t>(r)];
            rhs(r) = -f[static_cast<std::size_t>(r)] /
                     sc[static_cast<std::size_t>(r)];
        }
        const Eigen::VectorXcd dz = jac.colPivHouseholderQr().solve(rhs);
        if (!dz.allFinite()) break;
        double alpha = 1.0;
        bool improved = false;
        for (int hlv = 0; hlv <= o.max_halvings; ++hlv, alpha *= 0.5) {
            auto zt = z;
            for (int l = 0; l < k; ++l)
                zt[static_cast<std::size_t>(l)] += alpha * dz(l);
            sys.eval(zt, ft, sct);
            const double mt = scaled_inf_norm(ft, sc);  // frozen scales
            if (mt < merit * (1.0 - 1e-4 * alpha) || mt < o.converge_tol) {
                z.swap(zt);
                f.swap(ft);
                sc.swap(sct);
                merit = scaled_inf_norm(f, sc);
                improved = true;
                break;
            }
        }
        if (!improved) break;  // stagnation
    }
    out_residual = merit;
    return merit < o.accept_tol;
}

bool lex_less(const cplx& a, const cplx& b2) {
    if (a.real() != b2.real()) return a.real() < b2.real();
    return a.imag() < b2.imag();
}

// Ordering that ignores sub-1e-9 noise, so conjugate pairs (whose real parts
// agree only to roundoff) sort the same way on every run.
bool lex_less_tol(const cplx& a, const cplx& b2) {
    if (std::abs(a.real() - b2.real()) > 1e-9) return a.real() < b2.real();
    if (std::abs(a.imag() - b2.imag()) > 1e-9) return a.imag() < b2.imag();
    return false;
}

// Reporting representative: lambda with non-negative real part (imaginary
// roots: non-negative imaginary part); gamma modulo gamma -> -gamma - eta.
void canonicalize(BetheRoots& r) {
    for (cplx& l : r.lambda)
        if (l.real() < -1e-10 ||
            (std::abs(l.real()) <= 1e-10 && l.imag() < 0.0))
            l = -l;
    std::sort(r.lambda.begin(), r.lambda.end(), lex_less_tol);
    if (r.kind == Case::parallel)
        for (cplx& g : r.aux) {
            const cplx alt = -g - eta;
            if (lex_less_tol(g, alt)) g = alt;
        }
    std::sort(r.aux.begin(), r.aux.end(), lex_less_tol);
}

// Unordered multiset match within tol (greedy nearest; fine while roots are
// separated by much more than tol, which the structure filter guarantees).
bool match_multiset(const std::vector<cplx>& a, const std::vector<cplx>& b2,
                    double tol) {
    if (a.size() != b2.size()) return false;
    std::vector<bool> used(b2.size(), false);
    for (const cplx& x : a) {
        bool hit = false;
        for (std::size_t i = 0; i < b2.size(); ++i) {
            if (used[i] || std::abs(x - b2[i]) > tol) continue;
            used[i] = true;
            hit = true;
            break;
        }
        if (!hit) return false;
    }
    return true;
}

bool same_roots(const BetheRoots& a, const BetheRoots& b2, double tol) {
    return a.n_infinite == b2.n_infinite &&
           match_multiset(a.lambda, b2.lambda, tol) &&
           match_multiset(a.aux, b2.aux, tol);
}

// Structural acceptance test on a converged candidate.  A genuine solution
// makes the T-Q expression a polynomial of degree 2M+2 that satisfies the
// eigenvalue identity at u = -lambda_j.  Spurious sheets of the cleared
// equations (coalesced Q orbits and the like, which open up near degenerate
// boundary parameters) fail one or both by many orders of magnitude, while
// genuine roots sit at 1e-13 or better even when an auxiliary root lands
// exactly on -eta or -eta/2.
bool tq_structure_ok(const BetheRoots& r, const BoundaryFields& b,
                     int n_sites) {
    const int m = static_cast<int>(r.lambda.size());
    if (m == 0) return true;
    const int degree = 2 * m + 2;
    const int n_nodes = 2 * m + 6;
    num::PolyFit fit;
    double vmax = 1.0;
    bool have_fit = false;
    for (double phase : {0.23, 0.61, 1.07}) {
        std::vector<std::pair<cplx, cplx>> pts;
        vmax = 1.0;
        try {
            for (int k = 0; k < n_nodes; ++k) {
                const double phi =
                    2.0 * std::numbers::pi * k / n_nodes + phase;
                const cplx u = -0.5 * eta + 1.3 * std::exp(I * phi);
                const cplx v = tq_lambda(u, r, b);
                vmax = std::max(vmax, std::abs(v));
                pts.emplace_back(u, v);
            }
        } catch (const PoleEncountered&) {
            continue;  // a sample node hit a zero of Q; rotate the ring
        }
        fit = num::fit_polynomial(pts, degree);
        have_fit = true;
        break;
    }
    if (!have_fit || fit.residual / vmax > 1e-10) return false;
    for (int j = 0; j < m; ++j) {
        const cplx lj = r.lambda[static_cast<std::size_t>(j)];
        cplx rhs = std::pow((2.0 * lj + eta) / (2.0 * lj - eta),
                            2 * n_sites) *
                   2.0 * eta * (lj - eta) *
                   (b.p() + lj * (b.t() + b.xiN())) *
                   (-b.q() + lj * (b.t() + b.xi1()));
        for (int l = 0; l < m; ++l) {
            if (l == j) continue;
            const cplx ll = r.lambda[static_cast<std::size_t>(l)];
            rhs *= (lj - ll - eta) * (lj + ll - eta);
        }
        const cplx lhs = num::poly_eval(fit.coeffs, -lj);
        const double dev = std::abs(lhs - rhs) /
                           std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (dev > 1e-8) return false;
    }
    return true;
}

cplx complex_energy(const std::vector<cplx>& lambda, double t) {
    cplx e = 0.0;
    for (const cplx& l : lambda) {
        const cplx den = l * l + 0.25;
        if (std::abs(den) < 1e-12)
            throw PoleEncountered("energy: root at +-i/2");
        e += (l * l - 0.25) / den;
    }
    return -2.0 * t * e;
}

std::vector<double> free_chain_lambdas(int n_sites) {
    std::vector<double> out;
    for (int n = 1; n <= n_sites; ++n) {
        const double k = std::numbers::pi * static_cast<double>(n) / (n_sites + 1);
        out.push_back(0.5 / std::tan(0.5 * k));
    }
    return out;
}

Vec3 slerp_from_z(const Vec3& target_dir, double theta) {
    const Vec3 z0{0.0, 0.0, 1.0};
    double cosw = std::clamp(target_dir[2], -1.0, 1.0);
    const double w = std::acos(cosw);
    if (w < 1e-12) return z0;
    Vec3 axis{-target_dir[1], target_dir[0], 0.0};  // z0 x target
    double an = norm3(axis);
    if (an < 1e-12) axis = Vec3{0.0, 1.0, 0.0};  // antipodal: rotate about y
    else
        for (double& c : axis) c /= an;
    const double ang = theta * w;
    // Rodrigues rotation of z0 about axis (axis is horizontal, axis.z = 0).
    const double ca = std::cos(ang), sa = std::sin(ang);
    Vec3 v;
    const Vec3 cross{axis[1], -axis[0], 0.0};  // axis x z0
    for (int i = 0; i < 3; ++i) v[i] = z0[i] * ca + cross[i] * sa;
    return v;
}

struct Candidate {
    std::vector<cplx> z;
};

// --- operator-assisted seeding -------------------------------------------
//
// The joint (lambda, aux) landscape of the cleared system is dominated by
// spurious basins, so the inhomogeneous cases are factorized: first quantize
// the transfer-matrix eigenvalue branches in lambda alone ("stage A"), then
// recover the auxiliary roots from the T-Q relation with lambda frozen
// ("stage B"), and finally polish the pair on the full printed system.

// Monic polynomial coefficients c_0..c_{k-1} from its root list.
std::vector<cplx> coeffs_from_roots(const std::vector<cplx>& roots) {
    std::vector<cplx> c{1.0};
    for (const cplx& r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k > 0; --k)
            c[k] = c[k - 1] - r * c[k];
        c[0] *= -r;
    }
    c.pop_back();  // drop the leading 1
    return c;
}

// Roots of the monic polynomial u^k + sum c_j u^j via its companion matrix.
std::vector<cplx> poly_roots_monic(const std::vector<cplx>& c) {
    const Eigen::Index k = static_cast<Eigen::Index>(c.size());
    if (k == 0) return {};
    Matrix comp = Matrix::Zero(k, k);
    for (Eigen::Index i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < k; ++i)
        comp(i, k - 1) = -c[static_cast<std::size_t>(i)];
    const auto eig = num::eig_general(comp);
    std::vector<cplx> out;
    for (Eigen::Index i = 0; i < k; ++i) out.push_back(eig.values(i));
    return out;
}

struct BranchHit {
    std::vector<cplx> lambda;
    std::vector<cplx> poly;  // eigenvalue branch as a coefficient vector
};

// Branch polynomials for the quantization stage.  The strict extraction
// refuses to anchor when two eigenvalues stay within 1e-6 of each other at
// every reference point, but identical branch polynomials (symmetric or
// accidentally degenerate states) can never separate and are harmless:
// any basis of their shared eigenspace reproduces the same diagonal values.
// Fall back to the best-separating reference and let the per-branch fit
// residual decide which branches are trustworthy.
std::vector<std::vector<cplx>> tolerant_branches(const std::vector<cplx>& lam,
                                                 const BoundaryFields& b) {
    try {
        return xxx::extract_lambda(lam, b).polys;
    } catch (const Error&) {
    }
    const int m = static_cast<int>(lam.size());
    const auto qdim = static_cast<Eigen::Index>(1) << m;
    const int degree = 2 * m + 2;
    const int n_nodes = degree + 2;
    std::vector<cplx> nodes;
    for (int k = 0; k < n_nodes; ++k) {
        const double phi =
            2.0 * std::numbers::pi * static_cast<double>(k) / n_nodes + 0.37;
        nodes.push_back(-0.5 * eta + 1.5 * std::exp(I * phi));
    }
    const cplx refs[] = {cplx(0.83, 0.29),   cplx(-1.21, 0.53),
                         cplx(0.47, -0.81),  cplx(1.63, 0.17),
                         cplx(-0.39, -0.67), cplx(2.11, 0.41)};
    Matrix vectors;
    double best_gap = -1.0;
    for (const cplx& ref : refs) {
        num::GeneralEig eig;
        try {
            eig = num::eig_general(xxx::transfer_matrix(ref, lam, b));
        } catch (const Error&) {
            continue;
        }
        if (eig.possibly_defective) continue;
        double min_gap = 1e300;
        for (Eigen::Index i = 0; i < qdim; ++i)
            for (Eigen::Index k = i + 1; k < qdim; ++k)
                min_gap = std::min(min_gap,
                                   std::abs(eig.values(i) - eig.values(k)));
        if (min_gap > best_gap) {
            best_gap = min_gap;
            vectors = eig.vectors;
        }
    }
    if (best_gap < 0.0) return {};
    const Eigen::PartialPivLU<Matrix> lu(vectors);
    std::vector<std::vector<std::pair<cplx, cplx>>> samples(
        static_cast<std::size_t>(qdim));
    for (const cplx& u : nodes) {
        Matrix tau;
        try {
            tau = xxx::transfer_matrix(u, lam, b);
        } catch (const Error&) {
            return {};
        }
        const Matrix d = lu.solve(tau * vectors);
        for (Eigen::Index r = 0; r < qdim; ++r)
            samples[static_cast<std::size_t>(r)].emplace_back(u, d(r, r));
    }
    std::vector<std::vector<cplx>> polys;
    for (Eigen::Index r = 0; r < qdim; ++r) {
        num::PolyFit fit;
        try {
            fit = num::fit_polynomial(samples[static_cast<std::size_t>(r)],
                                      degree);
        } catch (const Error&) {
            continue;
        }
        double scale = 1.0;
        for (const auto& pr : samples[static_cast<std::size_t>(r)])
            scale = std::max(scale, std::abs(pr.second));
        if (fit.residual < 1e-6 * scale) polys.push_back(std::move(fit.coeffs));
    }
    return polys;
}

// Scaled residuals of the branch quantization conditions
//   Lambda(-l_j) (2l_j-eta)^{2N} = (2l_j+eta)^{2N} pref_j.
// Both sides vanish identically on the sheet l_j = eta (the prefactor
// explicitly, Lambda(-eta) = Lambda(0) through the inhomogeneity product),
// so that factor is divided out; otherwise Newton parks in the hole.
bool branch_residuals(const std::vector<cplx>& lam,
                      const std::vector<cplx>& poly, const BoundaryFields& b,
                      int n_sites, std::vector<cplx>& g,
                      std::vector<double>& sc) {
    const int m = static_cast<int>(lam.size());
    g.resize(static_cast<std::size_t>(m));
    sc.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const cplx lj = lam[static_cast<std::size_t>(j)];
        const cplx defl = lj - eta;
        if (std::abs(defl) < 1e-12) return false;
        const cplx t1 = num::poly_eval(poly, -lj) *
                        std::pow(2.0 * lj - eta, 2 * n_sites) / defl;
        cplx pref = 2.0 * eta * (b.p() + lj * (b.t() + b.xiN())) *
                    (-b.q() + lj * (b.t() + b.xi1()));
        for (int l = 0; l < m; ++l) {
            if (l == j) continue;
            const cplx ll = lam[static_cast<std::size_t>(l)];
            pref *= (lj - ll - eta) * (lj + ll - eta);
        }
        const cplx t2 = std::pow(2.0 * lj + eta, 2 * n_sites) * pref;
        g[static_cast<std::size_t>(j)] = t1 - t2;
        sc[static_cast<std::size_t>(j)] =
            std::max({1.0, std::abs(t1), std::abs(t2)});
    }
    return true;
}

// Index of the extracted branch nearest to the anchor coefficients.
std::size_t pick_branch(const std::vector<std::vector<cplx>>& polys,
                        const std::vector<cplx>& anchor) {
    std::size_t best = 0;
    double bestd = 1e300;
    for (std::size_t k = 0; k < polys.size(); ++k) {
        double dist = 0.0;
        const std::size_t n = std::min(polys[k].size(), anchor.size());
        for (std::size_t c = 0; c < n; ++c)
            dist = std::max(dist, std::abs(polys[k][c] - anchor[c]));
        if (dist < bestd) {
            bestd = dist;
            best = k;
        }
    }
    return best;
}

bool stage_a_guards(const std::vector<cplx>& lam, const BoundaryFields& b) {
    const int m = static_cast<int>(lam.size());
    for (int j = 0; j < m; ++j) {
        const cplx lj = lam[static_cast<std::size_t>(j)];
        if (std::abs(lj) < 1e-6) return false;
        if (std::abs(lj - eta) < 1e-6 || std::abs(lj + eta) < 1e-6)
            return false;
        if (std::abs(b.t() + b.xiN()) > 1e-12 &&
            std::abs(lj + b.p() / (b.t() + b.xiN())) < 1e-6)
            return false;
        if (std::abs(b.t() + b.xi1()) > 1e-12 &&
            std::abs(lj - b.q() / (b.t() + b.xi1())) < 1e-6)
            return false;
        for (int l = j + 1; l < m; ++l) {
            const cplx ll = lam[static_cast<std::size_t>(l)];
            if (std::abs(lj - ll) < 1e-6 || std::abs(lj + ll) < 1e-6)
                return false;
        }
    }
    return true;
}

// Stage A: multi-start damped Newton on the branch quantization conditions,
// chasing the chosen eigenvalue branch by coefficient continuity.
std::vector<BranchHit> quantize_branches(
    int n_sites, int m, const BoundaryFields& b,
    const std::vector<std::vector<cplx>>& lam_seeds) {
    std::vector<BranchHit> hits;
    const std::size_t n_branches = static_cast<std::size_t>(1) << m;
    for (const auto& seed : lam_seeds) {
        const std::vector<std::vector<cplx>> seed_polys =
            tolerant_branches(seed, b);
        if (seed_polys.empty()) continue;
        for (std::size_t branch = 0;
             branch < std::min(n_branches, seed_polys.size()); ++branch) {
            std::vector<cplx> lam = seed;
            std::vector<cplx> anchor = seed_polys[branch];
            std::vector<cplx> g;
            std::vector<double> sc;
            const auto eval = [&](const std::vector<cplx>& pt,
                                  std::vector<cplx>& gg,
                                  std::vector<double>& ss,
                                  bool update_anchor) -> bool {
                const std::vector<std::vector<cplx>> polys =
                    tolerant_branches(pt, b);
                if (polys.empty()) return false;
                const std::size_t k = pick_branch(polys, anchor);
                if (update_anchor) anchor = polys[k];
                return branch_residuals(pt, polys[k], b, n_sites, gg, ss);
            };
            if (!eval(lam, g, sc, true)) continue;
            double merit = scaled_inf_norm(g, sc);
            bool conv = false;
            for (int it = 0; it < 60; ++it) {
                if (merit < 1e-12) {
                    conv = true;
                    break;
                }
                Eigen::MatrixXcd jac(m, m);
                bool jac_ok = true;
                for (int c = 0; c < m && jac_ok; ++c) {
                    const double h =
                        1e-7 *
                        std::max(1.0,
                                 std::abs(lam[static_cast<std::size_t>(c)]));
                    auto pt = lam;
                    pt[static_cast<std::size_t>(c)] += h;
                    std::vector<cplx> g2;
                    std::vector<double> s2;
                    if (!eval(pt, g2, s2, false)) {
                        jac_ok = false;
                        break;
                    }
                    for (int r = 0; r < m; ++r)
                        jac(r, c) = (g2[static_cast<std::size_t>(r)] -
                                     g[static_cast<std::size_t>(r)]) /
                                    h;
                }
                if (!jac_ok) break;
                Eigen::VectorXcd rhs(m);
                for (int r = 0; r < m; ++r)
                    rhs(r) = -g[static_cast<std::size_t>(r)];
                const Eigen::VectorXcd dz =
                    jac.colPivHouseholderQr().solve(rhs);
                double alpha = 1.0;
                bool stepped = false;
                for (int hlv = 0; hlv < 25 && !stepped; ++hlv) {
                    auto trial = lam;
                    for (int r = 0; r < m; ++r)
                        trial[static_cast<std::size_t>(r)] += alpha * dz(r);
                    std::vector<cplx> gt;
                    std::vector<double> st;
                    if (eval(trial, gt, st, false)) {
                        double mt = 0.0;
                        for (std::size_t i = 0; i < gt.size(); ++i)
                            mt = std::max(mt, std::abs(gt[i]) / sc[i]);
                        if (mt < merit * (1.0 - 1e-4 * alpha)) {
                            lam = trial;
                            if (!eval(lam, g, sc, true)) break;
                            merit = scaled_inf_norm(g, sc);
                            stepped = true;
                        }
                    }
                    alpha *= 0.5;
                }
                if (!stepped) break;
            }
            if (!conv || !stage_a_guards(lam, b)) continue;
            cplx e;
            try {
                e = complex_energy(lam, b.t());
            } catch (const PoleEncountered&) {
                continue;
            }
            if (std::abs(e.imag()) > 1e-7 * std::max(1.0, std::abs(e)))
                continue;
            // dedup on the canonical root set and the branch polynomial
            std::vector<cplx> canon = lam;
            for (cplx& l : canon)
                if (l.real() < -1e-10 ||
                    (std::abs(l.real()) <= 1e-10 && l.imag() < 0.0))
                    l = -l;
            std::sort(canon.begin(), canon.end(), lex_less);
            bool dup = false;
            for (const BranchHit& h : hits) {
                std::vector<cplx> hc = h.lambda;
                for (cplx& l : hc)
                    if (l.real() < -1e-10 ||
                        (std::abs(l.real()) <= 1e-10 && l.imag() < 0.0))
                        l = -l;
                std::sort(hc.begin(), hc.end(), lex_less);
                double d = 0.0;
                for (std::size_t i = 0; i < hc.size(); ++i)
                    d = std::max(d, std::abs(hc[i] - canon[i]));
                double dp = 0.0, pmag = 1.0;
                for (std::size_t i = 0;
                     i < std::min(h.poly.size(), anchor.size()); ++i) {
                    dp = std::max(dp, std::abs(h.poly[i] - anchor[i]));
                    pmag = std::max(pmag, std::abs(h.poly[i]));
                }
                if (d < 1e-6 && dp < 1e-5 * pmag) {
                    dup = true;
                    break;
                }
            }
            if (dup) continue;
            hits.push_back(BranchHit{lam, anchor});
        }
    }
    return hits;
}

// Stage B: Newton on the monic coefficients of Q1 in the cleared T-Q
// identity at fixed sample points, with lambda and the branch polynomial
// frozen.  Returns the recovered auxiliary root sets.
std::vector<std::vector<cplx>> recover_aux_sets(
    Case kind, const std::vector<cplx>& lam, const std::vector<cplx>& poly,
    const BoundaryFields& b, int n_aux,
    const std::vector<std::vector<cplx>>& coeff_seeds) {
    const double s = static_cast<double>(b.sgn_dot());
    const double h1n = b.h1_norm(), hNn = b.hN_norm();
    const cplx p = b.p(), q = b.q(), c = b.c_inhom();
    // The identity is polynomial in u of degree 4M+3 (even case) or 4M+5
    // (odd case), so enforcing it on 4M+8 nodes pins it identically; the
    // coefficient solve below is an overdetermined Gauss-Newton.
    const int n_pts = 4 * static_cast<int>(lam.size()) + 8;
    std::vector<cplx> samples;
    for (int k = 0; k < n_pts; ++k) {
        const double phi =
            2.0 * std::numbers::pi * static_cast<double>(k) / n_pts + 0.61;
        const double rad = (k % 2 == 0) ? 0.9 : 1.7;
        samples.push_back(-0.5 * eta + rad * std::exp(I * phi));
    }
    const auto q1 = [&](const std::vector<cplx>& cf, cplx x) {
        cplx v = 1.0;
        for (int k = n_aux - 1; k >= 0; --k)
            v = v * x + cf[static_cast<std::size_t>(k)];
        return v;
    };
    // Residual of the functional identity at one node, with the scale of its
    // largest term.
    const auto terms = [&](const std::vector<cplx>& cf, cplx u,
                           double& scale) -> cplx {
        cplx a_u = 1.0, ab_u = 1.0;
        for (const cplx& l : lam) {
            a_u *= (u - l + eta) * (u + l + eta);
            ab_u *= (u - l) * (u + l);
        }
        const cplx ahat = (p + u * s * hNn) * (q - u * h1n) * a_u;
        const cplx dhat =
            (p - (u + eta) * s * hNn) * (q + (u + eta) * h1n) * ab_u;
        const cplx inh = (kind == Case::even_inhomogeneous)
                             ? u * (u + eta)
                             : u * u * (u + eta) * (u + eta);
        const cplx t_lam = (2.0 * u + eta) * num::poly_eval(poly, u) *
                           q1(cf, u) * q1(cf, -u - eta);
        const cplx t_a =
            (2.0 * u + 2.0 * eta) * ahat * q1(cf, u - eta) * q1(cf, u);
        const cplx t_d =
            2.0 * u * dhat * q1(cf, -u - 2.0 * eta) * q1(cf, -u - eta);
        const cplx t_c = (2.0 * u + eta) * c * inh * a_u * ab_u;
        scale = std::max({1.0, std::abs(t_lam), std::abs(t_a), std::abs(t_d),
                          std::abs(t_c)});
        return t_lam - t_a - t_d - t_c;
    };
    const auto eval = [&](const std::vector<cplx>& cf, std::vector<cplx>& g,
                          std::vector<double>& sc) {
        g.resize(samples.size());
        sc.resize(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k)
            g[k] = terms(cf, samples[k], sc[k]);
    };
    std::vector<std::vector<cplx>> seeds = coeff_seeds;
    if (n_aux == 2) {
        // With two coefficients the identity at a node is a quadratic form
        //   e(c0,c1) = A0 + A1 c0 + A2 c1 + A3 c0^2 + A4 c0 c1 + A5 c1^2,
        // so two nodes give a square quadratic system whose solution set
        // (Bezout: at most four points) contains every genuine coefficient
        // pair.  Enumerate it by resultant and polish on the full node set.
        const auto quad_form = [&](cplx u) {
            const auto at = [&](double c0, double c1) {
                double sink = 0.0;
                return terms({cplx(c0), cplx(c1)}, u, sink);
            };
            std::array<cplx, 6> f{};
            const cplx e00 = at(0, 0), e10 = at(1, 0), em0 = at(-1, 0);
            const cplx e01 = at(0, 1), e0m = at(0, -1), e11 = at(1, 1);
            f[0] = e00;
            f[1] = 0.5 * (e10 - em0);
            f[3] = 0.5 * (e10 + em0) - e00;
            f[2] = 0.5 * (e01 - e0m);
            f[5] = 0.5 * (e01 + e0m) - e00;
            f[4] = e11 - (f[0] + f[1] + f[2] + f[3] + f[5]);
            return f;
        };
        const auto fa = quad_form(samples[0]);
        const auto fb = quad_form(samples[3]);
        const auto sylvester = [&](cplx c1) {
            const cplx a2 = fa[3], a1 = fa[1] + fa[4] * c1;
            const cplx a0 = fa[0] + fa[2] * c1 + fa[5] * c1 * c1;
            const cplx b2 = fb[3], b1 = fb[1] + fb[4] * c1;
            const cplx b0 = fb[0] + fb[2] * c1 + fb[5] * c1 * c1;
            Eigen::Matrix4cd sm;
            sm << a2, a1, a0, 0.0, 0.0, a2, a1, a0, b2, b1, b0, 0.0, 0.0, b2,
                b1, b0;
            return sm.determinant();
        };
        std::vector<std::pair<cplx, cplx>> nodes;
        for (int k = 0; k < 9; ++k) {
            const cplx c1 = 2.3 * std::exp(I * (2.0 * std::numbers::pi * k /
                                                    9.0 +
                                                0.37));
            nodes.emplace_back(c1, sylvester(c1));
        }
        std::vector<cplx> res;
        try {
            res = num::fit_polynomial(nodes, 8).coeffs;
        } catch (const Error&) {
            res.clear();
        }
        double rmag = 0.0;
        for (const cplx& v : res) rmag = std::max(rmag, std::abs(v));
        while (res.size() > 1 && std::abs(res.back()) < 1e-10 * rmag)
            res.pop_back();
        if (rmag > 0.0 && res.size() > 1) {
            const cplx lead = res.back();
            res.pop_back();
            for (cplx& v : res) v /= lead;
            for (const cplx& c1 : poly_roots_monic(res)) {
                for (const auto& f : {fa, fb}) {
                    const cplx a2 = f[3], a1 = f[1] + f[4] * c1;
                    const cplx a0 = f[0] + f[2] * c1 + f[5] * c1 * c1;
                    if (std::abs(a2) > 1e-12 * std::max(1.0, std::abs(a1))) {
                        const cplx disc = std::sqrt(a1 * a1 - 4.0 * a2 * a0);
                        seeds.push_back({(-a1 + disc) / (2.0 * a2), c1});
                        seeds.push_back({(-a1 - disc) / (2.0 * a2), c1});
                    } else if (std::abs(a1) > 1e-14) {
                        seeds.push_back({-a0 / a1, c1});
                    }
                }
            }
        }
    }
    std::vector<std::vector<cplx>> out;
    for (const auto& seed : seeds) {
        std::vector<cplx> cf = seed;
        std::vector<cplx> g;
        std::vector<double> sc;
        eval(cf, g, sc);
        double merit = scaled_inf_norm(g, sc);
        bool conv = false;
        for (int it = 0; it < 80; ++it) {
            if (merit < 1e-10) {
                conv = true;
                break;
            }
            Eigen::MatrixXcd jac(n_pts, n_aux);
            for (int cidx = 0; cidx < n_aux; ++cidx) {
                const double h =
                    1e-7 *
                    std::max(1.0,
                             std::abs(cf[static_cast<std::size_t>(cidx)]));
                auto cf2 = cf;
                cf2[static_cast<std::size_t>(cidx)] += h;
                std::vector<cplx> g2;
                std::vector<double> s2;
                eval(cf2, g2, s2);
                for (int r = 0; r < n_pts; ++r)
                    jac(r, cidx) = (g2[static_cast<std::size_t>(r)] -
                                    g[static_cast<std::size_t>(r)]) /
                                   h;
            }
            Eigen::VectorXcd rhs(n_pts);
            for (int r = 0; r < n_pts; ++r)
                rhs(r) = -g[static_cast<std::size_t>(r)];
            const Eigen::VectorXcd dz = jac.colPivHouseholderQr().solve(rhs);
            double alpha = 1.0;
            bool stepped = false;
            for (int hlv = 0; hlv < 30 && !stepped; ++hlv) {
                auto trial = cf;
                for (int r = 0; r < n_aux; ++r)
                    trial[static_cast<std::size_t>(r)] += alpha * dz(r);
                std::vector<cplx> gt;
                std::vector<double> st;
                eval(trial, gt, st);
                double mt = 0.0;
                for (std::size_t i = 0; i < gt.size(); ++i)
                    mt = std::max(mt, std::abs(gt[i]) / sc[i]);
                if (mt < merit * (1.0 - 1e-4 * alpha)) {
                    cf = trial;
                    eval(cf, g, sc);
                    merit = scaled_inf_norm(g, sc);
                    stepped = true;
                }
                alpha *= 0.5;
            }
            if (!stepped) break;
        }
        if (!conv) continue;
        std::vector<cplx> mu;
        try {
            mu = poly_roots_monic(cf);
        } catch (const Error&) {
            continue;
        }
        std::sort(mu.begin(), mu.end(), lex_less);
        bool dup = false;
        for (const auto& prev : out) {
            double d = 0.0;
            for (std::size_t i = 0; i < mu.size(); ++i)
                d = std::max(d, std::abs(mu[i] - prev[i]));
            if (d < 1e-7) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(mu));
    }
    return out;
}

// Collinear-case Q recovery.  Without the inhomogeneous term the functional
// identity (2u+eta) Lambda Q = (2u+2eta) ahat Q(u-eta) + 2u dhat Q(u+eta)
// is linear in the monic coefficients of Q (degree 2*m_pairs), so a single
// overdetermined least-squares solve either produces the root pairs or rules
// this pair count out.
std::vector<std::vector<cplx>> recover_parallel_q(const std::vector<cplx>& lam,
                                                  const std::vector<cplx>& poly,
                                                  const BoundaryFields& b,
                                                  int m_pairs) {
    const double s = static_cast<double>(b.sgn_dot());
    const double h1n = b.h1_norm(), hNn = b.hN_norm();
    const cplx p = b.p(), q = b.q();
    const int m = static_cast<int>(lam.size());
    const int deg = 2 * m_pairs;
    const int n_pts = 2 * m + deg + 8;
    const auto ahat = [&](cplx u) {
        cplx a_u = 1.0;
        for (const cplx& l : lam) a_u *= (u - l + eta) * (u + l + eta);
        return (p + u * s * hNn) * (q - u * h1n) * a_u;
    };
    const auto dhat = [&](cplx u) {
        cplx ab_u = 1.0;
        for (const cplx& l : lam) ab_u *= (u - l) * (u + l);
        return (p - (u + eta) * s * hNn) * (q + (u + eta) * h1n) * ab_u;
    };
    Eigen::MatrixXcd a(n_pts, deg == 0 ? 1 : deg);
    Eigen::VectorXcd rhs(n_pts);
    for (int k = 0; k < n_pts; ++k) {
        const cplx u =
            -0.5 * eta +
            ((k % 2 == 0) ? 0.9 : 1.8) *
                std::exp(I * (2.0 * std::numbers::pi * k / n_pts + 0.29));
        const cplx w0 = (2.0 * u + eta) * num::poly_eval(poly, u);
        const cplx wa = (2.0 * u + 2.0 * eta) * ahat(u);
        const cplx wd = 2.0 * u * dhat(u);
        const double sc = std::max({1.0, std::abs(w0), std::abs(wa),
                                    std::abs(wd)});
        cplx pu = 1.0, pa = 1.0, pd = 1.0;  // powers of u, u-eta, u+eta
        for (int j = 0; j < deg; ++j) {
            a(k, j) = (w0 * pu - wa * pa - wd * pd) / sc;
            pu *= u;
            pa *= u - eta;
            pd *= u + eta;
        }
        // monic leading power
        cplx lead = w0;
        {
            cplx x = 1.0, y = 1.0, z = 1.0;
            for (int j = 0; j < deg; ++j) {
                x *= u;
                y *= u - eta;
                z *= u + eta;
            }
            lead = w0 * x - wa * y - wd * z;
        }
        rhs(k) = -lead / sc;
        if (deg == 0) a(k, 0) = 0.0;
    }
    if (deg == 0) {
        // Q = 1: just check the identity itself.
        double worst = 0.0;
        for (int k = 0; k < n_pts; ++k)
            worst = std::max(worst, std::abs(rhs(k)));
        if (worst < 1e-9) return {{}};
        return {};
    }
    const Eigen::VectorXcd cf = a.colPivHouseholderQr().solve(rhs);
    double worst = 0.0;
    for (int k = 0; k < n_pts; ++k) {
        cplx r = -rhs(k);
        for (int j = 0; j < deg; ++j) r += a(k, j) * cf(j);
        worst = std::max(worst, std::abs(r));
    }
    if (worst > 1e-9) return {};
    std::vector<cplx> coeffs;
    for (int j = 0; j < deg; ++j) coeffs.push_back(cf(j));
    std::vector<cplx> roots;
    try {
        roots = poly_roots_monic(coeffs);
    } catch (const Error&) {
        return {};
    }
    // Roots come in orbits {gamma, -gamma-eta}; keep one representative per
    // orbit (the one on the upper side of the symmetry point -eta/2).
    std::vector<cplx> gam;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        std::size_t partner = i;
        double bestd = 1e300;
        for (std::size_t l = 0; l < roots.size(); ++l) {
            if (l == i || used[l]) continue;
            const double d = std::abs(roots[l] - (-roots[i] - eta));
            if (d < bestd) {
                bestd = d;
                partner = l;
            }
        }
        if (partner == i || bestd > 1e-6) return {};  // symmetry violated
        used[i] = used[partner] = true;
        const cplx cand = (roots[i].imag() >= roots[partner].imag())
                              ? roots[i]
                              : roots[partner];
        gam.push_back(cand);
    }
    std::sort(gam.begin(), gam.end(), lex_less);
    return {gam};
}

}  // namespace

std::vector<double> bae_residual(const BetheRoots& roots,
                                 const BoundaryFields& b, int n_sites) {
    const int m = static_cast<int>(roots.lambda.size());
    const int a = static_cast<int>(roots.aux.size());
    if (roots.kind == Case::even_inhomogeneous && (m % 2 != 0 || a != m))
        throw Error("bae_residual: even case needs even M with M aux roots");
    if (roots.kind == Case::odd_inhomogeneous && (m % 2 != 1 || a != m + 1))
        throw Error("bae_residual: odd case needs odd M with M+1 aux roots");
    if (roots.kind == Case::parallel && a > m)
        throw Error("bae_residual: parallel case needs m <= M");
    System sys{roots.kind, n_sites, m, a, &b};
    std::vector<cplx> z = roots.lambda;
    z.insert(z.end(), roots.aux.begin(), roots.aux.end());
    std::vector<cplx> f;
    std::vector<double> sc;
    sys.eval(z, f, sc);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::abs(f[i]) / sc[i];
    return out;
}

std::vector<BetheRoots> solve_bae(Case kind, int n_sites, int m_electrons,
                                  const BoundaryFields& b,
                                  const SolveOptions& opts,
                                  SolveStats* stats) {
    if (m_electrons < 0 || n_sites < 1)
        throw Error("solve_bae: bad sector sizes");
    if (kind == Case::even_inhomogeneous && m_electrons % 2 != 0)
        throw Error("solve_bae: even case requires even M");
    if (kind == Case::odd_inhomogeneous && m_electrons % 2 != 1)
        throw Error("solve_bae: odd case requires odd M");
    if (kind == Case::parallel && !b.is_collinear(1e-8))
        throw Error("solve_bae: parallel case requires collinear fields");

    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto box = [&](double re_lo, double re_hi, double im_lo,
                         double im_hi) {
        return cplx(re_lo + (re_hi - re_lo) * u01(rng),
                    im_lo + (im_hi - im_lo) * u01(rng));
    };
    const auto jitter = [&](double amp) {
        return cplx(amp * (2.0 * u01(rng) - 1.0),
                    amp * (2.0 * u01(rng) - 1.0));
    };
    const int m = m_electrons;

    // Auxiliary-root draw used for both seed families.  The two pinned
    // candidates sit near the boundary zeros of the auxiliary equations.
    const bool have_norms = b.h1_norm() > 1e-12 && b.hN_norm() > 1e-12;
    const bool string_pz = std::abs(b.p()) < 1e-12;
    const bool string_qz = std::abs(b.q()) < 1e-12;
    const bool string_half =
        (!string_pz &&
         std::abs(b.p() - 0.5 * eta * static_cast<double>(b.sgn_dot()) *
                              b.hN_norm()) < 1e-12) ||
        (!string_qz && std::abs(b.q() + 0.5 * eta * b.h1_norm()) < 1e-12);
    const auto draw_aux = [&](int count) {
        std::vector<cplx> out;
        for (int i = 0; i < count; ++i) {
            const double pre = u01(rng);
            if ((string_pz || string_qz) && pre < 0.2) {
                out.push_back(-eta + jitter(0.02));  // boundary string
                continue;
            }
            if (string_half && pre < 0.4) {
                out.push_back(-0.5 * eta + jitter(0.02));  // crossing string
                continue;
            }
            const double roll = u01(rng);
            if (kind != Case::parallel && have_norms && roll < 0.15)
                out.push_back(b.p() / (b.sgn_dot() * b.hN_norm()) - eta +
                              jitter(0.05));
            else if (kind != Case::parallel && have_norms && roll < 0.3)
                out.push_back(-b.q() / b.h1_norm() - eta + jitter(0.05));
            else
                out.push_back(box(-2.0, 2.0, -2.0, 1.0));
        }
        return out;
    };
    const auto draw_lambda = [&](int count) {
        std::vector<cplx> out;
        for (int i = 0; i < count; ++i) {
            if (u01(rng) < 0.3)
                out.push_back(cplx(0.0, (u01(rng) < 0.5 ? 1.0 : -1.0) *
                                            (0.2 + 2.8 * u01(rng))) +
                              jitter(0.02));
            else
                out.push_back(box(-2.5, 2.5, -1.0, 1.0));
        }
        return out;
    };

    struct Job {
        int n_aux;
        std::vector<Candidate> starts;
    };
    std::vector<Job> jobs;
    if (kind == Case::parallel) {
        const int m_lo = (opts.parallel_m >= 0) ? opts.parallel_m : 0;
        const int m_hi = (opts.parallel_m >= 0) ? opts.parallel_m : m;
        for (int mp = m_lo; mp <= m_hi; ++mp)
            jobs.push_back(Job{mp, {}});
    } else {
        jobs.push_back(Job{aux_count(kind, m), {}});
    }

    const std::vector<double> free_l = free_chain_lambdas(n_sites);
    for (Job& job : jobs) {
        // (i) free-chain momentum combinations.
        if (opts.free_chain_seeds && m > 0) {
            std::vector<int> comb(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) comb[static_cast<std::size_t>(i)] = i;
            int combos = 0;
            while (combos < 200) {
                for (int rep = 0; rep < opts.aux_starts; ++rep) {
                    Candidate c;
                    for (int i = 0; i < m; ++i)
                        c.z.push_back(
                            free_l[static_cast<std::size_t>(
                                comb[static_cast<std::size_t>(i)])] +
                            jitter(0.03));
                    for (const cplx& a : draw_aux(job.n_aux))
                        c.z.push_back(a);
                    job.starts.push_back(std::move(c));
                }
                ++combos;
                // next combination of size m out of n_sites
                int i = m - 1;
                while (i >= 0 &&
                       comb[static_cast<std::size_t>(i)] == n_sites - m + i)
                    --i;
                if (i < 0) break;
                ++comb[static_cast<std::size_t>(i)];
                for (int l = i + 1; l < m; ++l)
                    comb[static_cast<std::size_t>(l)] =
                        comb[static_cast<std::size_t>(l - 1)] + 1;
            }
        }
        // (ii) random boxes.
        for (int i = 0; i < opts.random_starts; ++i) {
            Candidate c;
            for (const cplx& l : draw_lambda(m)) c.z.push_back(l);
            for (const cplx& a : draw_aux(job.n_aux)) c.z.push_back(a);
            job.starts.push_back(std::move(c));
        }
        // (iii) user seeds with matching shape.
        for (const BetheRoots& s : opts.user_seeds) {
            if (static_cast<int>(s.lambda.size()) != m ||
                static_cast<int>(s.aux.size()) != job.n_aux)
                continue;
            Candidate c;
            c.z = s.lambda;
            c.z.insert(c.z.end(), s.aux.begin(), s.aux.end());
            job.starts.push_back(std::move(c));
        }
    }

    // Collinear companion configuration shared by the continuation
    // streams: same field norms along +z (hN carries the dot-product sign),
    // same xi's, hence still integrable.
    const double sdot = static_cast<double>(b.sgn_dot());
    const bool tiltable = kind != Case::parallel && !b.is_collinear() &&
                          m > 0 && have_norms;
    std::vector<BetheRoots> collinear;
    if (tiltable && (opts.homotopy_seeds || opts.operator_seeds)) {
        const BoundaryFields b0(b.t(), b.xi1(), b.xiN(),
                                Vec3{0.0, 0.0, b.h1_norm()},
                                Vec3{0.0, 0.0, sdot * b.hN_norm()});
        SolveOptions par_opts = opts;
        par_opts.homotopy_seeds = false;
        par_opts.random_starts = std::max(60, opts.random_starts / 4);
        par_opts.user_seeds.clear();
        try {
            collinear = solve_bae(Case::parallel, n_sites, m, b0, par_opts);
        } catch (const Error&) {
        }
    }
    // Field family interpolating the companion (theta = 0) into the target
    // (theta = 1); norms and xi's are held fixed, so every point on the path
    // is integrable.
    const auto tilt_fields = [&](double theta) -> BoundaryFields {
        if (theta >= 1.0) return b;
        Vec3 dir1{0, 0, 1}, dirn_s{0, 0, 1};
        for (int i = 0; i < 3; ++i) {
            dir1[static_cast<std::size_t>(i)] =
                b.h1()[static_cast<std::size_t>(i)] / b.h1_norm();
            dirn_s[static_cast<std::size_t>(i)] =
                sdot * b.hN()[static_cast<std::size_t>(i)] / b.hN_norm();
        }
        const Vec3 d1 = slerp_from_z(dir1, theta);
        Vec3 dn = slerp_from_z(dirn_s, theta);
        if (sdot < 0)
            for (double& x : dn) x = -x;
        Vec3 h1t, hnt;
        for (int i = 0; i < 3; ++i) {
            h1t[static_cast<std::size_t>(i)] =
                b.h1_norm() * d1[static_cast<std::size_t>(i)];
            hnt[static_cast<std::size_t>(i)] =
                b.hN_norm() * dn[static_cast<std::size_t>(i)];
        }
        return BoundaryFields(b.t(), b.xi1(), b.xiN(), h1t, hnt);
    };

    // (iv) full-system continuation from the collinear companion.
    if (tiltable && opts.homotopy_seeds) {
        const double s = sdot;
        const int n_aux = aux_count(kind, m);
        std::vector<Candidate> live;
        for (const BetheRoots& sol : collinear) {
            std::vector<cplx> pool;
            for (const cplx& g : sol.aux) {
                pool.push_back(g);
                pool.push_back(-g - eta);
            }
            pool.push_back(b.p() / (s * b.hN_norm()) - eta);
            pool.push_back(-b.q() / b.h1_norm() - eta);
            for (double phi : {0.7, 2.3, 3.9, 5.5})
                pool.push_back(6.0 * std::exp(I * phi));
            for (int rep = 0; rep < 2 * opts.aux_starts; ++rep) {
                Candidate c;
                c.z = sol.lambda;
                for (int i = 0; i < n_aux; ++i) {
                    const std::size_t pick = static_cast<std::size_t>(
                        u01(rng) * static_cast<double>(pool.size()));
                    c.z.push_back(pool[std::min(pick, pool.size() - 1)] +
                                  jitter(0.05));
                }
                live.push_back(std::move(c));
            }
        }
        for (double theta : {0.25, 0.55, 1.0}) {
            const bool last = theta >= 1.0;
            const BoundaryFields bt = tilt_fields(theta);
            const System sys{kind, n_sites, m, n_aux, &bt};
            std::vector<Candidate> next;
            for (Candidate& c : live) {
                double res = 0.0;
                if (newton(sys, c.z, res, opts)) next.push_back(std::move(c));
            }
            live.swap(next);
            if (last)
                for (Candidate& c : live) jobs.front().starts.push_back(c);
        }
    }

    // (v) operator-assisted seeds: quantize the transfer-matrix eigenvalue
    // branches in lambda alone, then rebuild the auxiliary content per case.
    if (opts.operator_seeds && m > 0 && m <= 5) {
        std::vector<std::vector<cplx>> lam_seeds;
        if (m <= n_sites) {
            std::vector<int> comb(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) comb[static_cast<std::size_t>(i)] = i;
            int combos = 0;
            while (combos < 40) {
                std::vector<cplx> sd;
                for (int i = 0; i < m; ++i)
                    sd.push_back(free_l[static_cast<std::size_t>(
                                     comb[static_cast<std::size_t>(i)])] +
                                 jitter(0.03));
                lam_seeds.push_back(std::move(sd));
                ++combos;
                int i = m - 1;
                while (i >= 0 &&
                       comb[static_cast<std::size_t>(i)] == n_sites - m + i)
                    --i;
                if (i < 0) break;
                ++comb[static_cast<std::size_t>(i)];
                for (int l = i + 1; l < m; ++l)
                    comb[static_cast<std::size_t>(l)] =
                        comb[static_cast<std::size_t>(l - 1)] + 1;
            }
        }
        for (const auto& sd : opts.operator_lambda_seeds)
            if (static_cast<int>(sd.size()) == m) lam_seeds.push_back(sd);
        for (int r = 0; r < opts.operator_lambda_starts; ++r)
            lam_seeds.push_back(draw_lambda(m));
        if (m % 2 == 0)
            for (int r = 0; r < 60; ++r) {
                std::vector<cplx> sd;
                for (int i = 0; i + 1 < m; i += 2) {
                    const cplx z = box(0.1, 1.3, 0.15, 0.9);
                    sd.push_back(z);
                    sd.push_back(std::conj(z));
                }
                lam_seeds.push_back(std::move(sd));
            }
        if (have_norms) {
            // Zeros of the boundary factors in the momentum equations sit on
            // the imaginary axis; low-lying states park a root near them.
            std::vector<cplx> pins{b.p() / (b.sgn_dot() * b.hN_norm()),
                                   -b.q() / b.h1_norm()};
            pins.push_back(-pins[0]);
            pins.push_back(-pins[1]);
            for (const cplx& base : pins)
                for (int r = 0; r < 4; ++r) {
                    std::vector<cplx> sd{base + jitter(0.05)};
                    while (static_cast<int>(sd.size()) < m) {
                        if (r % 2 == 0 && !free_l.empty())
                            sd.push_back(
                                free_l[static_cast<std::size_t>(
                                    static_cast<int>(sd.size() * 7 + r) %
                                    static_cast<int>(free_l.size()))] +
                                jitter(0.05));
                        else
                            sd.push_back(box(0.1, 1.6, -0.4, 0.8));
                    }
                    lam_seeds.push_back(std::move(sd));
                }
            if (m >= 2) {
                std::vector<cplx> sd{pins[0] + jitter(0.03),
                                     pins[1] + jitter(0.03)};
                while (static_cast<int>(sd.size()) < m)
                    sd.push_back(box(0.1, 1.6, -0.4, 0.8));
                lam_seeds.push_back(std::move(sd));
            }
        }
        auto hits = quantize_branches(n_sites, m, b, lam_seeds);
        // March the collinear lambda sets through the field tilt, branch
        // quantization only.  The auxiliary content degenerates near the
        // collinear point, so it is deliberately left out here and recovered
        // from scratch at full tilt.
        if (kind != Case::parallel && tiltable && !collinear.empty()) {
            std::vector<std::vector<cplx>> track;
            for (const BetheRoots& sol : collinear)
                if (static_cast<int>(sol.lambda.size()) == m)
                    track.push_back(sol.lambda);
            for (double theta : {0.2, 0.4, 0.6, 0.8, 1.0}) {
                if (track.empty()) break;
                const auto step =
                    quantize_branches(n_sites, m, tilt_fields(theta), track);
                track.clear();
                for (const BranchHit& h : step) track.push_back(h.lambda);
                if (debug_enabled())
                    std::fprintf(stderr,
                                 "[odba] march theta=%.2f: %zu sets\n", theta,
                                 step.size());
                if (theta < 1.0) continue;
                const auto canon_set = [](std::vector<cplx> v) {
                    for (cplx& l : v)
                        if (l.real() < -1e-10 ||
                            (std::abs(l.real()) <= 1e-10 && l.imag() < 0.0))
                            l = -l;
                    std::sort(v.begin(), v.end(), lex_less);
                    return v;
                };
                for (const BranchHit& h : step) {
                    const auto hc = canon_set(h.lambda);
                    bool dup = false;
                    for (const BranchHit& ex : hits) {
                        const auto ec = canon_set(ex.lambda);
                        double d = 0.0;
                        for (std::size_t i = 0; i < ec.size(); ++i)
                            d = std::max(d, std::abs(ec[i] - hc[i]));
                        if (d < 1e-6) {
                            dup = true;
                            break;
                        }
                    }
                    if (!dup) hits.push_back(h);
                }
            }
        }
        if (debug_enabled()) {
            std::fprintf(stderr, "[odba] stage A: %zu lambda seeds -> %zu hits\n",
                         lam_seeds.size(), hits.size());
            for (const BranchHit& hit : hits) {
                cplx e = 0.0;
                try {
                    e = complex_energy(hit.lambda, b.t());
                } catch (const PoleEncountered&) {
                }
                std::fprintf(stderr, "[odba]   hit E=(%.6f,%.1e) lambda:",
                             e.real(), e.imag());
                for (const cplx& l : hit.lambda)
                    std::fprintf(stderr, " (%.4f,%.4f)", l.real(), l.imag());
                std::fprintf(stderr, "\n");
            }
        }
        if (kind == Case::parallel) {
            for (const BranchHit& hit : hits)
                for (Job& job : jobs) {
                    const auto gam_sets = recover_parallel_q(
                        hit.lambda, hit.poly, b, job.n_aux);
                    if (debug_enabled() && !gam_sets.empty())
                        std::fprintf(stderr,
                                     "[odba] stage B (pairs=%d): %zu sets\n",
                                     job.n_aux, gam_sets.size());
                    for (const auto& gam : gam_sets) {
                        Candidate cnd;
                        cnd.z = hit.lambda;
                        cnd.z.insert(cnd.z.end(), gam.begin(), gam.end());
                        job.starts.push_back(std::move(cnd));
                    }
                }
        } else {
            const int n_aux = aux_count(kind, m);
            for (const BranchHit& hit : hits) {
                std::vector<std::vector<cplx>> coeff_seeds;
                coeff_seeds.emplace_back(static_cast<std::size_t>(n_aux),
                                         0.0);
                if (have_norms && n_aux >= 2) {
                    std::vector<cplx> z;
                    z.push_back(b.p() / (b.sgn_dot() * b.hN_norm()) - eta);
                    z.push_back(-b.q() / b.h1_norm() - eta);
                    while (static_cast<int>(z.size()) < n_aux)
                        z.push_back(box(-1.0, 1.0, -1.0, 0.5));
                    coeff_seeds.push_back(coeffs_from_roots(z));
                }
                for (int r = 0; r < 30; ++r)
                    coeff_seeds.push_back(coeffs_from_roots(draw_aux(n_aux)));
                const auto aux_sets = recover_aux_sets(
                    kind, hit.lambda, hit.poly, b, n_aux, coeff_seeds);
                if (debug_enabled()) {
                    cplx e = 0.0;
                    try {
                        e = complex_energy(hit.lambda, b.t());
                    } catch (const PoleEncountered&) {
                    }
                    std::fprintf(stderr,
                                 "[odba] stage B: hit E=%.6f -> %zu aux sets\n",
                                 e.real(), aux_sets.size());
                }
                for (const auto& mu : aux_sets) {
                    Candidate cnd;
                    cnd.z = hit.lambda;
                    cnd.z.insert(cnd.z.end(), mu.begin(), mu.end());
                    jobs.front().starts.push_back(std::move(cnd));
                }
                for (int r = 0; r < opts.aux_starts; ++r) {
                    Candidate cnd;
                    cnd.z = hit.lambda;
                    for (const cplx& a : draw_aux(n_aux)) cnd.z.push_back(a);
                    jobs.front().starts.push_back(std::move(cnd));
                }
            }
        }
    }

    std::vector<BetheRoots> found;
    std::vector<double> energies;
    for (Job& job : jobs) {
        const System sys{kind, n_sites, m, job.n_aux, &b};
        for (Candidate& c : job.starts) {
            ++st.attempts;
            double res = 0.0;
            if (!newton(sys, c.z, res, opts)) continue;
            ++st.converged;
            if (sys.guard_distance(c.z) < 1e-6) {
                ++st.rejected_guard;
                continue;
            }
            BetheRoots r;
            r.kind = kind;
            r.lambda.assign(c.z.begin(), c.z.begin() + m);
            r.aux.assign(c.z.begin() + m, c.z.end());
            r.residual = res;
            bool ok = true;
            for (int i = 0; i < m && ok; ++i) {
                if (std::abs(r.lambda[static_cast<std::size_t>(i)]) < 1e-6)
                    ok = false;
                for (int l = i + 1; l < m && ok; ++l) {
                    const cplx li = r.lambda[static_cast<std::size_t>(i)];
                    const cplx ll = r.lambda[static_cast<std::size_t>(l)];
                    if (std::abs(li - ll) < 1e-6 || std::abs(li + ll) < 1e-6)
                        ok = false;
                }
            }
            if (!ok) {
                ++st.rejected_structure;
                continue;
            }
            cplx e;
            try {
                e = complex_energy(r.lambda, b.t());
            } catch (const PoleEncountered&) {
                ++st.rejected_structure;
                continue;
            }
            if (std::abs(e.imag()) > 1e-8 * std::max(1.0, std::abs(e))) {
                ++st.rejected_energy;
                continue;
            }
            canonicalize(r);
            bool dup = false;
            for (const BetheRoots& prev : found)
                if (same_roots(prev, r, 1e-6)) {
                    dup = true;
                    break;
                }
            if (dup) {
                ++st.duplicates;
                continue;
            }
            if (!tq_structure_ok(r, b, n_sites)) {
                ++st.rejected_structure;
                if (debug_enabled())
                    std::fprintf(stderr,
                                 "[odba] tq-structure reject E=%.8f\n",
                                 e.real());
                continue;
            }
            if (debug_enabled())
                std::fprintf(stderr, "[odba] accept E=%.8f res=%.2e\n",
                             e.real(), res);
            found.push_back(std::move(r));
            energies.push_back(e.real());
        }
    }
    // Zero-momentum bound pairs: when the leading coefficient of the cleared
    // momentum equation cancels, a state may carry a (lambda, aux) pair at
    // infinity on top of any solution of the reduced sector.  The pair drops
    // out of every finite equation, so the reduced solutions lift verbatim
    // with the energy shifted by -2t per pair.
    if (kind == Case::parallel && m >= 1 && opts.infinite_lift) {
        const double lead =
            std::abs((b.t() + b.xi1()) * (b.t() + b.xiN()) -
                     static_cast<double>(b.sgn_dot()) * b.h1_norm() *
                         b.hN_norm());
        if (lead < 1e-10 * std::max(1.0, b.h1_norm() * b.hN_norm())) {
            SolveOptions ropts = opts;
            ropts.parallel_m = -1;
            const auto reduced =
                solve_bae(kind, n_sites, m - 1, b, ropts, nullptr);
            for (const BetheRoots& r0 : reduced) {
                // Two pairs at infinity would be coincident roots (the same
                // zero-momentum mode twice); excluded like any coincident
                // lambda pair.
                if (r0.n_infinite >= 1) continue;
                BetheRoots r = r0;
                ++r.n_infinite;
                if (opts.parallel_m >= 0 &&
                    static_cast<int>(r.aux.size()) + r.n_infinite !=
                        opts.parallel_m)
                    continue;
                bool dup = false;
                for (const BetheRoots& prev : found)
                    if (same_roots(prev, r, 1e-6)) {
                        dup = true;
                        break;
                    }
                if (dup) continue;
                double e;
                try {
                    e = energy_from_roots(r, b.t());
                } catch (const Error&) {
                    continue;
                }
                if (debug_enabled())
                    std::fprintf(stderr,
                                 "[odba] lift E=%.8f (%d infinite)\n", e,
                                 r.n_infinite);
                ++st.lifted;
                found.push_back(std::move(r));
                energies.push_back(e);
            }
        }
    }
    std::vector<std::size_t> order(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t l) {
        if (energies[i] != energies[l]) return energies[i] < energies[l];
        for (std::size_t r = 0;
             r < found[i].lambda.size() && r < found[l].lambda.size(); ++r)
            if (std::abs(found[i].lambda[r] - found[l].lambda[r]) > 1e-12)
                return lex_less(found[i].lambda[r], found[l].lambda[r]);
        return found[i].aux.size() < found[l].aux.size();
    });
    std::vector<BetheRoots> out;
    out.reserve(found.size());
    for (std::size_t i : order) out.push_back(std::move(found[i]));
    if (m == 0 && out.empty())
        out.push_back(BetheRoots{kind, {}, {}, 0, 0.0});
    return out;
}

double energy_from_roots(const BetheRoots& roots, double t) {
    const cplx e = complex_energy(roots.lambda, t);
    if (std::abs(e.imag()) > 1e-8 * std::max(1.0, std::abs(e)))
        throw ComplexEnergy("energy has imaginary part " +
                            std::to_string(e.imag()));
    return e.real() - 2.0 * t * roots.n_infinite;
}

bool VerificationReport::pass(double tol) const {
    if (bae_max >= 1e-9 || tq_fit >= tol || quantization >= tol) return false;
    if (lambda_props.crossing >= tol || lambda_props.at_zero >= tol ||
        lambda_props.leading >= tol || lambda_props.functional >= tol)
        return false;
    if (tq_vs_operator >= 0.0 && tq_vs_operator >= tol) return false;
    if (ed_checked && ed_distance >= 1e-8) return false;
    return true;
}

VerificationReport verify_solution(const BetheRoots& roots,
                                   const BoundaryFields& b, int n_sites,
                                   const RealVector* ed_levels) {
    VerificationReport rep;
    const int m = static_cast<int>(roots.lambda.size());
    for (double r : bae_residual(roots, b, n_sites))
        rep.bae_max = std::max(rep.bae_max, r);

    // Polynomiality of the T-Q expression.
    const int degree = 2 * m + 2;
    const int n_nodes = 2 * m + 6;
    std::vector<std::pair<cplx, cplx>> pts;
    double vmax = 1.0;
    for (int k = 0; k < n_nodes; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / n_nodes + 0.23;
        const cplx u = -0.5 * eta + 1.3 * std::exp(I * phi);
        const cplx v = tq_lambda(u, roots, b);
        vmax = std::max(vmax, std::abs(v));
        pts.emplace_back(u, v);
    }
    auto fit = num::fit_polynomial(pts, degree);
    rep.tq_fit = fit.residual / vmax;
    rep.lambda_props =
        xxx::lambda_property_residuals(fit.coeffs, roots.lambda, b);

    // Quantization condition through the eigenvalue at -lambda_j.
    for (int j = 0; j < m; ++j) {
        const cplx lj = roots.lambda[static_cast<std::size_t>(j)];
        cplx rhs = std::pow((2.0 * lj + eta) / (2.0 * lj - eta),
                            2 * n_sites) *
                   2.0 * eta * (lj - eta) *
                   (b.p() + lj * (b.t() + b.xiN())) *
                   (-b.q() + lj * (b.t() + b.xi1()));
        for (int l = 0; l < m; ++l) {
            if (l == j) continue;
            const cplx ll = roots.lambda[static_cast<std::size_t>(l)];
            rhs *= (lj - ll - eta) * (lj + ll - eta);
        }
        const cplx lhs = tq_lambda(-lj, roots, b);
        rep.quantization = std::max(
            rep.quantization, std::abs(lhs - rhs) / std::max({1.0,
                                                              std::abs(lhs),
                                                              std::abs(rhs)}));
    }

    // Agreement with an operator-extracted eigenvalue polynomial.
    if (m <= 3) {
        try {
            const auto ext = xxx::extract_lambda(roots.lambda, b);
            double best = 1e300;
            for (const auto& poly : ext.polys) {
                double dist = 0.0, scale = 1.0;
                for (int k = 0; k <= degree; ++k) {
                    const cplx ck = (k < static_cast<int>(fit.coeffs.size()))
                                        ? fit.coeffs[static_cast<std::size_t>(
                                              k)]
                                        : cplx(0.0);
                    const cplx ek =
                        (k < static_cast<int>(poly.size()))
                            ? poly[static_cast<std::size_t>(k)]
                            : cplx(0.0);
                    dist = std::max(dist, std::abs(ck - ek));
                    scale = std::max({scale, std::abs(ck), std::abs(ek)});
                }
                best = std::min(best, dist / scale);
            }
            rep.tq_vs_operator = best;
        } catch (const Error&) {
            rep.tq_vs_operator = -1.0;
        }
    }

    const cplx e = complex_energy(roots.lambda, b.t());
    rep.energy = e.real();
    rep.energy_imag = e.imag();
    if (ed_levels) {
        rep.ed_checked = true;
        double best = 1e300;
        for (Eigen::Index i = 0; i < ed_levels->size(); ++i)
            best = std::min(best, std::abs(rep.energy - (*ed_levels)(i)));
        rep.ed_distance = best;
    }
    return rep;
}

}  // namespace tj::odba
