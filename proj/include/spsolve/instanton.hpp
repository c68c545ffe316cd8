#pragma once

// Truncated concentration family u_eps(r) = cutoff(r) / (eps + r^2)^{1/2},
// its three norm asymptotics
//   ||grad u_eps||^2 = S K / sqrt(eps) + omega * int |cutoff'|^2 + O(sqrt(eps))
//   ||u_eps||_6^2    = K / sqrt(eps) + O(sqrt(eps))
//   ||u_eps||_2^2    = omega * int cutoff^2 + O(sqrt(eps))
// with K = (pi^2/4)^{1/3}, the measured Sobolev constant S, the sign
// coefficient A(cutoff) whose root in lambda sits at 3 lambda1 / 10, the
// fibering value t_eps and the sup J estimate that places the mountain-pass
// level below the compactness threshold (2/5) sqrt(S^3/q).
//
// Norms of the family are evaluated with the analytic radial derivative and
// Simpson quadrature (fourth order), independent of the lumped operator
// algebra; the discrete Sobolev constant S_disc comes from a direct
// minimization of the lumped quotient on the grid and is the constant every
// discrete inequality chain is guaranteed with.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "core.hpp"
#include "energy.hpp"

namespace spsolve {

/// Admissible cutoff: phi(0) = 1, phi'(0) = 0, phi(R) = 0.
struct Cutoff {
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::string descriptor;
};

inline Cutoff default_cutoff(double R) {
    if (!(R > 0.0)) throw config_error("default_cutoff: R must be > 0");
    const double k = pi / (2.0 * R);
    Cutoff c;
    c.phi = [k](double r) { return std::cos(k * r); };
    c.dphi = [k](double r) { return -k * std::sin(k * r); };
    c.descriptor = "cos(pi r / 2R)";
    return c;
}

/// Smallest concentration the mesh resolves: ten nodes across the core.
inline double instanton_eps_min(const RadialGrid& grid) {
    const double t = 10.0 * grid.h;
    return t * t;
}

inline RadialField instanton_field(double eps, const Cutoff& cutoff, const RadialGrid& grid) {
    const double eps_min = instanton_eps_min(grid);
    if (!(eps >= eps_min))
        throw config_error("instanton_field: eps = " + std::to_string(eps) +
                           " below the resolution guard eps_min = " + std::to_string(eps_min));
    RadialField u(grid);
    for (int i = 0; i < grid.M; ++i)
        u[i] = cutoff.phi(grid.r[i]) / std::sqrt(eps + grid.r[i] * grid.r[i]);
    u[grid.M] = 0.0;
    return u;
}

struct InstantonReport {
    double eps = 0.0;
    double grad_sq = 0.0;  // ||grad u_eps||_2^2
    double l6_sq = 0.0;    // ||u_eps||_6^2
    double l2_sq = 0.0;    // ||u_eps||_2^2
    double t_eps = 0.0;
    double supJ = 0.0;
    double A_phi = 0.0;
    double S_est = 0.0;
    double K_est = 0.0;
};

/// The three norms by Simpson quadrature with the analytic derivative.
inline InstantonReport instanton_norms(double eps, const Cutoff& cutoff, const RadialGrid& grid,
                                       const PhysParams&) {
    if (!(eps >= instanton_eps_min(grid)))
        throw config_error("instanton_norms: eps below the resolution guard eps_min = " +
                           std::to_string(instanton_eps_min(grid)));
    InstantonReport rep;
    rep.eps = eps;
    KahanSum sg, s6, s2;
    for (int i = 0; i <= grid.M; ++i) {
        const double r = grid.r[i];
        const double c = cutoff.phi(r), dc = cutoff.dphi(r);
        const double d = eps + r * r;
        const double u = c / std::sqrt(d);
        const double du = dc / std::sqrt(d) - c * r / (d * std::sqrt(d));
        const double r2w = grid.w[i] * r * r;
        sg.add(r2w * du * du);
        s6.add(r2w * pow6(u));
        s2.add(r2w * u * u);
    }
    rep.grad_sq = omega_sphere * sg.value();
    rep.l6_sq = std::cbrt(omega_sphere * s6.value());
    rep.l2_sq = omega_sphere * s2.value();
    return rep;
}

/// Discrete Sobolev quotient infimum inf ||grad v||^2 / ||v||_6^2 in the
/// lumped forms, by fibered Sobolev-gradient descent from a concentrated
/// seed.  The minimizer concentrates at mesh scale, so the value sits below
/// the continuum constant; it is the constant under which the discrete
/// Hoelder/Sobolev chains are exact.
inline double discrete_sobolev_constant(const RadialGrid& grid, double tol = 1e-12,
                                        int max_iters = 20000) {
    LaplacianSolver solver(grid);
    RadialField u(grid);
    const double eps0 = 16.0 * grid.h * grid.h;  // truncated instanton seed, near mesh scale
    for (int i = 0; i < grid.M; ++i)
        u[i] = std::cos(pi * grid.r[i] / (2.0 * grid.R)) /
               std::sqrt(eps0 + grid.r[i] * grid.r[i]);
    u[grid.M] = 0.0;

    auto rescale = [&](RadialField& v, double& a, double& s6) {
        a = dirichlet_energy(v);
        s6 = sixth_mass(v);
        const double t = std::pow(a / s6, 0.25);  // puts the iterate on a = ||v||_6^6
        for (double& x : v.values) x *= t;
        a *= t * t;
        s6 *= pow6(t);
    };

    double a = 0.0, s6 = 0.0;
    rescale(u, a, s6);
    double level = a / 3.0;  // fibered level of a^{3/2}/s6^{1/2} normal form
    for (int it = 0; it < max_iters; ++it) {
        RadialField g = apply_neg_laplacian(u);
        for (int i = 0; i < grid.M; ++i) {
            const double x2 = u[i] * u[i];
            g[i] -= x2 * x2 * u[i];
        }
        g[grid.M] = 0.0;
        const RadialField gh = solver.solve(g);
        const double gg = pair_mass(g, gh);
        if (!(gg > 0.0) || std::sqrt(gg) <= tol * std::max(1.0, a)) break;
        double step = 1.0;
        bool accepted = false;
        while (step >= 1e-13) {
            RadialField trial(grid);
            for (int i = 0; i <= grid.M; ++i) trial[i] = u[i] - step * gh[i];
            trial[grid.M] = 0.0;
            const double at = dirichlet_energy(trial), st = sixth_mass(trial);
            if (at > 0.0 && st > 0.0) {
                const double lt = at * std::sqrt(at / st) / 3.0;
                if (lt <= level - 1e-4 * step * gg) {
                    double ta, ts;
                    rescale(trial, ta, ts);
                    u = std::move(trial);
                    a = ta;
                    s6 = ts;
                    level = a / 3.0;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return a / std::cbrt(s6);
}

struct SobolevEstimates {
    double S_est = 0.0;   // extrapolated continuum Sobolev constant
    double K_est = 0.0;   // extrapolated concentration constant (pi^2/4)^{1/3}
    double S_disc = 0.0;  // discrete quotient infimum on this grid
};

namespace detail {

// least squares for a small column basis
inline std::vector<double> lstsq(const std::vector<std::vector<double>>& cols,
                                 const std::vector<double>& y) {
    const int k = static_cast<int>(cols.size());
    const int n = static_cast<int>(y.size());
    std::vector<double> ata(k * k, 0.0), aty(k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int t = 0; t < n; ++t) s += cols[i][t] * cols[j][t];
            ata[i * k + j] = s;
        }
        double s = 0.0;
        for (int t = 0; t < n; ++t) s += cols[i][t] * y[t];
        aty[i] = s;
    }
    // Gaussian elimination with partial pivoting
    std::vector<double> x = aty;
    for (int c = 0; c < k; ++c) {
        int p = c;
        for (int rr = c + 1; rr < k; ++rr)
            if (std::fabs(ata[rr * k + c]) > std::fabs(ata[p * k + c])) p = rr;
        for (int cc = 0; cc < k; ++cc) std::swap(ata[c * k + cc], ata[p * k + cc]);
        std::swap(x[c], x[p]);
        for (int rr = c + 1; rr < k; ++rr) {
            const double f = ata[rr * k + c] / ata[c * k + c];
            for (int cc = c; cc < k; ++cc) ata[rr * k + cc] -= f * ata[c * k + cc];
            x[rr] -= f * x[c];
        }
    }
    for (int c = k - 1; c >= 0; --c) {
        for (int cc = c + 1; cc < k; ++cc) x[c] -= ata[c * k + cc] * x[cc];
        x[c] /= ata[c * k + c];
    }
    return x;
}

}  // namespace detail

/// K from the 1/sqrt(eps) coefficient of ||u_eps||_6^2 (with the known
/// O(sqrt(eps)) correction in the regression), S from the eps -> 0 limit of
/// the quotient grad_sq / l6_sq fitted in sqrt(eps).
inline SobolevEstimates estimate_S_and_K(const std::vector<double>& eps_schedule,
                                         const Cutoff& cutoff, const RadialGrid& grid,
                                         const PhysParams& params) {
    const int n = static_cast<int>(eps_schedule.size());
    if (n < 3) throw config_error("estimate_S_and_K: schedule needs at least 3 points");
    for (int i = 1; i < n; ++i)
        if (!(eps_schedule[i] < eps_schedule[i - 1]))
            throw config_error("estimate_S_and_K: schedule must be strictly decreasing");
    std::vector<double> se(n), l6(n), ratio(n);
    for (int i = 0; i < n; ++i) {
        const InstantonReport rep = instanton_norms(eps_schedule[i], cutoff, grid, params);
        se[i] = std::sqrt(eps_schedule[i]);
        l6[i] = rep.l6_sq;
        ratio[i] = rep.grad_sq / rep.l6_sq;
    }
    SobolevEstimates est;
    {
        std::vector<double> inv(n), lin(n);
        for (int i = 0; i < n; ++i) {
            inv[i] = 1.0 / se[i];
            lin[i] = se[i];
        }
        est.K_est = detail::lstsq({inv, lin}, l6)[0];
    }
    {
        std::vector<double> one(n, 1.0), lin(n), sq(n);
        for (int i = 0; i < n; ++i) {
            lin[i] = se[i];
            sq[i] = se[i] * se[i];
        }
        est.S_est = detail::lstsq({one, lin, sq}, ratio)[0];
    }
    est.S_disc = discrete_sobolev_constant(grid);
    return est;
}

/// A(cutoff) = omega/(q K) int_0^R (|cutoff'|^2 - (5/6) lambda cutoff^2) dr.
/// Negative exactly for lambda above 3 lambda1 / 10 when the cutoff is the
/// cosine; its sign decides whether sup J drops below the threshold.
inline double A_of_cutoff(const Cutoff& cutoff, const PhysParams& params, double K_est) {
    if (!(K_est > 0.0)) throw config_error("A_of_cutoff: K_est must be > 0");
    const int n = 8192;  // internal Simpson resolution, independent of any grid
    const double h = params.R / n;
    KahanSum s;
    for (int i = 0; i <= n; ++i) {
        const double r = i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double d = cutoff.dphi(r), c = cutoff.phi(r);
        s.add(w * (d * d - (5.0 / 6.0) * params.lambda * c * c));
    }
    const double integral = s.value() * h / 3.0;
    return omega_sphere / (params.q * K_est) * integral;
}

/// Unique positive maximum of t -> J(t u_eps) in closed form.
inline double t_eps_value(double eps, const Cutoff& cutoff, const PhysParams& params,
                          const RadialGrid& grid) {
    const InstantonReport rep = instanton_norms(eps, cutoff, grid, params);
    const double num = 1.2 * rep.grad_sq - params.lambda * rep.l2_sq;
    if (!(num > 0.0))
        throw no_fiber_max("t_eps_value: 6/5 ||grad u||^2 - lambda ||u||^2 <= 0 at eps = " +
                           std::to_string(eps));
    const double rad = num / (1.2 * params.q * rep.l6_sq);
    return std::pow(rad, 0.25) / std::sqrt(rep.l6_sq);
}

struct SupJEstimate {
    double supJ_direct = 0.0;   // J(t_eps u_eps) from the measured norms
    double supJ_formula = 0.0;  // (2/5) q ((S/q + A sqrt(eps))^3)^{1/2}
};

inline SupJEstimate supJ_estimate(double eps, const Cutoff& cutoff, const PhysParams& params,
                                  const RadialGrid& grid, double S_est, double K_est) {
    const InstantonReport rep = instanton_norms(eps, cutoff, grid, params);
    const double t = t_eps_value(eps, cutoff, params, grid);
    const double t2 = t * t;
    const double l6_cu = rep.l6_sq * rep.l6_sq * rep.l6_sq;  // ||u||_6^6
    SupJEstimate out;
    out.supJ_direct = 0.6 * t2 * rep.grad_sq - 0.5 * params.lambda * t2 * rep.l2_sq -
                      0.2 * params.q * t2 * t2 * t2 * l6_cu;
    const double base = S_est / params.q + A_of_cutoff(cutoff, params, K_est) * std::sqrt(eps);
    out.supJ_formula = 0.4 * params.q * std::sqrt(base * base * base);
    return out;
}

/// Full report row for one eps (the CLI's CSV payload).
inline InstantonReport instanton_report(double eps, const Cutoff& cutoff, const RadialGrid& grid,
                                        const PhysParams& params, double S_est, double K_est) {
    InstantonReport rep = instanton_norms(eps, cutoff, grid, params);
    rep.t_eps = t_eps_value(eps, cutoff, params, grid);
    const SupJEstimate sj = supJ_estimate(eps, cutoff, params, grid, S_est, K_est);
    rep.supJ = sj.supJ_direct;
    rep.A_phi = A_of_cutoff(cutoff, params, K_est);
    rep.S_est = S_est;
    rep.K_est = K_est;
    return rep;
}

}  // namespace spsolve
