#pragma once

// Reduced functional I(u) = F(u, phi_u), auxiliary functional J, gradients,
// and the fibering/Nehari algebra.  The map t -> I(tu) is
// t^2 (a - lambda b)/2 - t^10 q N(u)/10, so the Nehari projection and the
// mountain-pass level along each ray are in closed form.  The mountain-pass
// level is computed as the infimum of the quotient W below; for fibering
// maps alpha t^2 - beta t^10 with alpha, beta > 0 the two levels coincide.

#include <cmath>

#include "core.hpp"
#include "poisson.hpp"

namespace spsolve {

struct EnergyBreakdown {
    double a = 0.0;      // ||grad u||^2
    double b = 0.0;      // ||u||_2^2 (lumped)
    double n = 0.0;      // N(u) = int |u|^5 phi_u
    double i_val = 0.0;  // I(u)
    double j_val = 0.0;  // J(u)
};

struct FiberInfo {
    double t_star = 0.0;  // unique positive maximum of t -> I(tu)
    double level = 0.0;   // I(t_star u)
};

inline EnergyBreakdown energy_I(const RadialField& u, const PhysParams& params,
                                const LaplacianSolver& solver) {
    EnergyBreakdown e;
    e.a = dirichlet_energy(u);
    e.b = pair_mass(u, u);
    e.n = solve_phi(u, params, solver).coupling_n;
    e.i_val = 0.5 * e.a - 0.5 * params.lambda * e.b - 0.1 * params.q * e.n;
    e.j_val = 0.6 * e.a - 0.5 * params.lambda * e.b - 0.2 * params.q * sixth_mass(u);
    return e;
}

inline EnergyBreakdown energy_I(const RadialField& u, const PhysParams& params) {
    return energy_I(u, params, LaplacianSolver(*u.grid));
}

inline double energy_J(const RadialField& u, const PhysParams& params) {
    return 0.6 * dirichlet_energy(u) - 0.5 * params.lambda * pair_mass(u, u) -
           0.2 * params.q * sixth_mass(u);
}

/// Two-variable functional F(u, phi); F(u, phi_u) == I(u) exactly through
/// the reduction identity.
inline double energy_F(const RadialField& u, const RadialField& phi, const PhysParams& params) {
    require_same_grid(u, phi, "energy_F");
    RadialField u5(*u.grid);
    for (int i = 1; i < u.grid->M; ++i) u5[i] = abs_pow5(u[i]);
    return 0.5 * dirichlet_energy(u) - 0.5 * params.lambda * pair_mass(u, u) -
           0.2 * params.q * pair_mass(u5, phi) + 0.1 * pair_dirichlet(phi, phi);
}

/// L^2 representation of I'(u): g = -Lap u - lambda u - q phi_u |u|^3 u,
/// so <g, v> in the lumped pairing is the directional derivative exactly.
inline RadialField grad_I(const RadialField& u, const PhysParams& params,
                          const RadialField& phi_u) {
    RadialField g = apply_neg_laplacian(u);
    for (int i = 0; i < u.grid->M; ++i)
        g[i] -= params.lambda * u[i] + params.q * phi_u[i] * signed_pow4(u[i]);
    g[u.grid->M] = 0.0;
    return g;
}

inline RadialField grad_I(const RadialField& u, const PhysParams& params) {
    return grad_I(u, params, solve_phi(u, params).phi);
}

/// Sobolev (H^1_0) gradient: the solve -Lap ghat = grad_I(u), the descent
/// direction with mesh-independent step sizes.
inline RadialField grad_I_sobolev(const RadialField& u, const PhysParams& params,
                                  const RadialField& phi_u, const LaplacianSolver& solver) {
    return solver.solve(grad_I(u, params, phi_u));
}

inline RadialField grad_I_sobolev(const RadialField& u, const PhysParams& params) {
    LaplacianSolver solver(*u.grid);
    return solver.solve(grad_I(u, params, solve_phi(u, params, solver).phi));
}

inline FiberInfo fiber_from_breakdown(double a, double b, double n, const PhysParams& params) {
    const double x = a - params.lambda * b;
    if (!(n > 0.0)) throw degenerate_field("fiber: N(u) == 0 (u == 0)");
    if (!(x > 0.0))
        throw no_fiber_max("fiber: a - lambda*b <= 0, the map t -> I(tu) has no positive maximum");
    FiberInfo f;
    f.t_star = std::pow(x / (params.q * n), 0.125);
    f.level = 0.4 * std::pow(x, 1.25) / std::pow(params.q * n, 0.25);
    return f;
}

inline FiberInfo fiber_tstar(const RadialField& u, const PhysParams& params) {
    const EnergyBreakdown e = energy_I(u, params);
    return fiber_from_breakdown(e.a, e.b, e.n, params);
}

/// W(u) = (2/5) (a - lambda b)^{5/4} / (q N)^{1/4}; scale invariant, and its
/// infimum over the admissible cone is the mountain-pass level.
inline double nehari_quotient(const RadialField& u, const PhysParams& params) {
    return fiber_tstar(u, params).level;
}

}  // namespace spsolve
