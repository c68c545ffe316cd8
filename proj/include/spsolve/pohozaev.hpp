#pragma once

// Pohozaev identity specialized to the ball: for a solution pair (u, phi),
//   -lambda ||u||_2^2 + 2 pi R^3 u'(R)^2 + (2 pi / 5) R^3 phi'(R)^2 = 0.
// For lambda <= 0 every term is nonnegative, so any nontrivial pair leaves a
// strictly positive residual: the nonexistence obstruction at input level.
// On computed solutions the residual is a pure discretization diagnostic and
// decays at O(h^2) under refinement.

#include <cmath>
#include <utility>

#include "core.hpp"
#include "poisson.hpp"

namespace spsolve {

struct PohozaevReport {
    double residual = 0.0;
    double boundary_u = 0.0;    // u'(R), one-sided second order
    double boundary_phi = 0.0;  // phi'(R)
    double l2_u = 0.0;          // ||u||_2^2 (Simpson)
};

inline PohozaevReport pohozaev_residual(const RadialField& u, const RadialField& phi,
                                        const PhysParams& params) {
    require_same_grid(u, phi, "pohozaev_residual");
    PohozaevReport rep;
    rep.boundary_u = boundary_derivative(u);
    rep.boundary_phi = boundary_derivative(phi);
    rep.l2_u = lp_mass(u, 2);
    const double R3 = params.R * params.R * params.R;
    rep.residual = -params.lambda * rep.l2_u + 2.0 * pi * R3 * rep.boundary_u * rep.boundary_u +
                   0.4 * pi * R3 * rep.boundary_phi * rep.boundary_phi;
    return rep;
}

/// Defects of ||grad u||^2 = lambda ||u||^2 + q int phi |u|^5 and
/// ||grad phi||^2 = q int phi |u|^5.  The second is exact whenever
/// phi = phi_u; the first vanishes only on solutions of the full system.
inline std::pair<double, double> nehari_identities_check(const RadialField& u,
                                                         const RadialField& phi,
                                                         const PhysParams& params) {
    require_same_grid(u, phi, "nehari_identities_check");
    RadialField u5(*u.grid);
    for (int i = 1; i < u.grid->M; ++i) u5[i] = abs_pow5(u[i]);
    const double coupling = params.q * pair_mass(u5, phi);
    const double defect1 =
        std::fabs(dirichlet_energy(u) - params.lambda * pair_mass(u, u) - coupling);
    const double defect2 = std::fabs(pair_dirichlet(phi, phi) - coupling);
    return {defect1, defect2};
}

/// Smallest node radius holding the given fraction of the L^6 mass; the
/// numerical marker of concentration.
inline double concentration_radius(const RadialField& u, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw config_error("concentration_radius: fraction must be in (0, 1]");
    const RadialGrid& g = *u.grid;
    double total = 0.0;
    for (int i = 1; i < g.M; ++i) total += pow6(u[i]) * g.r[i] * g.r[i];
    if (!(total > 0.0)) throw degenerate_field("concentration_radius: u == 0");
    const double target = fraction * total;
    double cum = 0.0;
    for (int i = 1; i < g.M; ++i) {
        cum += pow6(u[i]) * g.r[i] * g.r[i];
        if (cum >= target) return g.r[i];
    }
    return g.R;
}

}  // namespace spsolve
