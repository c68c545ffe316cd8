#pragma once

// The reduction map u -> phi_u: unique solution of -Lap phi = q|u|^5 with
// phi = 0 on the boundary.  In the lumped forms the identity
// ||grad phi_u||^2 = q * int |u|^5 phi_u and the symmetry of the discrete
// Green operator hold to roundoff.

#include <cmath>

#include "core.hpp"

namespace spsolve {

struct ReducedPotential {
    RadialField phi;          // phi_u >= 0 nodewise
    double coupling_n = 0.0;  // N(u) = int |u|^5 phi_u
    double dirichlet_phi = 0.0;  // ||grad phi_u||^2
};

inline RadialField coupling_source(const RadialField& u, double q) {
    RadialField src(*u.grid);
    for (int i = 1; i < u.grid->M; ++i) src[i] = q * abs_pow5(u[i]);
    return src;
}

inline ReducedPotential solve_phi(const RadialField& u, const PhysParams& params,
                                  const LaplacianSolver& solver) {
    ReducedPotential out;
    out.phi = solver.solve(coupling_source(u, params.q));
    RadialField u5(*u.grid);
    for (int i = 1; i < u.grid->M; ++i) u5[i] = abs_pow5(u[i]);
    out.coupling_n = pair_mass(u5, out.phi);
    out.dirichlet_phi = pair_dirichlet(out.phi, out.phi);
    return out;
}

inline ReducedPotential solve_phi(const RadialField& u, const PhysParams& params) {
    return solve_phi(u, params, LaplacianSolver(*u.grid));
}

/// | int |u|^5 phi_w - int |w|^5 phi_u |; zero up to roundoff because the
/// discrete Green operator is a symmetric matrix in the lumped pairing.
inline double green_symmetry_defect(const RadialField& u, const RadialField& w,
                                    const PhysParams& params) {
    require_same_grid(u, w, "green_symmetry_defect");
    LaplacianSolver solver(*u.grid);
    const ReducedPotential pu = solve_phi(u, params, solver);
    const ReducedPotential pw = solve_phi(w, params, solver);
    RadialField u5(*u.grid), w5(*u.grid);
    for (int i = 1; i < u.grid->M; ++i) {
        u5[i] = abs_pow5(u[i]);
        w5[i] = abs_pow5(w[i]);
    }
    return std::fabs(pair_mass(u5, pw.phi) - pair_mass(w5, pu.phi));
}

/// Slack of ||grad phi_u|| <= (q/S^3) ||grad u||^5.  Nonnegative for every
/// grid function when S_disc is the discrete Sobolev quotient infimum: the
/// Hoelder/Sobolev chain holds verbatim in the lumped norms.
inline double essi_gap(const RadialField& u, const PhysParams& params, double S_disc) {
    const double a = dirichlet_energy(u);
    if (!(a > 0.0)) throw degenerate_field("essi_gap: u == 0");
    if (!(S_disc > 0.0)) throw config_error("essi_gap: S_disc must be > 0");
    const ReducedPotential p = solve_phi(u, params);
    const double bound = params.q / (S_disc * S_disc * S_disc) * a * a * std::sqrt(a);
    return bound - std::sqrt(p.dirichlet_phi);
}

}  // namespace spsolve
