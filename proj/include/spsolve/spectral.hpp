#pragma once

// Principal Dirichlet eigenpair of -Lap on B_R by inverse power iteration on
// the v = r*u tridiagonal operator.  For the uniform mesh the discrete
// eigenvector is exactly v_i = sin(pi r_i / R) with eigenvalue
// (2 - 2 cos(pi h / R)) / h^2, which converges to (pi/R)^2 at O(h^2).

#include <cmath>
#include <string>

#include "core.hpp"

namespace spsolve {

struct EigenPair {
    double lambda1 = 0.0;  // discrete principal eigenvalue
    RadialField e1;        // positive, lp_mass(e1, 2) == 1
};

/// Inverse power iteration until the relative eigenvalue change drops below
/// tol.  Sign is normalized positive at the first interior node, mass to
/// unit L^2 (Simpson).
inline EigenPair principal_eigenpair(const RadialGrid& grid, double tol, int max_iters = 10000) {
    if (!(tol > 0.0)) throw config_error("principal_eigenpair: tol must be > 0");
    LaplacianSolver solver(grid);

    RadialField u(grid);
    for (int i = 1; i < grid.M; ++i) u[i] = (grid.R - grid.r[i]) * grid.r[i];  // smooth positive seed

    double mu = 0.0, mu_prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        RadialField next = solver.solve(u);
        const double nn = l2_norm_lumped(next);
        if (!(nn > 0.0)) throw convergence_error("principal_eigenpair: iterate collapsed");
        for (double& x : next.values) x /= nn;
        // Rayleigh quotient in the operator-consistent forms
        mu = pair_dirichlet(next, next) / pair_mass(next, next);
        u = next;
        if (mu_prev > 0.0 && std::fabs(mu - mu_prev) <= tol * mu) {
            if (u[1] < 0.0)
                for (double& x : u.values) x = -x;
            const double mass = lp_mass(u, 2);
            const double scale = 1.0 / std::sqrt(mass);
            for (double& x : u.values) x *= scale;
            return EigenPair{mu, u};
        }
        mu_prev = mu;
    }
    throw convergence_error("principal_eigenpair: no convergence after " +
                            std::to_string(max_iters) + " iterations, last eigenvalue " +
                            std::to_string(mu));
}

/// Existence window ]3/10 lambda1, lambda1[ of the positive ground state.
inline std::pair<double, double> lambda_window(const EigenPair& eigen) {
    return {0.3 * eigen.lambda1, eigen.lambda1};
}

}  // namespace spsolve
