#pragma once

// Nonexistence probe.  For lambda <= 0 the Nehari minimization cannot attain
// its infimum in the continuum; on a mesh it produces a near-minimizer
// concentrating at mesh scale whose level approaches the compactness
// threshold (2/5) sqrt(S_disc^3 / q) while the Pohozaev residual stays far
// above the O(h^2) level of a genuine solution.  For lambda >= lambda1 the
// fibering maximum along e1 fails outright.  The report is evidence, not a
// certificate.

#include <string>
#include <vector>

#include "core.hpp"
#include "ground_state.hpp"
#include "instanton.hpp"
#include "pohozaev.hpp"
#include "spectral.hpp"

namespace spsolve {

enum class ProbeRegime { lambda_nonpositive, lambda_at_or_above_lambda1, open_regime, inside_window };

struct ProbeRow {
    int M = 0;
    double c = 0.0;
    double threshold = 0.0;  // (2/5) sqrt(S_disc^3 / q) on this mesh
    double concentration_radius = 0.0;
    double pohozaev_residual = 0.0;
    double grad_norm = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct ProbeReport {
    ProbeRegime regime = ProbeRegime::inside_window;
    double lambda1 = 0.0;
    double e1_fiber_slack = 0.0;  // a - lambda*b along e1 (< 0 above lambda1)
    std::string banner;
    std::vector<ProbeRow> rows;
};

inline ProbeReport nonexistence_probe(const PhysParams& params, const std::vector<int>& schedule,
                                      const SolveOptions& opts) {
    validate(params);
    if (schedule.empty()) throw config_error("nonexistence_probe: empty M schedule");

    ProbeReport rep;
    {
        const RadialGrid fine = build_grid(params.R, schedule.back());
        const EigenPair eigen = principal_eigenpair(fine, 1e-12);
        rep.lambda1 = eigen.lambda1;
        rep.e1_fiber_slack =
            dirichlet_energy(eigen.e1) - params.lambda * pair_mass(eigen.e1, eigen.e1);
    }

    if (params.lambda >= rep.lambda1) {
        rep.regime = ProbeRegime::lambda_at_or_above_lambda1;
        rep.banner = "lambda >= lambda1: the fibering map along e1 has no positive maximum "
                     "(a - lambda*b = " + std::to_string(rep.e1_fiber_slack) + ")";
        return rep;
    }
    if (params.lambda > 0.3 * rep.lambda1) {
        rep.regime = ProbeRegime::inside_window;
        rep.banner = "lambda inside the existence window (3/10 lambda1, lambda1); "
                     "use the ground-state solve instead";
        return rep;
    }
    rep.regime = params.lambda > 0.0 ? ProbeRegime::open_regime : ProbeRegime::lambda_nonpositive;
    if (rep.regime == ProbeRegime::open_regime)
        rep.banner = "open regime 0 < lambda <= 3/10 lambda1: no theorem applies; "
                     "diagnostics reported without any attainment claim";
    else
        rep.banner = "lambda <= 0: Pohozaev obstruction regime, expecting threshold "
                     "convergence with mesh-scale concentration";

    for (int M : schedule) {
        const RadialGrid grid = build_grid(params.R, M);
        SolveOptions o = opts;
        o.init = InitKind::instanton;
        o.init_eps = instanton_eps_min(grid);
        const GroundState gs = minimize_ground_state(params, grid, o);
        ProbeRow row;
        row.M = M;
        row.c = gs.level_c;
        const double sd = discrete_sobolev_constant(grid);
        row.threshold = 0.4 * std::sqrt(sd * sd * sd / params.q);
        row.concentration_radius = concentration_radius(gs.u, 0.5);
        row.pohozaev_residual = gs.pohozaev_residual;
        row.grad_norm = gs.grad_norm;
        row.converged = gs.converged;
        row.iterations = gs.iterations;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace spsolve
