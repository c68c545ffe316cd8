#pragma once

// Radial mesh, ball quadrature and the discrete Dirichlet Laplacian on B_R.
//
// All fields are radial functions sampled on the uniform mesh r_i = i*h,
// h = R/M, with a homogeneous Dirichlet value at r = R.  Second derivatives
// act through the substitution v = r*u, which turns -u'' - (2/r)u' into the
// plain 1-D operator -v'' with v(0) = v(R) = 0 and keeps every system matrix
// symmetric tridiagonal.
//
// Two integration rules coexist and are not interchangeable:
//  * integrate_ball / lp_mass use composite Simpson weights (fourth order),
//    for norms of smooth fields and the concentration asymptotics.
//  * pair_mass / pair_dirichlet are the lumped forms consistent with the
//    three-point stencil.  Summation by parts, the reduction identity
//    ||grad phi_u||^2 = q * int |u|^5 phi_u, Green symmetry and the energy
//    gradients are exact (to roundoff) in these forms only.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spsolve {

inline constexpr double pi = 3.141592653589793238462643383279502884;
// surface area of the unit sphere in R^3
inline constexpr double omega_sphere = 4.0 * pi;

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct grid_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// fibering map t -> I(tu) has no positive maximum (a - lambda*b <= 0)
struct no_fiber_max : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// operation needs a nontrivial field and got u == 0
struct degenerate_field : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// (lambda, q, R) of the coupled problem; q > 0, R > 0.
struct PhysParams {
    double lambda = 0.0;
    double q = 1.0;
    double R = 1.0;
};

inline void validate(const PhysParams& p) {
    if (!(p.q > 0.0)) throw config_error("PhysParams: q must be > 0");
    if (!(p.R > 0.0)) throw config_error("PhysParams: R must be > 0");
    if (!std::isfinite(p.lambda)) throw config_error("PhysParams: lambda must be finite");
}

/// Uniform radial mesh on [0, R] with composite Simpson weights.
struct RadialGrid {
    double R = 1.0;
    int M = 0;                  // interior resolution; nodes are 0..M
    double h = 0.0;             // mesh width R/M
    std::vector<double> r;      // node radii
    std::vector<double> w;      // Simpson weights for int_0^R . dr
};

inline RadialGrid build_grid(double R, int M) {
    if (!(R > 0.0)) throw config_error("build_grid: R must be > 0");
    if (M < 16) throw config_error("build_grid: M must be >= 16");
    if (M % 2 != 0) throw config_error("build_grid: M must be even (composite Simpson)");
    RadialGrid g;
    g.R = R;
    g.M = M;
    g.h = R / M;
    g.r.resize(M + 1);
    g.w.resize(M + 1);
    for (int i = 0; i <= M; ++i) g.r[i] = i * g.h;
    g.r[M] = R;  // exact endpoint
    const double third = g.h / 3.0;
    g.w[0] = third;
    g.w[M] = third;
    for (int i = 1; i < M; ++i) g.w[i] = (i % 2 ? 4.0 : 2.0) * third;
    return g;
}

inline bool same_grid(const RadialGrid& a, const RadialGrid& b) {
    return a.M == b.M && a.R == b.R;
}

/// Nodal values of a radial function, u_M = 0 at the Dirichlet boundary.
struct RadialField {
    const RadialGrid* grid = nullptr;
    std::vector<double> values;

    RadialField() = default;
    explicit RadialField(const RadialGrid& g) : grid(&g), values(g.M + 1, 0.0) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    int size() const { return static_cast<int>(values.size()); }
};

inline void require_same_grid(const RadialField& a, const RadialField& b, const char* who) {
    if (a.grid == nullptr || b.grid == nullptr || !same_grid(*a.grid, *b.grid))
        throw grid_mismatch(std::string(who) + ": fields live on different grids");
}

// Kahan-compensated accumulator; the reduction identities are asserted to
// 1e-12 relative, which plain sequential sums cannot guarantee at large M.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

// odd powers preserving sign, |x|^p via products only (so scaling by powers
// of two stays exact in floating point)
inline double abs_pow5(double x) {
    const double a = std::fabs(x);
    const double a2 = a * a;
    return a2 * a2 * a;
}
inline double signed_pow4(double x) {  // |x|^3 * x
    const double x2 = x * x;
    return x2 * x * std::fabs(x);
}
inline double pow6(double x) {
    const double x2 = x * x;
    return x2 * x2 * x2;
}

/// 4*pi * int_0^R f(r) r^2 dr by composite Simpson; exact for polynomial
/// integrands f*r^2 of degree <= 3.
inline double integrate_ball(const RadialField& f) {
    const RadialGrid& g = *f.grid;
    KahanSum s;
    for (int i = 0; i <= g.M; ++i) s.add(g.w[i] * f[i] * g.r[i] * g.r[i]);
    return omega_sphere * s.value();
}

/// int_{B_R} |u|^p for p in {2, 5, 6} (Simpson rule).
inline double lp_mass(const RadialField& u, int p) {
    const RadialGrid& g = *u.grid;
    KahanSum s;
    switch (p) {
        case 2:
            for (int i = 0; i <= g.M; ++i) s.add(g.w[i] * u[i] * u[i] * g.r[i] * g.r[i]);
            break;
        case 5:
            for (int i = 0; i <= g.M; ++i) s.add(g.w[i] * abs_pow5(u[i]) * g.r[i] * g.r[i]);
            break;
        case 6:
            for (int i = 0; i <= g.M; ++i) s.add(g.w[i] * pow6(u[i]) * g.r[i] * g.r[i]);
            break;
        default:
            throw config_error("lp_mass: exponent must be 2, 5 or 6");
    }
    return omega_sphere * s.value();
}

/// Lumped inner product <f, g> = 4*pi*h * sum_i f_i g_i r_i^2 over interior
/// nodes; the mass pairing under which apply_neg_laplacian is self-adjoint.
inline double pair_mass(const RadialField& f, const RadialField& g) {
    const RadialGrid& gr = *f.grid;
    KahanSum s;
    for (int i = 1; i < gr.M; ++i) s.add(f[i] * g[i] * gr.r[i] * gr.r[i]);
    return omega_sphere * gr.h * s.value();
}

/// Dirichlet form D(f,g) = 4*pi/h * sum (dv_f)(dv_g), v = r*u.  Pairs with
/// apply_neg_laplacian through exact summation by parts.
inline double pair_dirichlet(const RadialField& f, const RadialField& g) {
    const RadialGrid& gr = *f.grid;
    KahanSum s;
    double vf_prev = 0.0, vg_prev = 0.0;
    for (int i = 1; i <= gr.M; ++i) {
        const double vf = gr.r[i] * f[i];
        const double vg = gr.r[i] * g[i];
        s.add((vf - vf_prev) * (vg - vg_prev));
        vf_prev = vf;
        vg_prev = vg;
    }
    return omega_sphere * s.value() / gr.h;
}

/// ||grad u||_2^2 in the discrete Dirichlet form.
inline double dirichlet_energy(const RadialField& u) { return pair_dirichlet(u, u); }

/// int |u|^6 in the lumped measure (the exponent the energy algebra uses).
inline double sixth_mass(const RadialField& u) {
    const RadialGrid& g = *u.grid;
    KahanSum s;
    for (int i = 1; i < g.M; ++i) s.add(pow6(u[i]) * g.r[i] * g.r[i]);
    return omega_sphere * g.h * s.value();
}

inline double l2_norm_lumped(const RadialField& u) {
    const double m = pair_mass(u, u);
    return m > 0.0 ? std::sqrt(m) : 0.0;
}

/// -Lap u = -u'' - (2/r)u' through v = r*u; three-point stencil on v.
/// Node 0 is filled by even extrapolation (exact through O(h^2) terms),
/// node M is set to 0.
inline RadialField apply_neg_laplacian(const RadialField& u) {
    const RadialGrid& g = *u.grid;
    RadialField out(g);
    const double ih2 = 1.0 / (g.h * g.h);
    for (int i = 1; i < g.M; ++i) {
        const double vm = g.r[i - 1] * u[i - 1];
        const double v0 = g.r[i] * u[i];
        const double vp = g.r[i + 1] * u[i + 1];
        out[i] = (2.0 * v0 - vm - vp) * ih2 / g.r[i];
    }
    if (g.M >= 3) out[0] = (4.0 * out[1] - out[2]) / 3.0;
    out[g.M] = 0.0;
    return out;
}

/// Factored Thomas solve of the v-space system (-v'')_i = rhs_i,
/// v_0 = v_M = 0.  The matrix is the SPD M-matrix tridiag(-1,2,-1)/h^2, so
/// forward/backward sweeps only add nonnegative terms for rhs >= 0 and the
/// solution is nonnegative in floating point, not just in exact arithmetic.
class LaplacianSolver {
  public:
    explicit LaplacianSolver(const RadialGrid& g) : grid_(&g), diag_(g.M - 1), mult_(g.M - 1) {
        const double ih2 = 1.0 / (g.h * g.h);
        const double b = 2.0 * ih2, a = -ih2;
        diag_[0] = b;
        for (int i = 1; i < g.M - 1; ++i) {
            mult_[i] = a / diag_[i - 1];
            diag_[i] = b - mult_[i] * a;
        }
        off_ = a;
    }

    /// Solve A u = f in u-space (f given at interior nodes).  u_0 comes from
    /// the second-order one-sided value of v'(0), u_M = 0.
    RadialField solve(const RadialField& f) const {
        const RadialGrid& g = *grid_;
        const int n = g.M - 1;
        std::vector<double> y(n);
        y[0] = f[1] * g.r[1];
        for (int i = 1; i < n; ++i) y[i] = f[i + 1] * g.r[i + 1] - mult_[i] * y[i - 1];
        RadialField u(g);
        double vnext = y[n - 1] / diag_[n - 1];
        u[n] = vnext / g.r[n];
        for (int i = n - 2; i >= 0; --i) {
            vnext = (y[i] - off_ * vnext) / diag_[i];
            u[i + 1] = vnext / g.r[i + 1];
        }
        // r = 0 limit u(0) = v'(0), one-sided second order from v_1, v_2
        u[0] = (4.0 * u[1] * g.r[1] - u[2] * g.r[2]) / (2.0 * g.h);
        u[g.M] = 0.0;
        return u;
    }

    const RadialGrid& grid() const { return *grid_; }

  private:
    const RadialGrid* grid_;
    std::vector<double> diag_;
    std::vector<double> mult_;
    double off_ = 0.0;
};

inline RadialField solve_neg_laplacian(const RadialField& f) {
    return LaplacianSolver(*f.grid).solve(f);
}

/// One-sided second-order derivative at r = R.
inline double boundary_derivative(const RadialField& u) {
    const RadialGrid& g = *u.grid;
    return (3.0 * u[g.M] - 4.0 * u[g.M - 1] + u[g.M - 2]) / (2.0 * g.h);
}

}  // namespace spsolve
