#pragma once

// Run configuration, parameter sweeps and CSV/Markdown emission.
// Numbers are written in full double precision scientific notation so that
// identical configurations byte-reproduce every numeric output; wall_time is
// the only column allowed to differ between repeated runs.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "energy.hpp"
#include "ground_state.hpp"
#include "instanton.hpp"
#include "nonexistence.hpp"
#include "pohozaev.hpp"
#include "spectral.hpp"

namespace spsolve {

inline constexpr const char* code_version = "0.1.0";

enum class Command { eigen, ground, instanton_cmd, probe, sweep };

struct RunConfig {
    Command command = Command::ground;
    double R = 1.0;
    std::vector<int> M_list = {1024};
    std::vector<double> q_list = {1.0};
    std::vector<double> lambda_rel_list;  // multiples of lambda1
    std::vector<double> lambda_abs_list;  // absolute values; never both
    std::vector<double> eps_schedule = {1e-1, 3.1622776601683794e-2, 1e-2,
                                        3.1622776601683794e-3, 1e-3};
    double grad_tol = 2e-8;
    int max_iters = 20000;
    std::string init = "eig";  // eig | instanton | file
    double init_eps = 0.1;
    std::string init_file;
    std::string out_dir;
    std::uint64_t seed = 0;
    int workers = 1;

    bool lambda_is_relative() const { return lambda_abs_list.empty(); }
};

inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

inline std::string command_name(Command c) {
    switch (c) {
        case Command::eigen: return "eigen";
        case Command::ground: return "ground";
        case Command::instanton_cmd: return "instanton";
        case Command::probe: return "probe";
        case Command::sweep: return "sweep";
    }
    return "?";
}

/// FNV-1a 64-bit over the canonical serialization; embedded in every output
/// row for provenance.
inline std::string config_hash(const RunConfig& cfg) {
    std::ostringstream os;
    os << command_name(cfg.command) << ";R=" << format_full(cfg.R) << ";M=";
    for (int m : cfg.M_list) os << m << ",";
    os << ";q=";
    for (double q : cfg.q_list) os << format_full(q) << ",";
    os << ";lrel=";
    for (double l : cfg.lambda_rel_list) os << format_full(l) << ",";
    os << ";labs=";
    for (double l : cfg.lambda_abs_list) os << format_full(l) << ",";
    os << ";eps=";
    for (double e : cfg.eps_schedule) os << format_full(e) << ",";
    os << ";gtol=" << format_full(cfg.grad_tol) << ";iters=" << cfg.max_iters
       << ";init=" << cfg.init << ";ieps=" << format_full(cfg.init_eps)
       << ";ifile=" << cfg.init_file << ";seed=" << cfg.seed << ";workers=" << cfg.workers;
    const std::string s = os.str();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct SweepRow {
    double lambda_over_lambda1 = 0.0;
    double q = 1.0;
    double R = 1.0;
    int M = 0;
    double c = std::nan("");
    double threshold = std::nan("");  // (2/5) sqrt(S_disc^3 / q) on this mesh
    bool below_threshold = false;     // c < threshold, exactly
    double pde_residual = std::nan("");
    double pohozaev_residual = std::nan("");
    double concentration_radius = std::nan("");
    bool converged = false;
    int iterations = 0;
    double wall_time = 0.0;
    std::string version = code_version;
    std::string cfg_hash;
    std::string note;  // failure diagnostics, never aborts the sweep
};

inline const char* sweep_csv_header() {
    return "lambda_over_lambda1,q,R,M,c,threshold,below_threshold,pde_residual,"
           "pohozaev_residual,concentration_radius,converged,iterations,wall_time,"
           "code_version,config_hash";
}

namespace detail {

struct SweepContext {
    RadialGrid grid;
    EigenPair eigen;
    double S_disc = 0.0;
};

inline SweepRow sweep_point(const RunConfig& cfg, const SweepContext& ctx, double lambda_rel,
                            double q, const std::string& hash) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRow row;
    row.lambda_over_lambda1 = lambda_rel;
    row.q = q;
    row.R = cfg.R;
    row.M = ctx.grid.M;
    row.cfg_hash = hash;
    row.threshold = 0.4 * std::sqrt(ctx.S_disc * ctx.S_disc * ctx.S_disc / q);

    PhysParams params{lambda_rel * ctx.eigen.lambda1, q, cfg.R};
    SolveOptions opts;
    opts.max_iters = cfg.max_iters;
    opts.grad_tol = cfg.grad_tol;
    opts.seed = cfg.seed;
    if (params.lambda <= 0.3 * ctx.eigen.lambda1) {
        opts.init = InitKind::instanton;  // the non-attainment regime concentrates
        opts.init_eps = instanton_eps_min(ctx.grid);
    } else if (cfg.init == "instanton") {
        opts.init = InitKind::instanton;
        opts.init_eps = cfg.init_eps;
    }
    try {
        const GroundState gs = minimize_ground_state(params, ctx.grid, opts);
        row.c = gs.level_c;
        row.pde_residual = gs.pde_residual;
        row.pohozaev_residual = gs.pohozaev_residual;
        row.concentration_radius = concentration_radius(gs.u, 0.5);
        row.converged = gs.converged;
        row.iterations = gs.iterations;
    } catch (const std::exception& e) {
        row.note = e.what();
        row.converged = false;
    }
    row.below_threshold = row.c < row.threshold;
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

}  // namespace detail

/// One row per (lambda, q); lambda-major ordering; point failures are
/// recorded in-row and never abort the sweep.
inline std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    if (cfg.q_list.empty()) throw config_error("run_sweep: empty q grid");
    std::vector<double> lambdas = cfg.lambda_rel_list;
    if (lambdas.empty()) throw config_error("run_sweep: empty lambda grid");
    const int M = cfg.M_list.front();

    detail::SweepContext ctx;
    ctx.grid = build_grid(cfg.R, M);
    ctx.eigen = principal_eigenpair(ctx.grid, 1e-12);
    ctx.S_disc = discrete_sobolev_constant(ctx.grid);
    const std::string hash = config_hash(cfg);

    struct Point {
        double lrel, q;
    };
    std::vector<Point> points;
    for (double l : lambdas)
        for (double q : cfg.q_list) points.push_back({l, q});

    std::vector<SweepRow> rows(points.size());
    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            rows[i] = detail::sweep_point(cfg, ctx, points[i].lrel, points[i].q, hash);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= points.size()) return;
                rows[i] = detail::sweep_point(cfg, ctx, points[i].lrel, points[i].q, hash);
            }
        };
        std::vector<std::future<void>> pool;
        for (int w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    }
    return rows;
}

inline std::string sweep_row_csv(const SweepRow& r) {
    std::ostringstream os;
    os << format_full(r.lambda_over_lambda1) << ',' << format_full(r.q) << ','
       << format_full(r.R) << ',' << r.M << ',' << format_full(r.c) << ','
       << format_full(r.threshold) << ',' << (r.below_threshold ? "true" : "false") << ','
       << format_full(r.pde_residual) << ',' << format_full(r.pohozaev_residual) << ','
       << format_full(r.concentration_radius) << ',' << (r.converged ? "true" : "false") << ','
       << r.iterations << ',' << format_full(r.wall_time) << ',' << r.version << ','
       << r.cfg_hash;
    return os.str();
}

/// Create the output directory and prove it is writable before any
/// computation starts.
inline void preflight_out_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("output directory '" + dir + "' cannot be created: " + ec.message());
    const fs::path probe = fs::path(dir) / ".write_probe";
    std::ofstream f(probe);
    if (!f) throw io_error("output directory '" + dir + "' is not writable");
    f << "ok";
    f.close();
    fs::remove(probe, ec);
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open '" + path + "' for writing");
    f << sweep_csv_header() << '\n';
    for (const SweepRow& r : rows) f << sweep_row_csv(r) << '\n';
    if (!f) throw io_error("write failed for '" + path + "'");
}

inline void write_solution_csv(const RadialField& u, const RadialField& phi,
                               const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open '" + path + "' for writing");
    f << "r,u,phi\n";
    const RadialGrid& g = *u.grid;
    for (int i = 0; i <= g.M; ++i)
        f << format_full(g.r[i]) << ',' << format_full(u[i]) << ',' << format_full(phi[i])
          << '\n';
    if (!f) throw io_error("write failed for '" + path + "'");
}

struct ReportInputs {
    double lambda1 = 0.0;
    double S_est = 0.0, K_est = 0.0, S_disc = 0.0;
    std::vector<SweepRow> rows;
    std::vector<ProbeRow> refinement;  // Pohozaev / threshold refinement table
    std::string banner;
};

inline void write_report_md(const ReportInputs& in, const RunConfig& cfg,
                            const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open '" + path + "' for writing");
    const double K_oracle = std::cbrt(pi * pi / 4.0);
    const double S_oracle = 3.0 * std::cbrt(pi * pi / 4.0) * std::cbrt(pi * pi / 4.0);
    f << "# Ground-state run report\n\n";
    f << "- code version: " << code_version << "\n";
    f << "- config hash: " << config_hash(cfg) << "\n";
    f << "- assumption: the mountain-pass level is reported through its Nehari "
         "characterization (infimum of the fibering quotient); for maps "
         "alpha t^2 - beta t^10 with alpha, beta > 0 the two levels coincide.\n\n";
    if (in.lambda1 > 0.0) {
        f << "## Spectral window\n\n";
        f << "- lambda1 = " << format_full(in.lambda1) << "\n";
        f << "- existence window (3/10 lambda1, lambda1) = (" << format_full(0.3 * in.lambda1)
          << ", " << format_full(in.lambda1) << ")\n\n";
    }
    if (in.K_est > 0.0) {
        f << "## Concentration constants\n\n";
        f << "- K_est = " << format_full(in.K_est) << "  (oracle (pi^2/4)^(1/3) = "
          << format_full(K_oracle) << ", deviation "
          << format_full(in.K_est / K_oracle - 1.0) << ")\n";
        f << "- S_est = " << format_full(in.S_est) << "  (oracle 3 (pi^2/4)^(2/3) = "
          << format_full(S_oracle) << ", deviation "
          << format_full(in.S_est / S_oracle - 1.0) << ")\n";
        f << "- S_disc = " << format_full(in.S_disc)
          << "  (discrete quotient infimum on this mesh; every discrete inequality "
             "chain is guaranteed with this constant)\n\n";
    }
    if (!in.banner.empty()) f << "> " << in.banner << "\n\n";
    if (!in.rows.empty()) {
        f << "## Level vs threshold\n\n";
        f << "| lambda/lambda1 | q | M | c | threshold | below | converged |\n";
        f << "|---|---|---|---|---|---|---|\n";
        for (const SweepRow& r : in.rows)
            f << "| " << format_full(r.lambda_over_lambda1) << " | " << format_full(r.q)
              << " | " << r.M << " | " << format_full(r.c) << " | " << format_full(r.threshold)
              << " | " << (r.below_threshold ? "true" : "false") << " | "
              << (r.converged ? "true" : "false") << " |\n";
        f << '\n';
    }
    if (!in.refinement.empty()) {
        f << "## Refinement diagnostics\n\n";
        f << "| M | c | threshold | concentration radius | Pohozaev residual |\n";
        f << "|---|---|---|---|---|\n";
        for (const ProbeRow& r : in.refinement)
            f << "| " << r.M << " | " << format_full(r.c) << " | " << format_full(r.threshold)
              << " | " << format_full(r.concentration_radius) << " | "
              << format_full(r.pohozaev_residual) << " |\n";
        f << '\n';
    }
    if (!f) throw io_error("write failed for '" + path + "'");
}

}  // namespace spsolve
