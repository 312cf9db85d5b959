#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "quapi/analysis.hpp"
#include "quapi/config.hpp"
#include "quapi/csv.hpp"

namespace fs = std::filesystem;
using namespace quapi;

namespace {

struct GlobalFlags {
    std::string config;
    std::string out_dir = ".";
    int workers = 0;  // 0 = keep config value
    double tolerance_override = 0.0;
};

std::string join_out(const GlobalFlags& gf, const std::string& name) {
    fs::create_directories(gf.out_dir);
    return (fs::path(gf.out_dir) / name).string();
}

void apply_overrides(RunConfig& cfg, const GlobalFlags& gf) {
    if (gf.workers > 0) cfg.numerics.workers = gf.workers;
    if (gf.tolerance_override > 0.0) cfg.numerics.abs_tol = gf.tolerance_override;
}

std::string fmt(double v) { return format_sci(v); }

int cmd_run(const GlobalFlags& gf) {
    RunConfig cfg = parse_run_config(gf.config);
    apply_overrides(cfg, gf);
    const BathSpec bath = cfg.make_bath();
    const double t_c = cfg.resolve_t_c();
    const std::string echo = cfg.serialize();

    const auto table = build_eta_table(
        bath, cfg.numerics.delta_t, cfg.numerics.n_steps, cfg.numerics.dkmax,
        cfg.outputs.verify_eta ? EtaVerify::UpToDk5 : EtaVerify::None);
    if (cfg.outputs.eta_table)
        write_eta_csv(join_out(gf, *cfg.outputs.eta_table), table);

    SystemSpec sys{t_c, DensityMatrix2::plus_x()};
    EvolveOptions opts{cfg.numerics.dkmax_cap, cfg.numerics.workers};
    Trajectory traj = itm_evolve(sys, table, cfg.numerics.n_steps, opts);
    traj.bath_desc = bath.describe();
    write_trajectory_csv(join_out(gf, cfg.outputs.trajectory), traj, echo);

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("method", to_string(traj.method));
    kv.emplace_back("delta_t_ps", fmt(table.delta_t));
    kv.emplace_back("n_steps", std::to_string(cfg.numerics.n_steps));
    kv.emplace_back("dkmax", std::to_string(table.dkmax));
    kv.emplace_back("t_c", fmt(t_c));
    kv.emplace_back("beta_ps", fmt(bath.beta));

    if (cfg.outputs.bloch) {
        const auto bt = bloch_times(bath, t_c);
        kv.emplace_back("bloch_omega0", fmt(bt.omega0));
        kv.emplace_back("bloch_tau2_ps",
                        bt.infinite ? "inf" : fmt(bt.tau2));
        kv.emplace_back("bloch_tau1_ps",
                        bt.infinite ? "inf" : fmt(bt.tau1));
    }

    try {
        const auto res = decoherence_time(traj);
        kv.emplace_back("status", "ok");
        kv.emplace_back("tau2_ps", fmt(res.tau2));
        kv.emplace_back("crossing_index", std::to_string(res.crossing_index));
        kv.emplace_back("threshold", fmt(res.threshold));
        write_summary(join_out(gf, cfg.outputs.summary), kv);
    } catch (const NotCrossedError& e) {
        kv.emplace_back("status", "not_crossed");
        kv.emplace_back("final_ratio", fmt(e.final_ratio));
        write_summary(join_out(gf, cfg.outputs.summary), kv);
        std::cerr << "no decoherence detected: " << e.what() << "\n";
        return 6;
    }
    return 0;
}

int cmd_figures(const GlobalFlags& gf) {
    FiguresConfig fc = parse_figures_config(gf.config);
    if (gf.workers > 0) fc.numerics.workers = gf.workers;
    if (gf.tolerance_override > 0.0) fc.numerics.abs_tol = gf.tolerance_override;

    auto make_bath = [&](BathFamily fam, double g, double wl) {
        SpectralDensityModel m;
        m.family = fam;
        m.g = g;
        m.omega_d = fc.omega_d;
        m.omega_l = wl;
        QuadraturePolicy q;
        if (fc.numerics.omega_max) q.omega_max = *fc.numerics.omega_max;
        if (fc.numerics.abs_tol) q.abs_tol = *fc.numerics.abs_tol;
        if (fc.numerics.max_panels) q.max_panels = *fc.numerics.max_panels;
        return BathSpec(m, thermal_beta(fc.temperature_mK), q);
    };

    // fig1/fig2: response kernels over [-window, window]
    auto response_fig = [&](const BathSpec& bath, const std::string& name) {
        std::vector<ResponseSample> samples(fc.response_samples);
        for (int i = 0; i < fc.response_samples; ++i) {
            const double t = -fc.response_window +
                             2.0 * fc.response_window * i /
                                 (fc.response_samples - 1);
            samples[i] = {t, response_function(bath, t)};
        }
        write_response_csv(join_out(gf, name), samples);
    };
    response_fig(make_bath(BathFamily::Piezoelectric, fc.g_pz, fc.omega_l_a),
                 "fig1.csv");
    response_fig(make_bath(BathFamily::Deformation, fc.g_df, fc.omega_l_a),
                 "fig2.csv");

    // fig3/fig4: off-diagonal evolution for both omega_l values per bath
    auto traj_fig = [&](BathFamily fam, double g, double dt,
                        const std::string& stem) {
        for (double wl : {fc.omega_l_a, fc.omega_l_b}) {
            const BathSpec bath = make_bath(fam, g, wl);
            const auto table =
                build_eta_table(bath, dt, fc.n_steps, fc.dkmax);
            SystemSpec sys{fc.t_c_ratio * wl, DensityMatrix2::plus_x()};
            EvolveOptions opts{12, std::max(1, fc.numerics.workers)};
            Trajectory traj = itm_evolve(sys, table, fc.n_steps, opts);
            traj.bath_desc = bath.describe();
            char name[64];
            std::snprintf(name, sizeof name, "%s_omega_l_%g.csv", stem.c_str(),
                          wl);
            write_trajectory_csv(join_out(gf, name), traj);
        }
    };
    traj_fig(BathFamily::Piezoelectric, fc.g_pz, fc.delta_t_pz, "fig3");
    traj_fig(BathFamily::Deformation, fc.g_df, fc.delta_t_df, "fig4");
    return 0;
}

int cmd_sweep(const GlobalFlags& gf) {
    SweepConfig sw = parse_sweep_config(gf.config);
    apply_overrides(sw.base, gf);
    const std::size_t n = sw.cell_count();

    struct Row {
        std::vector<double> axes;
        std::string tau2_itm, tau2_bloch, status;
        bool converged = false;
    };
    std::vector<Row> rows(n);

    auto run_cell = [&](std::size_t i) {
        Row& row = rows[i];
        row.axes = sw.cell_values(i);
        try {
            RunConfig cfg = sw.cell_config(i);
            if (gf.workers > 0) cfg.numerics.workers = 1;  // pool level wins
            const BathSpec bath = cfg.make_bath();
            const double t_c = cfg.resolve_t_c();
            const auto table = build_eta_table(bath, cfg.numerics.delta_t,
                                               cfg.numerics.n_steps,
                                               cfg.numerics.dkmax);
            SystemSpec sys{t_c, DensityMatrix2::plus_x()};
            EvolveOptions opts{cfg.numerics.dkmax_cap, cfg.numerics.workers};
            const auto traj = itm_evolve(sys, table, cfg.numerics.n_steps, opts);

            // convergence flag: deviation against dkmax+1 below 1e-3
            if (cfg.numerics.dkmax + 1 <= cfg.numerics.n_steps &&
                cfg.numerics.dkmax + 1 <= cfg.numerics.dkmax_cap) {
                const auto table2 =
                    build_eta_table(bath, cfg.numerics.delta_t,
                                    cfg.numerics.n_steps,
                                    cfg.numerics.dkmax + 1);
                const auto traj2 =
                    itm_evolve(sys, table2, cfg.numerics.n_steps, opts);
                double dev = 0.0;
                for (std::size_t k = 0; k < traj.states.size(); ++k)
                    dev = std::max(
                        dev, std::fabs(std::abs(traj.states[k].state(0, 1)) -
                                       std::abs(traj2.states[k].state(0, 1))));
                row.converged = dev < 1e-3;
            }

            const auto bt = bloch_times(bath, t_c);
            row.tau2_bloch = bt.infinite ? "inf" : fmt(bt.tau2);
            const auto res = decoherence_time(traj);
            row.tau2_itm = fmt(res.tau2);
            row.status = "ok";
        } catch (const NotCrossedError&) {
            row.status = "not-crossed";
        } catch (const Error& e) {
            row.status = e.what();
        }
    };

    const int pool = std::max(1, gf.workers > 0 ? gf.workers : sw.base.numerics.workers);
    if (pool <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> threads;
        for (int w = 0; w < pool; ++w)
            threads.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n;
                     i = next.fetch_add(1))
                    run_cell(i);
            });
        for (auto& t : threads) t.join();
    }

    std::ofstream out(join_out(gf, "sweep.csv"));
    if (!out) throw ValidationError("cannot open sweep.csv for writing");
    {
        std::istringstream is(sw.base.serialize());
        std::string line;
        while (std::getline(is, line)) out << "# " << line << "\n";
    }
    for (const auto& a : sw.axes) out << a.field << ',';
    out << "tau2_itm_ps,tau2_bloch_ps,status,converged\n";
    for (const auto& row : rows) {
        for (double v : row.axes) out << fmt(v) << ',';
        out << row.tau2_itm << ',' << row.tau2_bloch << ',' << row.status
            << ',' << (row.converged ? "1" : "0") << "\n";
    }
    return 0;
}

int cmd_selftest(const GlobalFlags& gf) {
    RunConfig cfg = parse_run_config(gf.config);
    apply_overrides(cfg, gf);
    const BathSpec bath = cfg.make_bath();
    const double route_tol =
        gf.tolerance_override > 0.0 ? gf.tolerance_override : 1e-8;
    int failures = 0;
    auto report = [&](const std::string& name, bool ok,
                      const std::string& detail) {
        std::cout << "selftest: " << name << " ... "
                  << (ok ? "PASS" : "FAIL");
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    {  // eta route agreement
        const double dt = cfg.numerics.delta_t;
        double worst = 0.0;
        const auto table = build_eta_table(bath, dt, 8, 3);
        worst = std::max(worst, std::abs(eta_diag_time_route(bath, dt) -
                                         table.diag_interior));
        worst = std::max(worst, std::abs(eta_diag_time_route(bath, 0.5 * dt) -
                                         table.diag_terminal));
        for (int dk = 1; dk <= 3; ++dk)
            for (int ci = 0; ci < 4; ++ci) {
                const auto c = static_cast<PairClass>(ci);
                worst = std::max(
                    worst, std::abs(eta_offdiag_time_route(bath, dt, dk, c) -
                                    table.off(dk, c)));
            }
        report("eta route agreement", worst <= route_tol,
               "max |a-b| = " + fmt(worst));
    }
    {  // itm vs brute force, full memory
        const auto table = build_eta_table(bath, cfg.numerics.delta_t, 4, 4);
        SystemSpec sys{cfg.resolve_t_c(), DensityMatrix2::plus_x()};
        const auto a = itm_evolve(sys, table, 4);
        const auto b = brute_force_evolve(sys, table, 4);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.states.size(); ++k)
            for (int e = 0; e < 4; ++e)
                worst = std::max(worst, std::abs(a.states[k].state.m[e] -
                                                 b.states[k].state.m[e]));
        report("itm vs brute force", worst <= 1e-10,
               "max entry diff = " + fmt(worst));
    }
    {  // full-memory pure dephasing
        const auto table = build_eta_table(bath, cfg.numerics.delta_t, 6, 6);
        SystemSpec sys{0.0, DensityMatrix2::plus_x()};
        const auto traj = itm_evolve(sys, table, 6);
        double worst = 0.0;
        for (int k = 1; k <= 6; ++k) {
            const double gamma =
                dephasing_exponent(bath, k * cfg.numerics.delta_t);
            const double expect = 0.5 * std::exp(-gamma);
            const double got = std::abs(traj.states[k].state(0, 1));
            worst = std::max(worst, std::fabs(got - expect) / expect);
        }
        report("pure dephasing (full memory)", worst <= 1e-6,
               "max rel err = " + fmt(worst));
    }
    {  // closed-system limit
        SpectralDensityModel zero = bath.model;
        zero.g = 0.0;
        const BathSpec free_bath(zero, bath.beta, bath.quadrature);
        const auto table =
            build_eta_table(free_bath, cfg.numerics.delta_t, 8, 1);
        DensityMatrix2 rho0;
        rho0.m = {cplx(0.7), cplx(0.2, 0.1), cplx(0.2, -0.1), cplx(0.3)};
        SystemSpec sys{cfg.resolve_t_c(), rho0};
        const auto traj = itm_evolve(sys, table, 8);
        const auto u = short_time_propagator(sys.t_c, cfg.numerics.delta_t);
        DensityMatrix2 ref = rho0;
        double worst = 0.0;
        for (int k = 1; k <= 8; ++k) {
            DensityMatrix2 next;
            // next = U ref U^dagger
            std::array<cplx, 4> tmp;
            tmp[0] = u[0] * ref.m[0] + u[1] * ref.m[2];
            tmp[1] = u[0] * ref.m[1] + u[1] * ref.m[3];
            tmp[2] = u[2] * ref.m[0] + u[3] * ref.m[2];
            tmp[3] = u[2] * ref.m[1] + u[3] * ref.m[3];
            next.m[0] = tmp[0] * std::conj(u[0]) + tmp[1] * std::conj(u[1]);
            next.m[1] = tmp[0] * std::conj(u[2]) + tmp[1] * std::conj(u[3]);
            next.m[2] = tmp[2] * std::conj(u[0]) + tmp[3] * std::conj(u[1]);
            next.m[3] = tmp[2] * std::conj(u[2]) + tmp[3] * std::conj(u[3]);
            ref = next;
            for (int e = 0; e < 4; ++e)
                worst = std::max(worst, std::abs(traj.states[k].state.m[e] -
                                                 ref.m[e]));
        }
        report("closed-system limit (g = 0)", worst <= 1e-12,
               "max entry diff = " + fmt(worst));
    }
    if (failures) {
        std::cerr << failures << " selftest failure(s)\n";
        return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Numerically exact non-Markovian decoherence of a two-level charge "
        "qubit coupled to acoustic-phonon baths (iterative path-integral "
        "tensor propagation plus Bloch-equation comparison)"};
    app.require_subcommand(1);

    GlobalFlags gf;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", gf.config, "config file path")->required();
        sub->add_option("--out", gf.out_dir, "output directory");
        sub->add_option("--workers", gf.workers, "worker thread count");
        sub->add_option("--tolerance-override", gf.tolerance_override,
                        "override quadrature absolute tolerance");
    };
    auto* run = app.add_subcommand("run", "single evolution + analysis");
    auto* figures =
        app.add_subcommand("figures", "emit response/trajectory CSV data");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep grid");
    auto* selftest = app.add_subcommand("selftest", "run the oracle suites");
    for (auto* sub : {run, figures, sweep, selftest}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(gf);
        if (figures->parsed()) return cmd_figures(gf);
        if (sweep->parsed()) return cmd_sweep(gf);
        if (selftest->parsed()) return cmd_selftest(gf);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 5;
    } catch (const NotCrossedError& e) {
        std::cerr << "no decoherence detected: " << e.what() << "\n";
        return 6;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
