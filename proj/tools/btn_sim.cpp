// btn-sim: run | steady | sweep | verify over a key=value config file.
// Exit codes: 0 success, 1 validation, 2 numerical failure, 3 I/O.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "btn/analysis.hpp"
#include "btn/config.hpp"
#include "btn/dynamics.hpp"
#include "btn/manifest.hpp"
#include "btn/pressure.hpp"
#include "btn/steady.hpp"
#include "btn/verify.hpp"

#include <json.hpp>

namespace fs = std::filesystem;
using namespace btn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + out);
    return dir;
}

int cmd_run(const std::string& config_path, const std::string& out) {
    Timer timer;
    const SimulationConfig cfg = load_config_file(config_path);
    const fs::path dir = prepare_out_dir(out);

    const RunResult rr = run(cfg);

    const fs::path traj = dir / "trajectory.csv";
    const fs::path ledger = dir / "lemma_ratios.csv";
    write_trajectory_csv(traj, rr.records);
    write_ledger_csv(ledger, lemma_ratio_ledger(rr.records, cfg.kappa));
    const fs::path pf = dir / "p_final.field";
    const fs::path m1f = dir / "m1_final.field";
    const fs::path m2f = dir / "m2_final.field";
    write_field(pf, rr.final_state.p);
    write_field(m1f, rr.final_state.m.c1);
    write_field(m2f, rr.final_state.m.c2);

    RunManifest manifest;
    manifest.command = "run";
    manifest.config_text = serialize_config(cfg);
    manifest.grid_hash = cfg.make_grid()->hash();
    manifest.output_files = {traj.string(), ledger.string(), pf.string(), m1f.string(),
                             m2f.string()};
    manifest.wall_seconds = timer.seconds();
    write_manifest(dir / "manifest.json", manifest);

    std::cout << "run: " << rr.steps << " steps, " << rr.records.size()
              << " records; E_final = " << rr.records.back().energy << "\n";
    if (rr.dt_bound_violated)
        std::cout << "warning: dt exceeded the explicit-term stability bound\n";
    if (rr.any_energy_increase)
        std::cout << "warning: energy increase beyond tolerance was flagged (dt too large?)\n";
    return kExitOk;
}

int cmd_steady(const std::string& config_path, const std::string& out, double tol) {
    Timer timer;
    const SimulationConfig cfg = load_config_file(config_path);
    const fs::path dir = prepare_out_dir(out);

    GridPtr grid = cfg.make_grid();
    const SteadyResult sr = solve_steady(cfg, cfg.init.evaluate(grid), tol);

    const fs::path pf = dir / "p_inf.field";
    const fs::path m1f = dir / "m1_inf.field";
    const fs::path m2f = dir / "m2_inf.field";
    write_field(pf, sr.p_inf);
    write_field(m1f, sr.m_inf.c1);
    write_field(m2f, sr.m_inf.c2);

    nlohmann::json j;
    j["converged"] = sr.converged;
    j["residual"] = sr.residual;
    j["iterations"] = sr.iterations;
    j["m_inf_linf"] = sr.m_inf.max_magnitude();
    const fs::path summary = dir / "steady.json";
    {
        std::ofstream os(summary);
        if (!os) throw std::runtime_error("cannot open " + summary.string());
        os << j.dump(2) << "\n";
    }

    RunManifest manifest;
    manifest.command = "steady";
    manifest.config_text = serialize_config(cfg);
    manifest.grid_hash = grid->hash();
    manifest.output_files = {summary.string(), pf.string(), m1f.string(), m2f.string()};
    manifest.wall_seconds = timer.seconds();
    write_manifest(dir / "manifest.json", manifest);

    std::cout << "steady: converged=" << (sr.converged ? "yes" : "no")
              << " residual=" << sr.residual << " |m_inf|=" << sr.m_inf.max_magnitude()
              << " steps=" << sr.iterations << "\n";
    return sr.converged ? kExitOk : kExitNumerical;
}

int cmd_sweep(const std::string& config_path, const std::string& out,
              std::vector<double> kappas, double tol) {
    Timer timer;
    const SimulationConfig cfg = load_config_file(config_path);
    const fs::path dir = prepare_out_dir(out);
    if (kappas.empty())
        kappas = {0.01, 0.02, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};

    const SweepReport report = kappa_sweep(cfg, kappas, tol, true);
    const fs::path csv = dir / "sweep.csv";
    write_sweep_csv(csv, report);

    RunManifest manifest;
    manifest.command = "sweep";
    manifest.config_text = serialize_config(cfg);
    manifest.grid_hash = cfg.make_grid()->hash();
    manifest.output_files = {csv.string()};
    manifest.wall_seconds = timer.seconds();
    write_manifest(dir / "manifest.json", manifest);

    for (const SweepRow& r : report.rows) {
        std::cout << "kappa=" << r.kappa << " |m_inf|=" << r.m_inf_linf
                  << " mu_hat=" << r.mu_hat << " r2=" << r.r_squared
                  << (r.error.empty() ? "" : ("  error: " + r.error)) << "\n";
    }
    if (report.crossover_kappa)
        std::cout << "crossover kappa (|m_inf| < 1e-6): " << *report.crossover_kappa
                  << "\n";
    else
        std::cout << "no crossover inside the sweep range\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"btn-sim: biological transport network simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::vector<double> kappas;
    double steady_tol = 1e-8;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "config file (key = value lines)")
                ->required();
        sub->add_option("--out", out_dir, "output directory");
    };
    CLI::App* c_run = app.add_subcommand("run", "integrate the dynamics, emit CSVs");
    add_common(c_run, true);
    CLI::App* c_steady = app.add_subcommand("steady", "pseudo-time stationary solve");
    add_common(c_steady, true);
    c_steady->add_option("--tol", steady_tol, "stationary residual tolerance");
    CLI::App* c_sweep = app.add_subcommand("sweep", "kappa sweep: steady + decay fits");
    add_common(c_sweep, true);
    c_sweep->add_option("--kappas", kappas, "kappa list (ascending)");
    c_sweep->add_option("--tol", steady_tol, "stationary residual tolerance");
    CLI::App* c_verify = app.add_subcommand("verify", "run the verification suite");
    add_common(c_verify, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (c_run->parsed()) return cmd_run(config_path, out_dir);
        if (c_steady->parsed()) return cmd_steady(config_path, out_dir, steady_tol);
        if (c_sweep->parsed()) return cmd_sweep(config_path, out_dir, kappas, steady_tol);
        if (c_verify->parsed()) {
            const int failures = btn::verify::run_acceptance(std::cout);
            if (failures > 0) {
                std::cerr << "BTN-ERR: verification failed (" << failures
                          << " criteria)\n";
                return kExitNumerical;
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "BTN-ERR: config: " << e.what() << "\n";
        return kExitValidation;
    } catch (const SolveError& e) {
        std::cerr << "BTN-ERR: numerical: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "BTN-ERR: validation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "BTN-ERR: io: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
