#include "btn/steady.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>

#include "btn/ops.hpp"
#include "btn/pressure.hpp"

namespace btn {

double stationary_residual(const VectorField2& m, const ScalarField& p,
                           double kappa, double gamma) {
    const ScalarField lap1 = laplacian_dirichlet(m.c1);
    const ScalarField lap2 = laplacian_dirichlet(m.c2);
    const VectorField2 rea = reaction(m, gamma);
    const VectorField2 act = activation(m, p);
    ScalarField r2(m.grid_ptr());
    for (int k = 0; k < r2.size(); ++k) {
        const double r1v = -kappa * lap1[k] + rea.c1[k] - act.c1[k];
        const double r2v = -kappa * lap2[k] + rea.c2[k] - act.c2[k];
        r2[k] = r1v * r1v + r2v * r2v;
    }
    return std::sqrt(integrate(r2));
}

SteadyResult solve_steady(const SimulationConfig& cfg, const VectorField2& init,
                          double tol, const SteadyOptions& opt) {
    if (!(tol > 0.0))
        throw std::invalid_argument("solve_steady: tol must be > 0");
    cfg.validate();
    GridPtr grid = cfg.make_grid();
    if (!init.grid().same_geometry(*grid))
        throw std::invalid_argument("solve_steady: init grid does not match config");
    if (!init.boundary_is_zero() || !init.all_finite())
        throw std::invalid_argument("solve_steady: init must be finite and boundary-zero");

    ScalarField S = cfg.source.evaluate(grid);
    SimulationState state{0.0, 0, init, solve_pressure(init, S, cfg.cg_tol)};
    Stepper stepper(grid, S, cfg);

    double res = stationary_residual(state.m, state.p, cfg.kappa, cfg.gamma);
    SteadyResult best{state.m, state.p, res, 0, res <= tol};
    if (best.converged) return best;

    int steps = 0;
    // transient phase: pseudo-time under the explicit-term dt bound
    int stall = 0;
    double prev_res = res;
    while (steps < opt.max_steps && state.t < opt.t_max) {
        const double bound = explicit_dt_bound(state.m, state.p, cfg.gamma);
        stepper.set_dt(std::min(opt.dt_safety * bound, opt.dt_cap));
        state = stepper.advance(state);
        ++steps;
        res = stationary_residual(state.m, state.p, cfg.kappa, cfg.gamma);
        if (res < best.residual) {
            best.m_inf = state.m;
            best.p_inf = state.p;
            best.residual = res;
        }
        best.iterations = steps;
        if (res <= tol) {
            best.converged = true;
            return best;
        }
        // relative progress watchdog; a plateau hands off to the polish pass
        if (steps % 25 == 0) {
            stall = (res > 0.999 * prev_res) ? stall + 1 : 0;
            prev_res = res;
            if (opt.polish && stall >= 2) break;
        }
    }

    if (opt.polish) {
        // damped fixed-point polish: grow the implicit step while the
        // stationary residual keeps dropping, halve it when it does not
        double dt_polish = opt.dt_cap;
        int rejects = 0;
        for (int it = 0; it < 400 && steps < opt.max_steps; ++it) {
            stepper.set_dt(dt_polish);
            SimulationState cand = stepper.advance(state);
            ++steps;
            const double cres = stationary_residual(cand.m, cand.p, cfg.kappa, cfg.gamma);
            if (cres < res) {
                state = std::move(cand);
                res = cres;
                dt_polish = std::min(dt_polish * 2.0, 1e4);
                rejects = 0;
                if (res < best.residual) {
                    best.m_inf = state.m;
                    best.p_inf = state.p;
                    best.residual = res;
                }
                best.iterations = steps;
                if (res <= tol) {
                    best.converged = true;
                    return best;
                }
            } else {
                dt_polish *= 0.25;
                if (++rejects > 25) break;
            }
        }
    }
    best.converged = best.residual <= tol;
    return best;
}

namespace {

double record_quantity(const EnergyRecord& r, DecayQuantity q) {
    return q == DecayQuantity::m_linf ? r.norms.m_linf : r.dp_semitrivial;
}

} // namespace

DecayFit fit_decay_rate(std::span<const EnergyRecord> records, DecayQuantity q,
                        double t_start, double t_end) {
    std::vector<double> ts, ys;
    for (const EnergyRecord& r : records) {
        if (r.t < t_start || r.t > t_end) continue;
        const double v = record_quantity(r, q);
        if (v <= 0.0) break;  // truncate before the first zero
        ts.push_back(r.t);
        ys.push_back(std::log(v));
    }
    if (ts.size() < 10)
        throw FitError("fit_decay_rate: fewer than 10 usable samples in window");
    const double n = static_cast<double>(ts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        sx += ts[k];
        sy += ys[k];
        sxx += ts[k] * ts[k];
        sxy += ts[k] * ys[k];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw FitError("fit_decay_rate: degenerate time samples");
    const double slope = (n * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double e = ys[k] - (slope * ts[k] + icept);
        ss_res += e * e;
        ss_tot += (ys[k] - ymean) * (ys[k] - ymean);
    }
    DecayFit fit;
    fit.mu_hat = -slope;
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.t_start = ts.front();
    fit.t_end = ts.back();
    fit.samples = static_cast<int>(ts.size());
    return fit;
}

std::pair<double, double> default_fit_window(std::span<const EnergyRecord> records,
                                             DecayQuantity q, double cg_tol) {
    if (records.empty()) return {0.0, 0.0};
    const double t0 = records.front().t;
    const double horizon = records.back().t - t0;
    double start = t0 + 0.2 * horizon;
    double end = t0 + 0.8 * horizon;
    const double floor = 100.0 * cg_tol;
    for (const EnergyRecord& r : records) {
        if (r.t < start) continue;
        if (r.t > end) break;
        if (record_quantity(r, q) < floor) {
            end = r.t;
            break;
        }
    }
    return {start, end};
}

std::vector<std::pair<double, double>> contraction_test(const SimulationConfig& cfg,
                                                        const VectorField2& m0_a,
                                                        const VectorField2& m0_b) {
    cfg.validate();
    GridPtr grid = cfg.make_grid();
    for (const VectorField2* m0 : {&m0_a, &m0_b})
        if (!m0->grid().same_geometry(*grid) || !m0->boundary_is_zero() ||
            !m0->all_finite())
            throw std::invalid_argument(
                "contraction_test: initial data must be finite, boundary-zero, on the config grid");

    ScalarField S = cfg.source.evaluate(grid);
    Stepper stepper(grid, S, cfg);
    SimulationState a{0.0, 0, m0_a, solve_pressure(m0_a, S, cfg.cg_tol)};
    SimulationState b{0.0, 0, m0_b, solve_pressure(m0_b, S, cfg.cg_tol)};

    auto delta_l2 = [](const SimulationState& sa, const SimulationState& sb) {
        ScalarField d2(sa.m.grid_ptr());
        for (int k = 0; k < d2.size(); ++k) {
            const double d1 = sa.m.c1[k] - sb.m.c1[k];
            const double d2v = sa.m.c2[k] - sb.m.c2[k];
            d2[k] = d1 * d1 + d2v * d2v;
        }
        return std::sqrt(integrate(d2));
    };

    std::vector<std::pair<double, double>> out;
    out.emplace_back(0.0, delta_l2(a, b));
    const long nsteps = std::lround(cfg.t_end / cfg.dt);
    for (long n = 1; n <= nsteps; ++n) {
        a = stepper.advance(a);
        b = stepper.advance(b);
        if (n % cfg.record_every == 0 || n == nsteps)
            out.emplace_back(a.t, delta_l2(a, b));
    }
    return out;
}

namespace {

SweepRow sweep_entry(const SimulationConfig& base, double kappa, double steady_tol) {
    SweepRow row;
    row.kappa = kappa;
    try {
        SimulationConfig cfg = base;
        cfg.kappa = kappa;
        cfg.validate();
        GridPtr grid = cfg.make_grid();
        const VectorField2 init = cfg.init.evaluate(grid);
        const SteadyResult sr = solve_steady(cfg, init, steady_tol);
        row.m_inf_linf = sr.m_inf.max_magnitude();
        row.converged = sr.converged;
        row.steps = sr.iterations;
        const RunResult rr = run(cfg);
        const auto [ws, we] =
            default_fit_window(rr.records, DecayQuantity::m_linf, cfg.cg_tol);
        const DecayFit fit = fit_decay_rate(rr.records, DecayQuantity::m_linf, ws, we);
        row.mu_hat = fit.mu_hat;
        row.r_squared = fit.r_squared;
    } catch (const std::exception& e) {
        row.error = e.what();
        row.mu_hat = std::nan("");
        row.r_squared = std::nan("");
    }
    return row;
}

} // namespace

SweepReport kappa_sweep(const SimulationConfig& base_cfg,
                        std::span<const double> kappas, double steady_tol,
                        bool parallel) {
    if (!std::is_sorted(kappas.begin(), kappas.end()))
        throw std::invalid_argument("kappa_sweep: kappas must be sorted ascending");
    for (double k : kappas)
        if (!(k > 0.0))
            throw std::invalid_argument("kappa_sweep: kappas must be > 0");

    SweepReport report;
    report.rows.resize(kappas.size());
    if (parallel) {
        std::vector<std::future<SweepRow>> futs;
        futs.reserve(kappas.size());
        for (double k : kappas)
            futs.push_back(std::async(std::launch::async, sweep_entry, base_cfg, k,
                                      steady_tol));
        for (std::size_t q = 0; q < futs.size(); ++q)
            report.rows[q] = futs[q].get();  // merged in kappa order
    } else {
        for (std::size_t q = 0; q < kappas.size(); ++q)
            report.rows[q] = sweep_entry(base_cfg, kappas[q], steady_tol);
    }
    for (const SweepRow& row : report.rows)
        if (row.error.empty() && row.m_inf_linf < 1e-6) {
            report.crossover_kappa = row.kappa;
            break;
        }
    return report;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_sweep_csv: cannot open " + path.string());
    os << "kappa,m_inf_linf,mu_hat,r_squared,converged,steps\n";
    char buf[160];
    for (const SweepRow& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d,%d\n", r.kappa,
                      r.m_inf_linf, r.mu_hat, r.r_squared, r.converged ? 1 : 0,
                      r.steps);
        os << buf;
    }
    if (!os) throw std::runtime_error("write_sweep_csv: write failed");
}

} // namespace btn
