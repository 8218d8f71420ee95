#ifndef BTN_STEADY_HPP
#define BTN_STEADY_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "btn/dynamics.hpp"

namespace btn {

struct SteadyResult {
    VectorField2 m_inf;
    ScalarField p_inf;          ///< pressure solve for m_inf
    double residual = 0.0;      ///< L2 norm of the discrete stationary residual
    int iterations = 0;         ///< pseudo-time steps taken
    bool converged = false;
};

struct SteadyOptions {
    int max_steps = 20000;
    double t_max = 60.0;     ///< pseudo-time horizon before giving up
    double dt_cap = 0.1;     ///< transient-phase step cap
    double dt_safety = 0.8;  ///< fraction of the explicit-term bound
    bool polish = true;      ///< damped large-step fixed-point pass at the end
};

/// L2 norm of -kappa lap m + |m|^(2(gamma-1)) m - (m.grad p) grad p over both
/// components, with the discrete operators of the dynamics.
double stationary_residual(const VectorField2& m, const ScalarField& p,
                           double kappa, double gamma);

/// Pseudo-time continuation toward a stationary state: march the dynamics
/// with an adaptive dt under the explicit-term bound until the stationary
/// residual reaches tol, then polish with progressively larger damped steps.
/// Reports converged = false (best iterate kept) when the budget runs out.
SteadyResult solve_steady(const SimulationConfig& cfg, const VectorField2& init,
                          double tol, const SteadyOptions& opt = {});

enum class DecayQuantity { m_linf, dp_h1 };

struct DecayFit {
    double mu_hat = 0.0;     ///< decay rate per unit time (-slope of log q)
    double r_squared = 0.0;
    double t_start = 0.0;    ///< window actually used
    double t_end = 0.0;
    int samples = 0;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Least-squares line fit of log(quantity) against t over [t_start, t_end].
/// The window is truncated before the first non-positive sample; fewer than
/// 10 usable samples is an error.
DecayFit fit_decay_rate(std::span<const EnergyRecord> records, DecayQuantity q,
                        double t_start, double t_end);

/// Post-transient window: skip the first 20% of the horizon, use the next
/// 60%, and stop early once the quantity falls under 100*cg_tol (floor
/// contamination).
std::pair<double, double> default_fit_window(std::span<const EnergyRecord> records,
                                             DecayQuantity q, double cg_tol);

/// Evolve two initial data on identical step schedules under the same
/// source; returns (t, ||m_a - m_b||_L2) per record.
std::vector<std::pair<double, double>> contraction_test(const SimulationConfig& cfg,
                                                        const VectorField2& m0_a,
                                                        const VectorField2& m0_b);

struct SweepRow {
    double kappa = 0.0;
    double m_inf_linf = 0.0;
    double mu_hat = 0.0;
    double r_squared = 0.0;
    bool converged = false;
    int steps = 0;
    std::string error;  ///< non-empty when this entry failed
};

struct SweepReport {
    std::vector<SweepRow> rows;  ///< in kappa order
    std::optional<double> crossover_kappa;  ///< first kappa with m_inf_linf < 1e-6
};

/// For each kappa: steady solve from cfg.init plus a decay fit on a dynamic
/// run. Entries execute independently (in parallel when asked) and are
/// merged in kappa order. Per-entry failures land in the row.
SweepReport kappa_sweep(const SimulationConfig& base_cfg,
                        std::span<const double> kappas, double steady_tol = 1e-8,
                        bool parallel = true);

void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report);

} // namespace btn

#endif
