#ifndef BTN_ANALYSIS_HPP
#define BTN_ANALYSIS_HPP

#include <filesystem>
#include <span>
#include <vector>

#include "btn/field.hpp"
#include "btn/ops.hpp"

namespace btn {

/// Per-record sample of the energy, its dissipation estimate, and the norm
/// suite bounded along the evolution.
struct EnergyRecord {
    double t = 0.0;
    double energy = 0.0;
    double dE_dt_est = 0.0;       ///< (E_k - E_{k-1}) / (t_k - t_{k-1}); 0 on the first record
    double mt_l2sq = 0.0;         ///< ||(m_k - m_{k-1}) / dt||_L2^2 at the record step; 0 on the first
    NormSample norms;
    double dp_semitrivial = 0.0;  ///< H1-proxy distance of p from the Poisson solution
    bool energy_increase_flag = false;  ///< set when dE exceeded the step tolerance
};

/// E[m,p] = kappa/2 int |grad m|^2 + 1/(2 gamma) int |m|^(2 gamma)
///        + 1/2 int |grad p|^2 + 1/2 int (m.grad p)^2,
/// every term evaluated with the assembly stencils.
double energy(const VectorField2& m, const ScalarField& p, double kappa, double gamma);

/// Tolerated per-interval energy increase for a first-order step:
/// 10*dt^2*max(1, mt_l2sq) + 10*cg_tol.
double energy_increase_tolerance(double dt, double mt_l2sq, double cg_tol);

struct DissipationReport {
    int intervals = 0;
    double max_signed_violation = 0.0;  ///< max over intervals of dE/dt + mt_l2sq
    double max_abs_discrepancy = 0.0;   ///< max |dE/dt + mt_l2sq|; O(dt) for the scheme
    double correlation = 0.0;           ///< Pearson corr of dE/dt against -mt_l2sq
    double max_energy_increase = 0.0;   ///< max over intervals of E_{k+1} - E_k
};

/// Compare (E_{k+1}-E_k)/dt against -mt_l2sq interval by interval.
/// Requires >= 2 records with uniform spacing.
DissipationReport dissipation_check(std::span<const EnergyRecord> records);

/// Empirical shapes of the H2 bounds: ||lap p|| / (1 + (1+kappa^-1/2)||lap m||)
/// and ||lap m|| / (1 + kappa^-1/2), with running maxima. Diagnostics only.
struct LemmaRatioLedger {
    std::vector<double> t;
    std::vector<double> dp_h2_ratio;
    std::vector<double> dm_h2_ratio;
    std::vector<double> dp_h2_ratio_runmax;
    std::vector<double> dm_h2_ratio_runmax;
};

LemmaRatioLedger lemma_ratio_ledger(std::span<const EnergyRecord> records, double kappa);

void write_trajectory_csv(const std::filesystem::path& path,
                          std::span<const EnergyRecord> records);
void write_ledger_csv(const std::filesystem::path& path, const LemmaRatioLedger& ledger);

} // namespace btn

#endif
