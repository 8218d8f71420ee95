#include "btn/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace btn {

double energy(const VectorField2& m, const ScalarField& p, double kappa, double gamma) {
    if (!(kappa > 0.0) || gamma < 1.0)
        throw std::invalid_argument("energy: requires kappa > 0 and gamma >= 1");
    const double grad_m = dirichlet_energy(m);
    const double grad_p = dirichlet_energy(p);
    const double mgp = anisotropy_energy(m, p);
    ScalarField pow2g(m.grid_ptr());
    const auto a = m.c1.values(), b = m.c2.values();
    for (int k = 0; k < pow2g.size(); ++k) {
        const double q = a[k] * a[k] + b[k] * b[k];
        pow2g[k] = (gamma == 1.0) ? q : std::pow(q, gamma);
    }
    const double m2g = integrate(pow2g);
    return 0.5 * kappa * grad_m + m2g / (2.0 * gamma) + 0.5 * grad_p + 0.5 * mgp;
}

double energy_increase_tolerance(double dt, double mt_l2sq, double cg_tol) {
    return 10.0 * dt * dt * std::max(1.0, mt_l2sq) + 10.0 * cg_tol;
}

DissipationReport dissipation_check(std::span<const EnergyRecord> records) {
    if (records.size() < 2)
        throw std::invalid_argument("dissipation_check: needs at least 2 records");
    const double dt0 = records[1].t - records[0].t;
    for (std::size_t k = 1; k < records.size(); ++k) {
        const double dt = records[k].t - records[k - 1].t;
        if (std::abs(dt - dt0) > 1e-9 * std::max(1.0, std::abs(dt0)))
            throw std::invalid_argument("dissipation_check: record spacing is not uniform");
    }
    DissipationReport rep;
    rep.intervals = static_cast<int>(records.size()) - 1;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    rep.max_signed_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < records.size(); ++k) {
        const double dE = records[k].energy - records[k - 1].energy;
        const double rate = dE / dt0;
        const double mt = records[k].mt_l2sq;
        rep.max_signed_violation = std::max(rep.max_signed_violation, rate + mt);
        rep.max_abs_discrepancy = std::max(rep.max_abs_discrepancy, std::abs(rate + mt));
        rep.max_energy_increase = std::max(rep.max_energy_increase, dE);
        const double x = rate, y = -mt;
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
    }
    const double n = rep.intervals;
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    rep.correlation = (vx > 0 && vy > 0) ? cov / std::sqrt(vx * vy)
                                         : (vx == vy ? 1.0 : 0.0);
    return rep;
}

LemmaRatioLedger lemma_ratio_ledger(std::span<const EnergyRecord> records, double kappa) {
    LemmaRatioLedger led;
    const double kfac = 1.0 + 1.0 / std::sqrt(kappa);
    double rm1 = 0.0, rm2 = 0.0;
    for (const EnergyRecord& r : records) {
        const double dm = std::sqrt(std::max(0.0, r.norms.lap_m_l2sq));
        const double dp = std::sqrt(std::max(0.0, r.norms.lap_p_l2sq));
        const double ratio_dp = dp / (1.0 + kfac * dm);
        const double ratio_dm = dm / kfac;
        rm1 = std::max(rm1, ratio_dp);
        rm2 = std::max(rm2, ratio_dm);
        led.t.push_back(r.t);
        led.dp_h2_ratio.push_back(ratio_dp);
        led.dm_h2_ratio.push_back(ratio_dm);
        led.dp_h2_ratio_runmax.push_back(rm1);
        led.dm_h2_ratio_runmax.push_back(rm2);
    }
    return led;
}

namespace {

// %.17g keeps CSV output byte-deterministic and value-exact.
void put(std::ofstream& os, double v, char sep) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf << sep;
}

} // namespace

void write_trajectory_csv(const std::filesystem::path& path,
                          std::span<const EnergyRecord> records) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_trajectory_csv: cannot open " + path.string());
    os << "t,E,dE_dt_est,mt_l2sq,grad_m_l2sq,m_l2gamma,grad_p_l2sq,mgradp_l2sq,"
          "m_linf,dp_to_semitrivial_h1\n";
    for (const EnergyRecord& r : records) {
        put(os, r.t, ',');
        put(os, r.energy, ',');
        put(os, r.dE_dt_est, ',');
        put(os, r.mt_l2sq, ',');
        put(os, r.norms.grad_m_l2sq, ',');
        put(os, r.norms.m_l2gamma, ',');
        put(os, r.norms.grad_p_l2sq, ',');
        put(os, r.norms.mgradp_l2sq, ',');
        put(os, r.norms.m_linf, ',');
        put(os, r.dp_semitrivial, '\n');
    }
    if (!os) throw std::runtime_error("write_trajectory_csv: write failed");
}

void write_ledger_csv(const std::filesystem::path& path, const LemmaRatioLedger& led) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_ledger_csv: cannot open " + path.string());
    os << "t,dp_h2_ratio,dm_h2_ratio,dp_h2_ratio_runmax,dm_h2_ratio_runmax\n";
    for (std::size_t k = 0; k < led.t.size(); ++k) {
        put(os, led.t[k], ',');
        put(os, led.dp_h2_ratio[k], ',');
        put(os, led.dm_h2_ratio[k], ',');
        put(os, led.dp_h2_ratio_runmax[k], ',');
        put(os, led.dm_h2_ratio_runmax[k], '\n');
    }
    if (!os) throw std::runtime_error("write_ledger_csv: write failed");
}

} // namespace btn
