#include "btn/dynamics.hpp"

#include <cmath>
#include <random>

#include "btn/ops.hpp"
#include "btn/pressure.hpp"

namespace btn {

bool InitialCondition::operator==(const InitialCondition& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Zero:
            return true;
        case Kind::Sines:
            return amplitude == o.amplitude && dir_x == o.dir_x && dir_y == o.dir_y;
        case Kind::Modes:
            return amplitude == o.amplitude && seed == o.seed && nmodes == o.nmodes;
    }
    return false;
}

void InitialCondition::validate() const {
    if (kind == Kind::Zero) return;
    if (!std::isfinite(amplitude))
        throw ConfigError("init: amplitude must be finite");
    if (kind == Kind::Sines && !(std::isfinite(dir_x) && std::isfinite(dir_y)))
        throw ConfigError("init: direction must be finite");
    if (kind == Kind::Modes && nmodes < 1)
        throw ConfigError("init: modes kind needs nmodes >= 1");
}

VectorField2 InitialCondition::evaluate(const GridPtr& grid) const {
    validate();
    VectorField2 m(grid);
    const Grid& g = *grid;
    if (kind == Kind::Zero) return m;
    if (kind == Kind::Sines) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double env = std::sin(M_PI * g.x(i) / g.lx) *
                                   std::sin(M_PI * g.y(j) / g.ly);
                m.c1(i, j) = amplitude * dir_x * env;
                m.c2(i, j) = amplitude * dir_y * env;
            }
    } else {
        // random low-frequency sine series, 1/(k^2+l^2) spectral decay
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (ScalarField* c : {&m.c1, &m.c2}) {
            for (int k = 1; k <= nmodes; ++k)
                for (int l = 1; l <= nmodes; ++l) {
                    const double a = amplitude * u(rng) / (k * k + l * l);
                    for (int j = 0; j < g.ny; ++j)
                        for (int i = 0; i < g.nx; ++i)
                            (*c)(i, j) += a * std::sin(k * M_PI * g.x(i) / g.lx) *
                                          std::sin(l * M_PI * g.y(j) / g.ly);
                }
        }
    }
    m.zero_boundary();
    return m;
}

void SimulationConfig::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw ConfigError("kappa must be > 0");
    if (!(gamma >= 1.0) || !std::isfinite(gamma))
        throw ConfigError("gamma must be >= 1 (got " + std::to_string(gamma) + ")");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw ConfigError("t_end must be >= 0");
    if (nx < 3 || ny < 3)
        throw ConfigError("grid must have nx >= 3 and ny >= 3");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw ConfigError("lx and ly must be > 0");
    if (!(cg_tol > 0.0))
        throw ConfigError("cg_tol must be > 0");
    if (record_every < 1)
        throw ConfigError("record_every must be >= 1");
    source.validate();
    init.validate();
}

VectorField2 reaction(const VectorField2& m, double gamma) {
    if (gamma < 1.0)
        throw std::invalid_argument("reaction: gamma must be >= 1");
    VectorField2 out = m;
    if (gamma == 1.0) return out;
    const auto a = m.c1.values(), b = m.c2.values();
    for (int k = 0; k < out.c1.size(); ++k) {
        const double q = a[k] * a[k] + b[k] * b[k];
        const double pref = (q == 0.0) ? 0.0 : std::pow(q, gamma - 1.0);
        out.c1[k] = pref * a[k];
        out.c2[k] = pref * b[k];
    }
    return out;
}

VectorField2 activation(const VectorField2& m, const ScalarField& p) {
    if (!p.grid().same_geometry(m.grid()))
        throw std::invalid_argument("activation: grid mismatch");
    const VectorField2 gp = gradient(p);
    VectorField2 out(m.grid_ptr());
    const auto m1 = m.c1.values(), m2 = m.c2.values();
    const auto g1 = gp.c1.values(), g2 = gp.c2.values();
    for (int k = 0; k < out.c1.size(); ++k) {
        const double s = m1[k] * g1[k] + m2[k] * g2[k];
        out.c1[k] = s * g1[k];
        out.c2[k] = s * g2[k];
    }
    out.zero_boundary();
    return out;
}

double explicit_dt_bound(const VectorField2& m, const ScalarField& p, double gamma) {
    const VectorField2 gp = gradient(p);
    const auto g1 = gp.c1.values(), g2 = gp.c2.values();
    double grad2 = 0.0;
    for (std::size_t k = 0; k < g1.size(); ++k)
        grad2 = std::max(grad2, g1[k] * g1[k] + g2[k] * g2[k]);
    double pref = 0.0;
    if (gamma == 1.0) {
        pref = 1.0;
    } else {
        const auto a = m.c1.values(), b = m.c2.values();
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double q = a[k] * a[k] + b[k] * b[k];
            pref = std::max(pref, (q == 0.0) ? 0.0 : std::pow(q, gamma - 1.0));
        }
    }
    return 0.5 / (1.0 + grad2 + pref);
}

double pressure_residual(const VectorField2& m, const ScalarField& p,
                         const ScalarField& S) {
    const SparseOperator A = assemble_pressure_operator(m);
    const Grid& g = A.grid();
    std::vector<double> x(static_cast<std::size_t>(g.num_interior()));
    std::vector<double> b(x.size());
    std::size_t k = 0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i, ++k) {
            x[k] = p(i, j);
            b[k] = S(i, j);
        }
    std::vector<double> r(x.size());
    A.matrix().multiply(x, r);
    double rn = 0.0, bn = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
        const double d = r[q] - b[q];
        rn += d * d;
        bn += b[q] * b[q];
    }
    return bn > 0.0 ? std::sqrt(rn / bn) : std::sqrt(rn);
}

namespace {

CsrMatrix build_implicit(const Grid& g, double dt_kappa) {
    const int nx = g.nx, ny = g.ny;
    const double cx = dt_kappa / (g.hx * g.hx);
    const double cy = dt_kappa / (g.hy * g.hy);
    CsrBuilder builder(g.num_interior());
    auto interior = [&](int i, int j) { return (j - 1) * (nx - 2) + (i - 1); };
    for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i) {
            const int I = interior(i, j);
            builder.add(I, I, 1.0 + 2.0 * cx + 2.0 * cy);
            if (i > 1) builder.add(I, interior(i - 1, j), -cx);
            if (i < nx - 2) builder.add(I, interior(i + 1, j), -cx);
            if (j > 1) builder.add(I, interior(i, j - 1), -cy);
            if (j < ny - 2) builder.add(I, interior(i, j + 1), -cy);
        }
    return builder.build();
}

} // namespace

Stepper::Stepper(GridPtr grid, ScalarField S, const SimulationConfig& cfg)
    : grid_(std::move(grid)), S_(std::move(S)),
      kappa_(cfg.kappa), gamma_(cfg.gamma), cg_tol_(cfg.cg_tol) {
    set_dt(cfg.dt);
}

void Stepper::set_dt(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("Stepper: dt must be > 0");
    if (dt == dt_) return;
    dt_ = dt;
    implicit_ = build_implicit(*grid_, dt_ * kappa_);
}

SimulationState Stepper::advance(const SimulationState& s) const {
    const Grid& g = *grid_;
    const VectorField2 act = activation(s.m, s.p);
    const VectorField2 rea = reaction(s.m, gamma_);

    VectorField2 m_next(grid_);
    const int nin = g.num_interior();
    std::vector<double> rhs(static_cast<std::size_t>(nin));
    std::vector<double> x(static_cast<std::size_t>(nin));
    const int cap = static_cast<int>(20.0 * std::sqrt(static_cast<double>(nin))) + 10;

    const ScalarField* mc[2] = {&s.m.c1, &s.m.c2};
    const ScalarField* ac[2] = {&act.c1, &act.c2};
    const ScalarField* rc[2] = {&rea.c1, &rea.c2};
    ScalarField* out[2] = {&m_next.c1, &m_next.c2};
    for (int c = 0; c < 2; ++c) {
        std::size_t k = 0;
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i, ++k) {
                rhs[k] = (*mc[c])(i, j) + dt_ * ((*ac[c])(i, j) - (*rc[c])(i, j));
                x[k] = (*mc[c])(i, j);  // warm start from the current field
            }
        CgResult r = pcg_jacobi(implicit_, rhs, x, cg_tol_, cap);
        if (!r.converged)
            throw SolveError("step: implicit diffusion CG failed at t = " +
                                 std::to_string(s.t),
                             std::move(r.history));
        k = 0;
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i, ++k)
                (*out[c])(i, j) = x[k];
    }
    ScalarField p_next = solve_pressure(m_next, S_, cg_tol_, &s.p);
    return SimulationState{s.t + dt_, s.step_index + 1, std::move(m_next),
                           std::move(p_next)};
}

SimulationState step(const SimulationState& s, const ScalarField& S,
                     const SimulationConfig& cfg) {
    Stepper st(s.m.grid_ptr(), S, cfg);
    return st.advance(s);
}

namespace {

double mt_l2sq_between(const VectorField2& prev, const VectorField2& next, double dt) {
    ScalarField diff2(prev.grid_ptr());
    const auto p1 = prev.c1.values(), p2 = prev.c2.values();
    const auto n1 = next.c1.values(), n2 = next.c2.values();
    for (int k = 0; k < diff2.size(); ++k) {
        const double d1 = (n1[k] - p1[k]) / dt;
        const double d2 = (n2[k] - p2[k]) / dt;
        diff2[k] = d1 * d1 + d2 * d2;
    }
    return integrate(diff2);
}

double h1_proxy_distance(const ScalarField& p, const ScalarField& pstar) {
    ScalarField d(p.grid_ptr());
    for (int k = 0; k < d.size(); ++k) d[k] = p[k] - pstar[k];
    return std::sqrt(dirichlet_energy(d) + integrate_product(d, d));
}

} // namespace

RunResult run(const SimulationConfig& cfg) {
    cfg.validate();
    GridPtr grid = cfg.make_grid();
    ScalarField S = cfg.source.evaluate(grid);
    VectorField2 m0 = cfg.init.evaluate(grid);
    ScalarField p0 = solve_pressure(m0, S, cfg.cg_tol);
    ScalarField pstar = solve_semi_trivial(S, cfg.cg_tol);

    Stepper stepper(grid, S, cfg);
    SimulationState state{0.0, 0, std::move(m0), std::move(p0)};

    RunResult out{.records = {}, .final_state = state, .semi_trivial = pstar};
    const long nsteps = std::lround(cfg.t_end / cfg.dt);

    auto make_record = [&](const SimulationState& st, double mt, double dE_dt,
                           bool flag) {
        EnergyRecord r;
        r.t = st.t;
        r.energy = energy(st.m, st.p, cfg.kappa, cfg.gamma);
        r.dE_dt_est = dE_dt;
        r.mt_l2sq = mt;
        r.norms = norm_suite(st.m, st.p, cfg.gamma);
        r.dp_semitrivial = h1_proxy_distance(st.p, pstar);
        r.energy_increase_flag = flag;
        return r;
    };

    out.records.push_back(make_record(state, 0.0, 0.0, false));
    if (explicit_dt_bound(state.m, state.p, cfg.gamma) < cfg.dt)
        out.dt_bound_violated = true;

    VectorField2 prev_m = state.m;
    for (long n = 1; n <= nsteps; ++n) {
        prev_m = state.m;
        state = stepper.advance(state);
        if (explicit_dt_bound(state.m, state.p, cfg.gamma) < cfg.dt)
            out.dt_bound_violated = true;
        if (n % cfg.record_every == 0 || n == nsteps) {
            const double mt = mt_l2sq_between(prev_m, state.m, cfg.dt);
            const EnergyRecord& last = out.records.back();
            const double E = energy(state.m, state.p, cfg.kappa, cfg.gamma);
            const double dt_rec = state.t - last.t;
            const double dE = E - last.energy;
            const bool flag =
                dE > energy_increase_tolerance(dt_rec, mt, cfg.cg_tol);
            out.any_energy_increase |= flag;
            out.records.push_back(make_record(state, mt, dE / dt_rec, flag));
        }
    }
    out.final_state = std::move(state);
    out.steps = static_cast<int>(nsteps);
    return out;
}

} // namespace btn
