#ifndef BTN_DYNAMICS_HPP
#define BTN_DYNAMICS_HPP

#include <cstdint>
#include <optional>

#include "btn/analysis.hpp"
#include "btn/field.hpp"
#include "btn/linalg.hpp"
#include "btn/source.hpp"

namespace btn {

/// Initial conductance field. All kinds produce smooth boundary-zero data.
struct InitialCondition {
    enum class Kind { Zero, Sines, Modes };
    Kind kind = Kind::Sines;
    double amplitude = 0.5;   // Sines, Modes
    double dir_x = 1.0;       // Sines: m0 = A (dx, dy) sin(pi x/lx) sin(pi y/ly)
    double dir_y = 0.5;
    std::uint64_t seed = 1;   // Modes: random low-frequency sine series
    int nmodes = 3;

    static InitialCondition zero() { return {Kind::Zero, 0.0, 0.0, 0.0, 0, 0}; }
    static InitialCondition sines(double a, double dx, double dy) {
        return {Kind::Sines, a, dx, dy, 0, 0};
    }
    static InitialCondition modes(std::uint64_t seed, double a, int n) {
        return {Kind::Modes, a, 0.0, 0.0, seed, n};
    }

    void validate() const;
    VectorField2 evaluate(const GridPtr& grid) const;
    /// Equality over the fields the kind actually uses.
    bool operator==(const InitialCondition& o) const;
};

struct SimulationConfig {
    double kappa = 1.0;
    double gamma = 1.0;
    double dt = 1e-3;
    double t_end = 1.0;
    int nx = 65;
    int ny = 65;
    double lx = 1.0;
    double ly = 1.0;
    double cg_tol = 1e-10;
    int record_every = 1;
    SourceSpec source = SourceSpec::default_dipole();
    InitialCondition init;

    void validate() const;  // throws ConfigError naming the failed constraint
    GridPtr make_grid() const { return btn::make_grid(nx, ny, lx, ly); }
    bool operator==(const SimulationConfig&) const = default;
};

/// Named validation failure; `line` is set when raised by the config parser.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg, int line_ = 0)
        : std::runtime_error(msg), line(line_) {}
    int line;
};

/// Pointwise |m|^(2(gamma-1)) m. The prefactor is 1 when gamma == 1 and 0
/// at nodes where m vanishes for gamma > 1 (no 0 * inf).
VectorField2 reaction(const VectorField2& m, double gamma);

/// Pointwise (m . grad p) grad p with the nodal gradient; boundary nodes of
/// the output are forced to zero (m vanishes there).
VectorField2 activation(const VectorField2& m, const ScalarField& p);

/// Linearized-stability bound for the explicit terms:
/// dt <= 0.5 / (1 + ||grad p||_inf^2 + |||m|^(2(gamma-1))||_inf).
double explicit_dt_bound(const VectorField2& m, const ScalarField& p, double gamma);

/// Relative residual ||A(m) p - S|| / ||S|| of the interior pressure system.
double pressure_residual(const VectorField2& m, const ScalarField& p,
                         const ScalarField& S);

struct SimulationState {
    double t = 0.0;
    int step_index = 0;
    VectorField2 m;
    ScalarField p;
};

/// One IMEX backward-Euler step: diffusion implicit, reaction and activation
/// explicit, then the pressure re-solve. Owns the factor-free implicit
/// operator (I - dt kappa lap) so repeated steps reuse the assembly.
class Stepper {
public:
    Stepper(GridPtr grid, ScalarField S, const SimulationConfig& cfg);

    double dt() const { return dt_; }
    void set_dt(double dt);  // rebuilds the implicit operator
    const ScalarField& source() const { return S_; }

    /// Throws SolveError when an inner CG fails.
    SimulationState advance(const SimulationState& s) const;

private:
    GridPtr grid_;
    ScalarField S_;
    double kappa_, gamma_, cg_tol_;
    double dt_ = 0.0;
    CsrMatrix implicit_;  // (I - dt kappa lap) over interior nodes
};

/// Single free-standing step, for tests and one-off use.
SimulationState step(const SimulationState& s, const ScalarField& S,
                     const SimulationConfig& cfg);

struct RunResult {
    std::vector<EnergyRecord> records;
    SimulationState final_state;
    ScalarField semi_trivial;  ///< Poisson solution for the configured source
    bool any_energy_increase = false;
    bool dt_bound_violated = false;  ///< cfg.dt exceeded the explicit-term bound at some step
    int steps = 0;
};

/// Initialize (m0, p0), march to t_end, record every record_every steps
/// (first and last always included).
RunResult run(const SimulationConfig& cfg);

} // namespace btn

#endif
