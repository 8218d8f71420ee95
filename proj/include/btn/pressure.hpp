#ifndef BTN_PRESSURE_HPP
#define BTN_PRESSURE_HPP

#include <stdexcept>

#include "btn/field.hpp"
#include "btn/linalg.hpp"

namespace btn {

/// Per-node symmetric permeability tensor I + m(x)m, stored as the three
/// distinct entries. Eigenvalues are 1 and 1 + |m|^2, so the tensor never
/// drops below the identity.
struct PermeabilityField {
    GridPtr grid;
    std::vector<double> a11, a12, a22;

    static PermeabilityField from_conductance(const VectorField2& m);
    /// trace >= 2 and det >= 1 (up to rounding) at every node.
    bool eigenvalues_at_least_one(double eps = 1e-12) const;
};

/// Discrete pressure operator over interior nodes, 9-point stencil,
/// symmetric positive definite. Stored in FD scaling: A p = S restricted to
/// the interior; the associated energy is hx*hy * p^T A p.
class SparseOperator {
public:
    SparseOperator(GridPtr grid, CsrMatrix mat)
        : grid_(std::move(grid)), mat_(std::move(mat)) {}

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const CsrMatrix& matrix() const { return mat_; }
    int dimension() const { return mat_.n; }

    /// Interior-node linear index (i,j both in [1, n-2]).
    int interior_index(int i, int j) const {
        return (j - 1) * (grid_->nx - 2) + (i - 1);
    }

private:
    GridPtr grid_;
    CsrMatrix mat_;
};

/// Assemble -div[(I + m(x)m) grad p] with homogeneous Dirichlet data.
/// Flux form: each interior edge carries the arithmetic mean of the tensors
/// at its two endpoint nodes; the cross-derivative terms are symmetrized so
/// A == A^T exactly and A reduces to the five-point Laplacian when m == 0.
SparseOperator assemble_pressure_operator(const VectorField2& m);

/// CG failure diagnostic: carries the relative-residual history so an
/// assembly bug (A not SPD) is distinguishable from a tolerance problem.
struct SolveError : std::runtime_error {
    SolveError(const std::string& msg, std::vector<double> hist)
        : std::runtime_error(msg), residual_history(std::move(hist)) {}
    std::vector<double> residual_history;
};

/// Solve the pressure problem to relative residual <= tol with
/// Jacobi-preconditioned CG (iteration cap 20*sqrt(N)). The result is
/// boundary-zero. `guess` warm-starts the iteration when given.
ScalarField solve_pressure(const VectorField2& m, const ScalarField& S, double tol,
                           const ScalarField* guess = nullptr);

/// The semi-trivial Poisson problem -lap p = S: identical to solve_pressure
/// with m == 0, including the iteration path.
ScalarField solve_semi_trivial(const ScalarField& S, double tol);

/// Dense-Cholesky oracle path for tests (interior dimension <= 4096).
ScalarField solve_pressure_direct(const VectorField2& m, const ScalarField& S);

/// | int |grad p|^2 + int (m.grad p)^2 - int p S | / max(1, |int p S|),
/// all three integrals evaluated with the assembly stencils.
double pressure_identity_residual(const VectorField2& m, const ScalarField& p,
                                  const ScalarField& S);

} // namespace btn

#endif
