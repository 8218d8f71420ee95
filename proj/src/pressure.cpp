#include "btn/pressure.hpp"

#include <cmath>

#include "btn/ops.hpp"

namespace btn {

PermeabilityField PermeabilityField::from_conductance(const VectorField2& m) {
    PermeabilityField k;
    k.grid = m.grid_ptr();
    const auto m1 = m.c1.values(), m2 = m.c2.values();
    const std::size_t n = m1.size();
    k.a11.resize(n);
    k.a12.resize(n);
    k.a22.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
        k.a11[q] = 1.0 + m1[q] * m1[q];
        k.a12[q] = m1[q] * m2[q];
        k.a22[q] = 1.0 + m2[q] * m2[q];
    }
    return k;
}

bool PermeabilityField::eigenvalues_at_least_one(double eps) const {
    for (std::size_t q = 0; q < a11.size(); ++q) {
        if (a11[q] + a22[q] < 2.0 - eps) return false;
        if (a11[q] * a22[q] - a12[q] * a12[q] < 1.0 - eps) return false;
    }
    return true;
}

SparseOperator assemble_pressure_operator(const VectorField2& m) {
    if (!m.all_finite())
        throw std::invalid_argument("assemble_pressure_operator: m has non-finite values");
    if (!m.boundary_is_zero())
        throw std::invalid_argument("assemble_pressure_operator: m is not boundary-zero");

    const GridPtr gp = m.grid_ptr();
    const Grid& g = *gp;
    const int nx = g.nx, ny = g.ny;
    const int nin = g.num_interior();
    const PermeabilityField K = PermeabilityField::from_conductance(m);

    auto interior = [&](int i, int j) { return (j - 1) * (nx - 2) + (i - 1); };
    auto is_interior = [&](int i, int j) {
        return i >= 1 && i <= nx - 2 && j >= 1 && j <= ny - 2;
    };

    CsrBuilder builder(nin);
    // Scatter of the symmetric bilinear form, FD scaling (the hx*hy edge
    // weight divided back out). Boundary basis functions are dropped, which
    // imposes the Dirichlet condition.
    auto add_pair = [&](int ia, int ja, double ca, int ib, int jb, double cb,
                        double coeff) {
        if (coeff == 0.0) return;
        if (!is_interior(ia, ja) || !is_interior(ib, jb)) return;
        builder.add(interior(ia, ja), interior(ib, jb), coeff * ca * cb);
    };

    struct Term { int i, j; double c; };

    // x-edges (i,j)-(i+1,j) with j interior. Boundary-row edges carry a zero
    // tensor difference (m == 0 there) and only touch boundary test
    // functions for the identity part, so skipping j = 0, ny-1 is exact.
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 0; i < nx - 1; ++i) {
            const int a = g.node(i, j), b = g.node(i + 1, j);
            const double k11 = 0.5 * (K.a11[a] + K.a11[b]);
            const double k12 = 0.5 * (K.a12[a] + K.a12[b]);
            const Term dx[2] = {{i, j, -1.0 / g.hx}, {i + 1, j, 1.0 / g.hx}};
            const Term dyb[4] = {{i, j + 1, 0.25 / g.hy}, {i, j - 1, -0.25 / g.hy},
                                 {i + 1, j + 1, 0.25 / g.hy}, {i + 1, j - 1, -0.25 / g.hy}};
            for (const Term& u : dx)
                for (const Term& v : dx)
                    add_pair(u.i, u.j, u.c, v.i, v.j, v.c, k11);
            // symmetrized cross terms: k12/2 [(Dx u)(Dy~ v) + (Dy~ u)(Dx v)]
            for (const Term& u : dx)
                for (const Term& v : dyb) {
                    add_pair(u.i, u.j, u.c, v.i, v.j, v.c, 0.5 * k12);
                    add_pair(v.i, v.j, v.c, u.i, u.j, u.c, 0.5 * k12);
                }
        }
    }
    // y-edges (i,j)-(i,j+1) with i interior
    for (int j = 0; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const int a = g.node(i, j), b = g.node(i, j + 1);
            const double k22 = 0.5 * (K.a22[a] + K.a22[b]);
            const double k12 = 0.5 * (K.a12[a] + K.a12[b]);
            const Term dy[2] = {{i, j, -1.0 / g.hy}, {i, j + 1, 1.0 / g.hy}};
            const Term dxb[4] = {{i + 1, j, 0.25 / g.hx}, {i - 1, j, -0.25 / g.hx},
                                 {i + 1, j + 1, 0.25 / g.hx}, {i - 1, j + 1, -0.25 / g.hx}};
            for (const Term& u : dy)
                for (const Term& v : dy)
                    add_pair(u.i, u.j, u.c, v.i, v.j, v.c, k22);
            for (const Term& u : dy)
                for (const Term& v : dxb) {
                    add_pair(u.i, u.j, u.c, v.i, v.j, v.c, 0.5 * k12);
                    add_pair(v.i, v.j, v.c, u.i, u.j, u.c, 0.5 * k12);
                }
        }
    }
    return SparseOperator(gp, builder.build());
}

namespace {

std::vector<double> restrict_interior(const ScalarField& f) {
    const Grid& g = f.grid();
    std::vector<double> out(static_cast<std::size_t>(g.num_interior()));
    std::size_t k = 0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i)
            out[k++] = f(i, j);
    return out;
}

ScalarField extend_zero(GridPtr gp, std::span<const double> interior) {
    ScalarField f(std::move(gp));
    const Grid& g = f.grid();
    std::size_t k = 0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i)
            f(i, j) = interior[k++];
    return f;
}

} // namespace

ScalarField solve_pressure(const VectorField2& m, const ScalarField& S, double tol,
                           const ScalarField* guess) {
    if (!(tol > 0.0))
        throw std::invalid_argument("solve_pressure: tol must be positive");
    if (!S.all_finite())
        throw std::invalid_argument("solve_pressure: S has non-finite values");
    if (!S.grid().same_geometry(m.grid()))
        throw std::invalid_argument("solve_pressure: grid mismatch between m and S");

    const SparseOperator A = assemble_pressure_operator(m);
    const std::vector<double> b = restrict_interior(S);
    std::vector<double> x(b.size(), 0.0);
    if (guess != nullptr) {
        if (!guess->grid().same_geometry(m.grid()))
            throw std::invalid_argument("solve_pressure: guess grid mismatch");
        x = restrict_interior(*guess);
    }
    const int cap = static_cast<int>(20.0 * std::sqrt(static_cast<double>(A.dimension()))) + 10;
    CgResult r = pcg_jacobi(A.matrix(), b, x, tol, cap);
    if (!r.converged)
        throw SolveError("solve_pressure: CG failed to reach tol " + std::to_string(tol) +
                             " within " + std::to_string(cap) + " iterations (A should be SPD;" +
                             " suspect assembly)",
                         std::move(r.history));
    return extend_zero(m.grid_ptr(), x);
}

ScalarField solve_semi_trivial(const ScalarField& S, double tol) {
    VectorField2 zero(S.grid_ptr());
    return solve_pressure(zero, S, tol);
}

ScalarField solve_pressure_direct(const VectorField2& m, const ScalarField& S) {
    const SparseOperator A = assemble_pressure_operator(m);
    const std::vector<double> b = restrict_interior(S);
    std::vector<double> x = dense_cholesky_solve(A.matrix(), b);
    return extend_zero(m.grid_ptr(), x);
}

double pressure_identity_residual(const VectorField2& m, const ScalarField& p,
                                  const ScalarField& S) {
    const double lhs = dirichlet_energy(p) + anisotropy_energy(m, p);
    const double rhs = integrate_product(p, S);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

} // namespace btn
