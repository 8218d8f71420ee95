#include "btn/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace btn {

VectorField2 gradient(const ScalarField& f) {
    if (!f.all_finite())
        throw std::invalid_argument("gradient: input field has non-finite values");
    const Grid& g = f.grid();
    VectorField2 df(f.grid_ptr());
    const double ax = 1.0 / (2.0 * g.hx);
    const double ay = 1.0 / (2.0 * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double dx;
            if (i == 0)
                dx = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) * ax;
            else if (i == g.nx - 1)
                dx = (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) * ax;
            else
                dx = (f(i + 1, j) - f(i - 1, j)) * ax;
            double dy;
            if (j == 0)
                dy = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) * ay;
            else if (j == g.ny - 1)
                dy = (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) * ay;
            else
                dy = (f(i, j + 1) - f(i, j - 1)) * ay;
            df.c1(i, j) = dx;
            df.c2(i, j) = dy;
        }
    }
    return df;
}

ScalarField laplacian_dirichlet(const ScalarField& f) {
    if (!f.boundary_is_zero())
        throw std::invalid_argument("laplacian_dirichlet: field is not boundary-zero");
    const Grid& g = f.grid();
    ScalarField out(f.grid_ptr());
    const double cx = 1.0 / (g.hx * g.hx);
    const double cy = 1.0 / (g.hy * g.hy);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i)
            out(i, j) = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) * cx +
                        (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) * cy;
    return out;
}

double integrate(const ScalarField& f) {
    const Grid& g = f.grid();
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
            row += wx * f(i, j);
        }
        sum += wy * row;
    }
    return sum * g.hx * g.hy;
}

double integrate_product(const ScalarField& a, const ScalarField& b) {
    const Grid& g = a.grid();
    if (!g.same_geometry(b.grid()))
        throw std::invalid_argument("integrate_product: grid mismatch");
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
            row += wx * a(i, j) * b(i, j);
        }
        sum += wy * row;
    }
    return sum * g.hx * g.hy;
}

double dirichlet_energy(const ScalarField& f) {
    const Grid& g = f.grid();
    const double w = g.hx * g.hy;
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx - 1; ++i) {
            const double d = (f(i + 1, j) - f(i, j)) / g.hx;
            sum += w * d * d;
        }
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (f(i, j + 1) - f(i, j)) / g.hy;
            sum += w * d * d;
        }
    return sum;
}

double dirichlet_energy(const VectorField2& m) {
    return dirichlet_energy(m.c1) + dirichlet_energy(m.c2);
}

double anisotropy_energy(const VectorField2& m, const ScalarField& u) {
    const Grid& g = u.grid();
    if (!g.same_geometry(m.grid()))
        throw std::invalid_argument("anisotropy_energy: grid mismatch");
    const double w = g.hx * g.hy;
    const ScalarField& m1 = m.c1;
    const ScalarField& m2 = m.c2;
    double sum = 0.0;
    // x-edges (i,j)-(i+1,j), j interior; edges on the boundary rows carry a
    // vanishing tensor since m == 0 there.
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx - 1; ++i) {
            const double k11m = 0.5 * (m1(i, j) * m1(i, j) + m1(i + 1, j) * m1(i + 1, j));
            const double k12 = 0.5 * (m1(i, j) * m2(i, j) + m1(i + 1, j) * m2(i + 1, j));
            const double dx = (u(i + 1, j) - u(i, j)) / g.hx;
            const double dyb = (u(i, j + 1) - u(i, j - 1) +
                                u(i + 1, j + 1) - u(i + 1, j - 1)) / (4.0 * g.hy);
            sum += w * (k11m * dx * dx + k12 * dx * dyb);
        }
    // y-edges (i,j)-(i,j+1), i interior
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            const double k22m = 0.5 * (m2(i, j) * m2(i, j) + m2(i, j + 1) * m2(i, j + 1));
            const double k12 = 0.5 * (m1(i, j) * m2(i, j) + m1(i, j + 1) * m2(i, j + 1));
            const double dy = (u(i, j + 1) - u(i, j)) / g.hy;
            const double dxb = (u(i + 1, j) - u(i - 1, j) +
                                u(i + 1, j + 1) - u(i - 1, j + 1)) / (4.0 * g.hx);
            sum += w * (k22m * dy * dy + k12 * dy * dxb);
        }
    return sum;
}

NormSample norm_suite(const VectorField2& m, const ScalarField& p, double gamma) {
    if (gamma < 1.0)
        throw std::invalid_argument("norm_suite: gamma must be >= 1");
    if (!m.boundary_is_zero() || !p.boundary_is_zero())
        throw std::invalid_argument("norm_suite: m and p must be boundary-zero");

    NormSample s;
    s.grad_p_l2sq = dirichlet_energy(p);
    s.mgradp_l2sq = anisotropy_energy(m, p);
    s.grad_m_l2sq = dirichlet_energy(m);
    {
        ScalarField mag(p.grid_ptr());
        const auto a = m.c1.values(), b = m.c2.values();
        for (int k = 0; k < mag.size(); ++k) {
            const double q = a[k] * a[k] + b[k] * b[k];
            mag[k] = (gamma == 1.0) ? q : std::pow(q, gamma);
            s.m_linf = std::max(s.m_linf, std::sqrt(q));
        }
        s.m_l2gamma = integrate(mag);
    }
    {
        ScalarField l1 = laplacian_dirichlet(m.c1);
        ScalarField l2 = laplacian_dirichlet(m.c2);
        s.lap_m_l2sq = integrate_product(l1, l1) + integrate_product(l2, l2);
        ScalarField lp = laplacian_dirichlet(p);
        s.lap_p_l2sq = integrate_product(lp, lp);
    }
    return s;
}

} // namespace btn
