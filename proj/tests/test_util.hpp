#ifndef BTN_TEST_UTIL_HPP
#define BTN_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <random>

#include "btn/field.hpp"

namespace btn::test {

inline ScalarField field_of(const GridPtr& grid,
                            const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    const Grid& g = *grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = f(g.x(i), g.y(j));
    return out;
}

/// Random low-frequency sine series; boundary-zero and smooth by construction.
inline ScalarField random_smooth(const GridPtr& grid, std::uint64_t seed,
                                 double amplitude = 1.0, int nmodes = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarField out(grid);
    const Grid& g = *grid;
    for (int k = 1; k <= nmodes; ++k)
        for (int l = 1; l <= nmodes; ++l) {
            const double a = amplitude * u(rng) / (k * k + l * l);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    out(i, j) += a * std::sin(k * M_PI * g.x(i) / g.lx) *
                                 std::sin(l * M_PI * g.y(j) / g.ly);
        }
    out.zero_boundary();
    return out;
}

inline VectorField2 random_smooth_vec(const GridPtr& grid, std::uint64_t seed,
                                      double amplitude = 1.0) {
    return VectorField2(random_smooth(grid, seed, amplitude),
                        random_smooth(grid, seed + 1000, amplitude));
}

inline double max_interior_diff(const ScalarField& a, const ScalarField& b) {
    const Grid& g = a.grid();
    double worst = 0.0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

} // namespace btn::test

#endif
