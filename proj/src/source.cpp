#include "btn/source.hpp"

#include <cmath>
#include <stdexcept>

namespace btn {

SourceSpec SourceSpec::default_dipole() {
    return SourceSpec{{GaussianTerm{0.25, 0.5, 80.0, 0.08},
                       GaussianTerm{0.75, 0.5, -80.0, 0.08}}};
}

void SourceSpec::validate() const {
    if (terms.empty())
        throw std::invalid_argument("source: needs at least one Gaussian term");
    for (const GaussianTerm& t : terms) {
        if (!(t.sigma > 0.0))
            throw std::invalid_argument("source: sigma must be > 0");
        if (!std::isfinite(t.cx) || !std::isfinite(t.cy) || !std::isfinite(t.amplitude) ||
            !std::isfinite(t.sigma))
            throw std::invalid_argument("source: non-finite Gaussian parameter");
    }
}

ScalarField SourceSpec::evaluate(const GridPtr& grid) const {
    validate();
    ScalarField S(grid);
    const Grid& g = *grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            double s = 0.0;
            for (const GaussianTerm& t : terms) {
                const double dx = x - t.cx, dy = y - t.cy;
                s += t.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * t.sigma * t.sigma));
            }
            S(i, j) = s;
        }
    return S;
}

} // namespace btn
