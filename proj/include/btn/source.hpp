#ifndef BTN_SOURCE_HPP
#define BTN_SOURCE_HPP

#include <vector>

#include "btn/field.hpp"

namespace btn {

/// Sum-of-Gaussians source/sink profile:
///   S(x,y) = sum_k amp_k * exp(-((x-cx_k)^2 + (y-cy_k)^2) / (2 sigma_k^2)).
struct GaussianTerm {
    double cx = 0.0;
    double cy = 0.0;
    double amplitude = 0.0;  // sign distinguishes source from sink
    double sigma = 0.0;      // > 0
};

struct SourceSpec {
    std::vector<GaussianTerm> terms;

    /// Source/sink dipole on the domain midline; strong enough to excite a
    /// nontrivial conductance pattern once kappa is small.
    static SourceSpec default_dipole();

    void validate() const;  // at least one term, sigma > 0, finite params
    ScalarField evaluate(const GridPtr& grid) const;
    bool operator==(const SourceSpec&) const = default;
};

inline bool operator==(const GaussianTerm& a, const GaussianTerm& b) {
    return a.cx == b.cx && a.cy == b.cy && a.amplitude == b.amplitude && a.sigma == b.sigma;
}

} // namespace btn

#endif
