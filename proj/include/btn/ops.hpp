#ifndef BTN_OPS_HPP
#define BTN_OPS_HPP

#include "btn/field.hpp"

namespace btn {

/// Nodal gradient: second-order central differences at interior nodes,
/// one-sided second-order stencils on the boundary. The result carries
/// whatever boundary values the stencils produce (no zero tag).
VectorField2 gradient(const ScalarField& f);

/// Five-point Laplacian acting on the zero-trace subspace: interior nodes
/// get the standard stencil, boundary nodes of the output are 0.
/// Requires f to be exactly zero on the boundary.
ScalarField laplacian_dirichlet(const ScalarField& f);

/// Trapezoidal quadrature: sum of w_ij * f_ij * hx * hy with corner weight
/// 1/4, edge weight 1/2, interior weight 1. Exact on fields affine in x, y.
double integrate(const ScalarField& f);

/// integrate(a*b) without materializing the product field.
double integrate_product(const ScalarField& a, const ScalarField& b);

// Assembly-consistent quadratic forms. These are the discrete counterparts
// of the gradient seminorms used by the pressure operator: edge differences
// weighted by hx*hy, so that for zero-trace u, v
//     sum_edges (Du)(Dv) hx hy  ==  -integrate(v * laplacian_dirichlet(u))
// holds to rounding (exact summation by parts).

/// Edge-based discrete integral of |grad f|^2.
double dirichlet_energy(const ScalarField& f);
double dirichlet_energy(const VectorField2& m);

/// Edge-based discrete integral of (m . grad u)^2, evaluated with the same
/// edge-averaged tensor terms the pressure assembly uses: the m(x)m part of
/// u^T A u. Can be a couple of ulps negative when m is rough; callers treat
/// it as a seminorm.
double anisotropy_energy(const VectorField2& m, const ScalarField& u);

/// The norm quantities tracked along a trajectory.
struct NormSample {
    double grad_p_l2sq = 0.0;  ///< edge form of |grad p|^2
    double mgradp_l2sq = 0.0;  ///< edge form of (m . grad p)^2
    double grad_m_l2sq = 0.0;  ///< edge form over both components of m
    double m_l2gamma = 0.0;    ///< integral of |m|^(2*gamma)
    double lap_m_l2sq = 0.0;   ///< integral of |Delta m|^2 (five-point)
    double lap_p_l2sq = 0.0;   ///< integral of (Delta p)^2 (five-point)
    double m_linf = 0.0;       ///< max_x |m(x)|
};

/// Evaluate the full suite. Requires m and p boundary-zero and gamma >= 1.
NormSample norm_suite(const VectorField2& m, const ScalarField& p, double gamma);

} // namespace btn

#endif
