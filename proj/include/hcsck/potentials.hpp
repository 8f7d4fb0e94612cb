#pragma once

// Symplectic potentials u(y) = 1/2 y^T Q y + h(y) on the torus, their
// Hessians G = Q + Hess h, Abreu's scalar-curvature operator, and Legendre
// duality with potentials in complex coordinates.

#include "hcsck/grid.hpp"

namespace hcsck {

struct SymplecticPotential {
    RSym2 Q{1.0, 0.0, 1.0}; // quadratic part, symmetric positive-definite
    RealField h;            // periodic perturbation, zero mean

    SymplecticPotential() = default;
    explicit SymplecticPotential(TorusGrid g) : h(g) {}
    SymplecticPotential(RSym2 q, RealField hh);

    const TorusGrid& grid() const { return h.grid; }
};

// G(y) = Q + Hess h(y); throws degenerate_potential_error naming the first
// node where positive-definiteness fails.
RSym2Field hessian(const SymplecticPotential& u);

// pointwise inverse of a positive-definite field
RSym2Field invert(const RSym2Field& g);

// S = -1/4 (u^{ab})_{,ab}; mean-free by its divergence structure.
RealField abreu_scalar(const SymplecticPotential& u);

// Potential in complex coordinates, v(x) = 1/2 x^T Q x + h(x), with the same
// storage; kept as a distinct name for readability at call sites.
using ComplexPotential = SymplecticPotential;

// Legendre transform u of a strongly convex v: per-node Newton inversion of
// grad v (tolerance 1e-12, <= 50 iterations).  The periodic part requires
// Q = I so that y = x + grad h maps the torus to itself; a general symmetric
// positive-definite Q is accepted when h = 0 (quadratic duality u = y^T Q^{-1} y / 2).
SymplecticPotential legendre(const ComplexPotential& v, Exec exec = default_exec());

// Dual node positions x(y) found by the same inversion, for cross-coordinate
// comparisons.
Field<std::array<double, 2>> legendre_dual_points(const ComplexPotential& v,
                                                  Exec exec = default_exec());

// Scalar curvature computed directly in complex coordinates,
// S = -1/4 v^{ab} d_b (v^{cd} d_c v_{,ad}), on the x-grid.
RealField complex_side_scalar(const ComplexPotential& v);

std::string potential_to_json(const SymplecticPotential& u);
SymplecticPotential potential_from_json(const std::string& text);

} // namespace hcsck
