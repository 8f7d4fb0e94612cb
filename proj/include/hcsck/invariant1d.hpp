#pragma once

// Translation-invariant states on the torus: the rank-one family
// xi = [[c, F(y1)], [F, F^2/c]] solves the complex moment map for any
// periodic F, and the real moment map collapses to the pointwise closure
//   |F/c|^2 + (1 + phi) = 2x / (|c|^2 + x^2),   x = k + (1 + phi)^{-1},
// coupled to the zero-mean condition on phi = f''.  (The inverse enters
// through the Abreu form of the scalar-curvature term; see cubic_roots.)

#include "hcsck/hk_torus.hpp"

#include <vector>

namespace hcsck {

struct Inv1DProblem {
    cplx c;                // constant xi^{11}, nonzero
    std::vector<cplx> F;   // samples of the off-diagonal datum on y1 = i/n
    int n = 0;

    static Inv1DProblem cosine(cplx c, cplx amplitude, int n);
};

struct Inv1DBounds {
    double k_plus_1 = 0.0;          // must lie in [0, |c|]
    double min_one_plus_phi = 0.0;  // must be >= 1 - |c|
    double max_p = 0.0;             // p = (1+phi)|c|^2 + |F|^2
    double coarse_bound = 0.0;      // |c|^2 (3 + |c|), strict upper bound for p
    double nonsing_margin = 0.0;    // min over nodes of |c|^2 (1 - eps) - p^2
    bool hold = false;
};

struct Inv1DSolution {
    std::vector<double> phi; // zero mean
    double k = 0.0;
    std::vector<double> f;   // spectral double antiderivative of phi, zero mean
    double residual_sup = 0.0;
    double mean_phi = 0.0;
    Inv1DBounds bounds;
    bool multiple_sign_changes = false; // bracket scan saw more than one root
};

struct Inv1DOptions {
    double bracket_lo = -1.0; // default lower end of the k bracket
    double bracket_hi_shift = 0.0; // added to |c| - 1
    int prescan = 128;
};

// Real roots x of the cleared closure
//   (|F/c|^2) x^3 - (1 + k|F/c|^2) x^2 + (|F|^2 + 2k) x + |c|^2 - k|F|^2 = 0,
// kept when x is in (0, 1 + |c|], 1 + phi = 1/(x - k) >= 1 - |c|, and
// p = (1+phi)|c|^2 + |F|^2 <= |c|; ascending order.  Degenerates to a
// quadratic as F -> 0, whose admissible root at k = -sqrt(1 - |c|^2) is
// x = 1 + k.
std::vector<double> cubic_roots(double cmod, double Fmod, double k);

// xi = [[c, F], [F, F^2/c]]; det xi = 0 identically.
HiggsField assemble_xi(const Inv1DProblem& p);

Inv1DSolution solve_inv1d(const Inv1DProblem& p, const Inv1DOptions& opts = {});

// embed as a y2-independent state: u = |y|^2/2 + f(y1), xi as assembled
std::pair<SymplecticPotential, HiggsField> lift_to_torus(const Inv1DProblem& p,
                                                         const Inv1DSolution& sol);

std::string inv1d_to_csv(const Inv1DProblem& p, const Inv1DSolution& sol);
std::string inv1d_report_json(const Inv1DProblem& p, const Inv1DSolution& sol);

} // namespace hcsck
