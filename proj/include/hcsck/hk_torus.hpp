#pragma once

// The real moment map on the torus: residual, periodic HK-energy, its exact
// L^2 gradient and second variation, a convexity probe along linear paths of
// potentials, and a damped-Newton solver over the Fourier coefficients of the
// periodic part of u.

#include "hcsck/higgs.hpp"

#include <optional>
#include <vector>

namespace hcsck {

// Admissible pair (u, xi) with the node-wise caches every evaluation needs.
class HKState {
  public:
    HKState(SymplecticPotential u, HiggsField xi, Exec exec = default_exec());

    const SymplecticPotential& u() const { return u_; }
    const HiggsField& xi() const { return xi_; }
    const RSym2Field& G() const { return g_; }
    const RSym2Field& Ginv() const { return ginv_; }
    const CMat2Field& X() const { return x_; }
    const std::vector<spectral::Spectrum2>& spectra() const { return spectra_; }
    // distance of the spectral radius below 1, minimized over nodes
    double admissibility_margin() const { return margin_; }

  private:
    SymplecticPotential u_;
    HiggsField xi_;
    RSym2Field g_, ginv_;
    CMat2Field x_;
    std::vector<spectral::Spectrum2> spectra_;
    double margin_ = 0.0;
};

// ((1 - xi G conj(xi) G)^{1/2} G^{-1})^{ab}_{,ab}; real with zero mean.  The
// imaginary part of the raw computation is checked below 1e-10.
RealField real_mm_residual(const HKState& s, Exec exec = default_exec());

// The same operator assembled through psi(X): -2 (-1/2 G^{-1} + psi(X) X G^{-1})^{ab}_{,ab}.
// Agrees with real_mm_residual to 1e-11; kept as an independent route.
RealField real_mm_residual_psi_route(const HKState& s, Exec exec = default_exec());

// F = -1/2 int log det G + 1/2 int rho; zero on the flat state.
double hk_energy(const HKState& s);

// L^2 gradient of the HK-energy: (-1/2 G^{-1} + psi(X) X G^{-1})^{ab}_{,ab};
// equals -1/2 * real_mm_residual.
RealField hk_gradient(const HKState& s, Exec exec = default_exec());

// Second variation of the HK-energy along u + t*udot.
double second_variation(const HKState& s, const RealField& udot);

struct ConvexityReport {
    int samples = 0;
    double min_second_difference = 0.0;
    double max_xi_norm_endpoints = 0.0;
    bool det_zero = false;
    bool semidefinite = false;
    std::vector<double> energies;
};

// Samples the HK-energy along the linear path (1-t) u0 + t u1 and reports the
// smallest second difference.  Refuses (domain_error) unless xi has det = 0
// or pointwise semidefinite real and imaginary parts, and both endpoints have
// |xi|_u^2 < 1.
ConvexityReport convexity_probe(const SymplecticPotential& u0,
                                const SymplecticPotential& u1, const HiggsField& xi,
                                int samples);

struct SolveOptions {
    double tol = 1e-8;  // sup-norm of the residual
    int max_iter = 200;
    Exec exec = default_exec();
};

struct SolveReport {
    int iterations = 0;
    double residual_sup = 0.0;
    std::vector<double> energy_trace;
    double admissibility_min_margin = 0.0;
};

// Damped Newton on the Fourier coefficients of h (zero mode pinned), Jacobian
// by forward differences, backtracking line search keeping the spectral
// radius <= 1 - 1e-6 and the energy non-increasing.
SymplecticPotential solve_real_mm(const HiggsField& xi,
                                  const SymplecticPotential& u_init,
                                  const SolveOptions& opts = {},
                                  SolveReport* report = nullptr);

} // namespace hcsck
