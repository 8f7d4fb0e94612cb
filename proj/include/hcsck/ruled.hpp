#pragma once

// Adiabatic-limit solver for the momentum-profile equation on the ruled
// surface: the profile phi(lambda) = m lambda (1-lambda) g(lambda) on [0,1]
// (fibre parameter m, fibre volume 2*pi*m), the integro-differential operator
// F_m, the explicit O(m^3) approximate solution, the first-order linearized
// inverse, and a collocation Newton solver for small m.

#include "hcsck/chebyshev.hpp"
#include "hcsck/common.hpp"

#include <string>
#include <vector>

namespace hcsck {

enum class RuledVariant { standard, norm };

struct MomentumProfile {
    double m = 0.0;
    cheb::Series g; // regular factor, g(0) = g(1) = 1, g > 0 on [0,1]
    int nodes = 64;

    double phi(double lambda) const;
    double dphi(double lambda) const;  // d/dlambda
    double ddphi(double lambda) const; // d^2/dlambda^2
    double min_g(int samples = 257) const;
};

struct RuledSolution {
    MomentumProfile profile;
    double c = 0.0;
    double residual_sup = 0.0;
    int iterations = 0;
    RuledVariant variant = RuledVariant::standard;
};

// phi0(lambda) = m lambda (1-lambda) (4 + 2m - m(4+3m) lambda(1-lambda)) / (2(2+m))
MomentumProfile phi0(double m, int nodes = 64);
double c0(double m);                      // 2 m^2
double c0_variant(double m, RuledVariant v); // 8 m^2 for the norm variant

// scalar curvature s(tau) = s_Sigma/(1+tau) - phi_tt - 2 phi_t/(1+tau) at the
// Lobatto nodes tau = lambda m (derivatives with respect to tau)
struct CurvatureSamples {
    std::vector<double> tau;
    std::vector<double> value;
};
CurvatureSamples scal_from_profile(const MomentumProfile& p, double s_sigma,
                                   int samples = 129);
// int_0^m s (1+tau) dtau, equal to s_Sigma m + (2+m) for any valid profile
double curvature_weighted_integral(const MomentumProfile& p, double s_sigma);
// weighted average, equal to 2 s_Sigma/(2+m) + 2/m
double curvature_weighted_average(const MomentumProfile& p, double s_sigma);

// t(lambda) = log(lambda/(1-lambda)) + int_{1/2}^lambda (1/g - 1)/(x(1-x)) dx
double t_of_lambda(const MomentumProfile& p, double lambda);

// residual of the momentum-profile equation at `count` interior
// Chebyshev-Gauss nodes; endpoint singularities cancel through the
// g-representation, so every value is finite.
std::vector<double> fm_residual(const MomentumProfile& p, double c,
                                RuledVariant variant = RuledVariant::standard,
                                int count = 0 /* 0: p.nodes */);

// inverse of (u, k) -> u'' + 2k(3 lambda^2 - 2 lambda) on zero-average data:
// k = -6 int_0^1 int_0^y f, u = double antiderivative - 2k(l^4/4 - l^3/3)
struct LinearizedInverse {
    cheb::Series u;
    double k = 0.0;
};
LinearizedInverse linearized_inverse(const cheb::Series& f);

struct RuledOptions {
    int nodes = 64;
    double tol = 1e-10;
    int max_iter = 40;
    RuledVariant variant = RuledVariant::standard;
};

RuledSolution solve_ruled(double m, const RuledOptions& opts = {});

std::string ruled_to_json(const RuledSolution& sol, int phi_samples = 65);

} // namespace hcsck
