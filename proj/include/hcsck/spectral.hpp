#pragma once

// Pointwise spectral kernel of the Biquard-Gauduchon construction in complex
// dimension 2: eigenvalues of xi*G*conj(xi)*G from trace/determinant data,
// the spectral function psi, the hyperkahler potential density rho, the
// auxiliary pair (psi1, psi2), and 2x2 matrix spectral functions computed
// through the resolvent decomposition X = d+ P+ + d- P-.

#include "hcsck/common.hpp"
#include "hcsck/mat2.hpp"

namespace hcsck::spectral {

// Eigenvalues of a matrix similar to a Hermitian positive-semidefinite one.
struct Spectrum2 {
    double delta_plus = 0.0;
    double delta_minus = 0.0;
};

// psi(x) = 1/2 * (1 + sqrt(1-x))^-1, monotone increasing on (-inf, 1].
double psi(double x);

// d/dx psi(x); finite for x < 1.
double psi_prime(double x);

// Per-eigenvalue density of the Biquard-Gauduchon function:
// 1 - sqrt(1-delta) + log((1 + sqrt(1-delta)) / 2), zero at delta = 0.
// Its derivative in delta is psi(delta).
double bg_density(double delta);

// delta_pm = 1/2 (t +- sqrt(t^2 - 4 d)) for t = Tr(X), d = |det|^2 >= 0.
// Reconstruction t = d+ + d-, d = d+ * d- holds to rounding.
Spectrum2 eigenpair(double trace_x, double det_mod2);

// psi1 = 1/2 (sqrt(1-d+) + sqrt(1-d-))^-1,
// psi2 = psi1 * (1+sqrt(1-d+))^-1 (1+sqrt(1-d-))^-1.
// These satisfy psi(d+) dd+ + psi(d-) dd- = psi1 d(d+ + d-) - psi2 d(d+ d-).
struct Psi12 {
    double psi1 = 0.0;
    double psi2 = 0.0;
};
Psi12 psi12(const Spectrum2& s);

// rho = bg_density(d+) + bg_density(d-).
double bg_function(const Spectrum2& s);

// First and second derivatives of rho seen as a smooth function R(x, y) of
// x = d+ + d- and y = d+ * d-.  Closed forms in the auxiliary radicals
// w = sqrt(1 - x + y) and p = sqrt(2 - x + 2 w), valid across repeated
// eigenvalues: Rx = psi1, Ry = -psi2.
struct BgJet {
    double value = 0.0;
    double rx = 0.0, ry = 0.0;
    double rxx = 0.0, rxy = 0.0, ryy = 0.0;
};
BgJet bg_jet(double x, double y);

// psi applied spectrally to a 2x2 matrix with real spectrum in [0, 1).
// For nearly repeated eigenvalues switches to psi(d) I + psi'(d) (X - d I).
CMat2 psi_of_matrix(const CMat2& x);

// Principal square root of (1 - X) for real spectrum in [0, 1); satisfies
// result^2 = 1 - X and psi(X) X = 1/2 (1 - sqrt_one_minus(X)).
CMat2 sqrt_one_minus(const CMat2& x);

// Spectrum of a matrix promised similar to Hermitian PSD; throws if the
// trace/determinant have a significant imaginary part or the discriminant is
// negative beyond tolerance.
Spectrum2 spectrum_of(const CMat2& x);

} // namespace hcsck::spectral
