#include "hcsck/spectral.hpp"

#include <cmath>
#include <cstdio>

namespace hcsck::spectral {

namespace {

// Threshold below which the resolvent (Lagrange) form of a matrix spectral
// function is replaced by the first-order expansion around the mean eigenvalue.
constexpr double kDegenerateGap = 1e-8;

void check_unit_interval(double x, const char* who) {
    if (!(x >= -kDomainMargin) || !(x <= 1.0 + kDomainMargin)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: argument %.17g outside [0,1]", who, x);
        throw domain_error(buf);
    }
}

} // namespace

double psi(double x) {
    if (!(x <= 1.0)) throw domain_error("psi: argument > 1");
    return 0.5 / (1.0 + std::sqrt(1.0 - x));
}

double psi_prime(double x) {
    if (!(x < 1.0)) throw domain_error("psi_prime: argument >= 1");
    const double s = std::sqrt(1.0 - x);
    return 0.25 / (s * (1.0 + s) * (1.0 + s));
}

double bg_density(double delta) {
    check_unit_interval(delta, "bg_density");
    delta = std::min(1.0, std::max(0.0, delta));
    const double s = std::sqrt(1.0 - delta);
    return 1.0 - s + std::log1p(0.5 * (s - 1.0));
}

Spectrum2 eigenpair(double trace_x, double det_mod2) {
    if (trace_x < -kDomainMargin) throw domain_error("eigenpair: negative trace");
    trace_x = std::max(0.0, trace_x);
    // |det|^2 >= 0 up to cancellation at the scale of trace^2
    const double det_floor = -1e-13 * std::max(1.0, trace_x * trace_x);
    if (det_mod2 < 0.0 && det_mod2 > det_floor) det_mod2 = 0.0;
    if (det_mod2 < 0.0) throw domain_error("eigenpair: negative |det|^2");
    double disc = trace_x * trace_x - 4.0 * det_mod2;
    if (disc < 0.0) {
        // tolerate roundoff-level violations of t^2 >= 4d
        if (disc > -1e-12 * std::max(1.0, trace_x * trace_x)) {
            disc = 0.0;
        } else {
            throw domain_error("eigenpair: discriminant negative (input not similar "
                               "to a Hermitian PSD matrix)");
        }
    }
    const double s = std::sqrt(disc);
    Spectrum2 out;
    out.delta_plus = 0.5 * (trace_x + s);
    out.delta_minus = out.delta_plus > 0.0 ? det_mod2 / out.delta_plus : 0.0;
    return out;
}

Psi12 psi12(const Spectrum2& s) {
    if (!(s.delta_plus < 1.0)) throw domain_error("psi12: delta_plus >= 1");
    const double sp = std::sqrt(1.0 - s.delta_plus);
    const double sm = std::sqrt(1.0 - s.delta_minus);
    Psi12 out;
    out.psi1 = 0.5 / (sp + sm);
    out.psi2 = out.psi1 / ((1.0 + sp) * (1.0 + sm));
    return out;
}

double bg_function(const Spectrum2& s) {
    return bg_density(s.delta_plus) + bg_density(s.delta_minus);
}

BgJet bg_jet(double x, double y) {
    // w = sqrt((1-d+)(1-d-)), p = sqrt(1-d+) + sqrt(1-d-); both are smooth
    // symmetric functions of the eigenvalues, so everything below is regular
    // across d+ = d- and no discriminant appears.
    const double w2 = 1.0 - x + y;
    if (!(w2 > 0.0)) throw domain_error("bg_jet: delta_plus >= 1");
    const double w = std::sqrt(w2);
    const double p = std::sqrt(2.0 - x + 2.0 * w);
    const double z = 1.0 + p + w;

    BgJet j;
    j.value = 2.0 - p + std::log(0.25 * z);
    j.rx = 0.5 / p;          // = psi1
    j.ry = -0.5 / (p * z);   // = -psi2
    const double p3 = p * p * p;
    j.rxx = (w + 1.0) / (4.0 * w * p3);
    j.rxy = -1.0 / (4.0 * w * p3);
    j.ryy = (z + p * (1.0 + p)) / (4.0 * w * p3 * z * z);
    return j;
}

Spectrum2 spectrum_of(const CMat2& x) {
    const cplx t = x.trace();
    const cplx d = x.det();
    const double scale = std::max(1.0, x.max_abs());
    if (std::abs(t.imag()) > 1e-9 * scale || std::abs(d.imag()) > 1e-9 * scale * scale) {
        throw domain_error("spectrum_of: trace/det not real; matrix is not similar "
                           "to a Hermitian one");
    }
    // |det X| = |det(xi G)|^2 for X = xi G conj(xi) G, so d.real() >= 0 here.
    return eigenpair(t.real(), d.real());
}

namespace {

// f applied spectrally via X = d+ P+ + d- P-; fp is f' for the degenerate branch.
template <class F, class Fp>
CMat2 matrix_function(const CMat2& x, F f, Fp fp, const char* who) {
    const Spectrum2 s = spectrum_of(x);
    if (!(s.delta_plus < 1.0 - kDomainMargin)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: spectral radius %.17g too close to 1", who,
                      s.delta_plus);
        throw domain_error(buf);
    }
    const double gap = s.delta_plus - s.delta_minus;
    if (gap < kDegenerateGap) {
        const double d = 0.5 * (s.delta_plus + s.delta_minus);
        const CMat2 id = CMat2::identity();
        return f(d) * id + fp(d) * (x - d * id);
    }
    // P+- = (X - d-+ I) / (d+- - d-+)
    const CMat2 id = CMat2::identity();
    const CMat2 pp = (1.0 / gap) * (x - s.delta_minus * id);
    const CMat2 pm = (-1.0 / gap) * (x - s.delta_plus * id);
    return f(s.delta_plus) * pp + f(s.delta_minus) * pm;
}

} // namespace

CMat2 psi_of_matrix(const CMat2& x) {
    return matrix_function(
        x, [](double d) { return psi(d); }, [](double d) { return psi_prime(d); },
        "psi_of_matrix");
}

CMat2 sqrt_one_minus(const CMat2& x) {
    return matrix_function(
        x, [](double d) { return std::sqrt(1.0 - d); },
        [](double d) { return -0.5 / std::sqrt(1.0 - d); }, "sqrt_one_minus");
}

} // namespace hcsck::spectral
