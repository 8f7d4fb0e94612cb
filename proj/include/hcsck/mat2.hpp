#pragma once

#include "hcsck/common.hpp"

#include <cmath>

namespace hcsck {

// Real symmetric 2x2 matrix (metric blocks G = Hess u).
struct RSym2 {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a12; }
    double min_eig() const {
        const double m = 0.5 * trace();
        const double r = std::sqrt(std::max(0.0, m * m - det()));
        return m - r;
    }
    RSym2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, a11 / d};
    }
};

inline RSym2 operator+(const RSym2& x, const RSym2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a22 + y.a22};
}
inline RSym2 operator*(double s, const RSym2& x) { return {s * x.a11, s * x.a12, s * x.a22}; }

// Complex symmetric 2x2 matrix; only three entries stored, so the (2,1)
// entry equals the (1,2) entry by construction.
struct CSym2 {
    cplx m11{0.0, 0.0}, m12{0.0, 0.0}, m22{0.0, 0.0};

    cplx trace() const { return m11 + m22; }
    cplx det() const { return m11 * m22 - m12 * m12; }
    CSym2 conj() const { return {std::conj(m11), std::conj(m12), std::conj(m22)}; }
    RSym2 real() const { return {m11.real(), m12.real(), m22.real()}; }
    RSym2 imag() const { return {m11.imag(), m12.imag(), m22.imag()}; }
};

inline CSym2 operator+(const CSym2& x, const CSym2& y) {
    return {x.m11 + y.m11, x.m12 + y.m12, x.m22 + y.m22};
}
inline CSym2 operator-(const CSym2& x, const CSym2& y) {
    return {x.m11 - y.m11, x.m12 - y.m12, x.m22 - y.m22};
}
inline CSym2 operator*(cplx s, const CSym2& x) { return {s * x.m11, s * x.m12, s * x.m22}; }
inline CSym2 operator*(double s, const CSym2& x) { return cplx(s, 0.0) * x; }

// General complex 2x2 matrix for products such as xi*G*conj(xi)*G, which are
// not symmetric even when every factor is.
struct CMat2 {
    cplx a11{0.0, 0.0}, a12{0.0, 0.0}, a21{0.0, 0.0}, a22{0.0, 0.0};

    static CMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static CMat2 from_sym(const CSym2& s) { return {s.m11, s.m12, s.m12, s.m22}; }
    static CMat2 from_rsym(const RSym2& s) { return {s.a11, s.a12, s.a12, s.a22}; }

    cplx trace() const { return a11 + a22; }
    cplx det() const { return a11 * a22 - a12 * a21; }
    CMat2 adjugate() const { return {a22, -a12, -a21, a11}; }
    CMat2 conj() const {
        return {std::conj(a11), std::conj(a12), std::conj(a21), std::conj(a22)};
    }
    // conjugate transpose
    CMat2 adjoint() const {
        return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)};
    }
    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }
};

inline CMat2 operator+(const CMat2& x, const CMat2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
}
inline CMat2 operator-(const CMat2& x, const CMat2& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
}
inline CMat2 operator*(const CMat2& x, const CMat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
}
inline CMat2 operator*(cplx s, const CMat2& x) {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
}
inline CMat2 operator*(double s, const CMat2& x) { return cplx(s, 0.0) * x; }

inline CMat2 mul(const CSym2& x, const RSym2& y) {
    return CMat2::from_sym(x) * CMat2::from_rsym(y);
}

// Frobenius pairing restricted to symmetric matrices: <M,N> = sum_ij M_ij conj(N_ij).
inline cplx frob_sym(const CSym2& x, const CSym2& y) {
    return x.m11 * std::conj(y.m11) + 2.0 * x.m12 * std::conj(y.m12) +
           x.m22 * std::conj(y.m22);
}

inline double frob_norm2_sym(const CSym2& x) { return frob_sym(x, x).real(); }

} // namespace hcsck
