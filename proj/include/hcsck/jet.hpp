#pragma once

// Second-order jets (value, gradient, Hessian) of scalar and 2x2-matrix
// functions on the polytope, used to differentiate G^{-1}, xi = G^{-1} Phi G^{-1}
// and sqrt(1 - X) G^{-1} analytically instead of by finite differences.

#include "hcsck/common.hpp"

#include <array>
#include <cmath>

namespace hcsck {

template <class T>
struct Jet2 {
    T v{};
    std::array<T, 2> g{};      // gradient
    std::array<T, 3> h{};      // Hessian (h00, h01, h11)

    static Jet2 constant(T c) { return {c, {T{}, T{}}, {T{}, T{}, T{}}}; }
    static Jet2 coordinate(int axis, double value) {
        Jet2 j = constant(T(value));
        j.g[axis] = T(1.0);
        return j;
    }
};

template <class T>
Jet2<T> operator+(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.v + b.v,
            {a.g[0] + b.g[0], a.g[1] + b.g[1]},
            {a.h[0] + b.h[0], a.h[1] + b.h[1], a.h[2] + b.h[2]}};
}

template <class T>
Jet2<T> operator-(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.v - b.v,
            {a.g[0] - b.g[0], a.g[1] - b.g[1]},
            {a.h[0] - b.h[0], a.h[1] - b.h[1], a.h[2] - b.h[2]}};
}

template <class T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.v * b.v,
            {a.g[0] * b.v + a.v * b.g[0], a.g[1] * b.v + a.v * b.g[1]},
            {a.h[0] * b.v + 2.0 * a.g[0] * b.g[0] + a.v * b.h[0],
             a.h[1] * b.v + a.g[0] * b.g[1] + a.g[1] * b.g[0] + a.v * b.h[1],
             a.h[2] * b.v + 2.0 * a.g[1] * b.g[1] + a.v * b.h[2]}};
}

template <class T>
Jet2<T> operator*(T s, const Jet2<T>& a) {
    return {s * a.v, {s * a.g[0], s * a.g[1]}, {s * a.h[0], s * a.h[1], s * a.h[2]}};
}

// composition with a scalar function phi given phi(v), phi'(v), phi''(v)
template <class T>
Jet2<T> compose(const Jet2<T>& a, T f, T fp, T fpp) {
    return {f,
            {fp * a.g[0], fp * a.g[1]},
            {fp * a.h[0] + fpp * a.g[0] * a.g[0],
             fp * a.h[1] + fpp * a.g[0] * a.g[1],
             fp * a.h[2] + fpp * a.g[1] * a.g[1]}};
}

template <class T>
Jet2<T> inverse(const Jet2<T>& a) {
    const T iv = T(1.0) / a.v;
    return compose(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Jet2<double> sqrt(const Jet2<double>& a) {
    const double r = std::sqrt(a.v);
    return compose(a, r, 0.5 / r, -0.25 / (r * a.v));
}

inline Jet2<cplx> sqrt(const Jet2<cplx>& a) {
    const cplx r = std::sqrt(a.v);
    return compose(a, r, 0.5 / r, -0.25 / (r * a.v));
}

inline Jet2<double> log(const Jet2<double>& a) {
    return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

inline Jet2<cplx> to_complex(const Jet2<double>& a) {
    Jet2<cplx> out;
    out.v = a.v;
    out.g = {cplx(a.g[0]), cplx(a.g[1])};
    out.h = {cplx(a.h[0]), cplx(a.h[1]), cplx(a.h[2])};
    return out;
}

// 2x2 matrix with jet entries (row-major a11 a12 a21 a22)
template <class T>
struct MatJet2 {
    std::array<Jet2<T>, 4> e;

    static MatJet2 identity() {
        MatJet2 m;
        m.e[0] = Jet2<T>::constant(T(1.0));
        m.e[3] = Jet2<T>::constant(T(1.0));
        return m;
    }
    Jet2<T> trace() const { return e[0] + e[3]; }
    Jet2<T> det() const { return e[0] * e[3] - e[1] * e[2]; }
    // sum_ab d_a d_b M^{ab}
    T double_divergence() const {
        return e[0].h[0] + e[1].h[1] + e[2].h[1] + e[3].h[2];
    }
};

template <class T>
MatJet2<T> operator*(const MatJet2<T>& a, const MatJet2<T>& b) {
    MatJet2<T> m;
    m.e[0] = a.e[0] * b.e[0] + a.e[1] * b.e[2];
    m.e[1] = a.e[0] * b.e[1] + a.e[1] * b.e[3];
    m.e[2] = a.e[2] * b.e[0] + a.e[3] * b.e[2];
    m.e[3] = a.e[2] * b.e[1] + a.e[3] * b.e[3];
    return m;
}

template <class T>
MatJet2<T> operator+(const MatJet2<T>& a, const MatJet2<T>& b) {
    MatJet2<T> m;
    for (int i = 0; i < 4; ++i) m.e[i] = a.e[i] + b.e[i];
    return m;
}

template <class T>
MatJet2<T> operator-(const MatJet2<T>& a, const MatJet2<T>& b) {
    MatJet2<T> m;
    for (int i = 0; i < 4; ++i) m.e[i] = a.e[i] - b.e[i];
    return m;
}

template <class T>
MatJet2<T> scale(const Jet2<T>& s, const MatJet2<T>& a) {
    MatJet2<T> m;
    for (int i = 0; i < 4; ++i) m.e[i] = s * a.e[i];
    return m;
}

template <class T>
MatJet2<T> inverse2(const MatJet2<T>& a) {
    const Jet2<T> idet = inverse(a.det());
    MatJet2<T> m;
    m.e[0] = idet * a.e[3];
    m.e[1] = T(-1.0) * (idet * a.e[1]);
    m.e[2] = T(-1.0) * (idet * a.e[2]);
    m.e[3] = idet * a.e[0];
    return m;
}

template <class T>
MatJet2<cplx> to_complex(const MatJet2<T>& a) {
    MatJet2<cplx> m;
    for (int i = 0; i < 4; ++i) m.e[i] = to_complex(a.e[i]);
    return m;
}

} // namespace hcsck
