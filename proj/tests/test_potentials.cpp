#include <doctest.h>

#include "hcsck/potentials.hpp"

#include <cmath>
#include <numbers>

using namespace hcsck;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

SymplecticPotential cosine_potential(const TorusGrid& g, double eps) {
    RealField h(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            h(i, j) = eps * std::cos(kTwoPi * i / g.n1);
    return SymplecticPotential(RSym2{1, 0, 1}, h);
}
} // namespace

TEST_CASE("hessian: flat potential, 1-D cosine, degeneracy error") {
    const TorusGrid g(16, 16);
    const SymplecticPotential flat(g);
    const RSym2Field gf = hessian(flat);
    for (const RSym2& m : gf.v) {
        CHECK(m.a11 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(m.a12) < 1e-14);
        CHECK(m.a22 == doctest::Approx(1.0).epsilon(1e-14));
    }

    const double eps = 0.5 / (kTwoPi * kTwoPi);
    const SymplecticPotential u = cosine_potential(g, eps);
    const RSym2Field gu = hessian(u);
    for (int i = 0; i < g.n1; ++i) {
        const double want = 1.0 - eps * kTwoPi * kTwoPi * std::cos(kTwoPi * i / g.n1);
        for (int j = 0; j < g.n2; ++j) {
            CHECK(std::abs(gu(i, j).a11 - want) < 1e-11);
            CHECK(std::abs(gu(i, j).a12) < 1e-11);
            CHECK(std::abs(gu(i, j).a22 - 1.0) < 1e-11);
        }
    }

    // eps (2 pi)^2 >= 1 makes 1 + h'' vanish somewhere
    CHECK_THROWS_AS(hessian(cosine_potential(g, 1.1 / (kTwoPi * kTwoPi))),
                    degenerate_potential_error);
}

TEST_CASE("abreu_scalar: flat gives zero, closed-form 1-D oracle, zero mean") {
    const TorusGrid g(32, 32);
    CHECK(sup_norm(abreu_scalar(SymplecticPotential(g))) < 1e-12);

    // u = |y|^2/2 + eps cos(2 pi y1):  S = -1/4 d^2/dy1^2 [ 1/(1+h'') ] and
    // with a = eps (2 pi)^2, w = 1/(1 - a cos t), t = 2 pi y1:
    //   S = -(pi^2) ( -a cos t w^2 + 2 a^2 sin^2 t w^3 )
    const double eps = 0.3 / (kTwoPi * kTwoPi);
    const double a = eps * kTwoPi * kTwoPi;
    const SymplecticPotential u = cosine_potential(g, eps);
    const RealField s = abreu_scalar(u);
    for (int i = 0; i < g.n1; ++i) {
        const double t = kTwoPi * i / g.n1;
        const double w = 1.0 / (1.0 - a * std::cos(t));
        const double want = -0.25 * kTwoPi * kTwoPi *
                            (-a * std::cos(t) * w * w +
                             2.0 * a * a * std::sin(t) * std::sin(t) * w * w * w);
        for (int j = 0; j < g.n2; ++j) CHECK(std::abs(s(i, j) - want) < 1e-8);
    }
    CHECK(std::abs(mean(s)) < 1e-10);

    // random admissible potential: divergence structure keeps the mean at zero
    SymplecticPotential ur(RSym2{1, 0, 1}, random_field(g, 99, 4, 0.002));
    CHECK(std::abs(mean(abreu_scalar(ur))) < 1e-10);
}

TEST_CASE("legendre: quadratic duality u = y^T A^{-1} y / 2") {
    const TorusGrid g(16, 16);
    ComplexPotential v(g);
    v.Q = RSym2{2.0, 0.3, 1.5};
    const SymplecticPotential u = legendre(v);
    const RSym2 want = v.Q.inverse();
    CHECK(u.Q.a11 == doctest::Approx(want.a11).epsilon(1e-14));
    CHECK(u.Q.a12 == doctest::Approx(want.a12).epsilon(1e-14));
    CHECK(u.Q.a22 == doctest::Approx(want.a22).epsilon(1e-14));
    CHECK(sup_norm(u.h) < 1e-12);
}

TEST_CASE("legendre: involution and Hessian-inverse relation at dual points") {
    const TorusGrid g(48, 48);
    ComplexPotential v(g);
    // gentle data: the dual potential is analytic but not band-limited, and
    // its spectral tail must fall below the tolerances before Nyquist
    v.h = random_field(g, 21, 2, 0.001);
    const SymplecticPotential u = legendre(v);
    const ComplexPotential v2 = legendre(u);
    for (std::size_t i = 0; i < v.h.v.size(); ++i)
        CHECK(std::abs(v.h.v[i] - v2.h.v[i]) < 1e-8);

    // at each y-grid node, the dual x solves grad v(x) = y
    const auto duals = legendre_dual_points(v);
    const RSym2Field hu = hessian(u);
    const CplxField hv_modes = to_modes(v.h);
    const CplxField hu_modes = to_modes(u.h);
    // mean(h_u) = 0 fixes the additive gauge, so u + v - x.y is one constant
    // across all dual pairs; record it from the first pair.
    double gauge = 0.0;
    int checked = 0;
    for (std::size_t n = 0; n < g.size() && checked < 100; n += 7, ++checked) {
        const int i = static_cast<int>(n) / g.n2, j = static_cast<int>(n) % g.n2;
        const auto y = g.node(i, j);
        const auto x = duals(i, j);
        // Hess_y u (y) = (Hess_x v (x))^{-1}
        const ScalarJet2 jv = eval_modes_jet(hv_modes, x[0], x[1]);
        const RSym2 hvx{1.0 + jv.hess.a11, jv.hess.a12, 1.0 + jv.hess.a22};
        const RSym2 want = hvx.inverse();
        CHECK(std::abs(hu(i, j).a11 - want.a11) < 1e-8);
        CHECK(std::abs(hu(i, j).a12 - want.a12) < 1e-8);
        CHECK(std::abs(hu(i, j).a22 - want.a22) < 1e-8);
        // u + v = x . y at dual pairs, up to the normalization constant
        const double uval = 0.5 * (y[0] * y[0] + y[1] * y[1]) +
                            eval_modes_at(hu_modes, y[0], y[1]).real();
        const double vval = 0.5 * (x[0] * x[0] + x[1] * x[1]) + jv.value;
        const double defect = uval + vval - (x[0] * y[0] + x[1] * y[1]);
        if (checked == 0) gauge = defect;
        CHECK(std::abs(defect - gauge) < 1e-9);
    }
    CHECK(checked >= 100);
}

TEST_CASE("complex_side_scalar: flat and quadratic give zero") {
    const TorusGrid g(16, 16);
    ComplexPotential flat(g);
    CHECK(sup_norm(complex_side_scalar(flat)) < 1e-12);
    flat.Q = RSym2{1.7, -0.2, 2.4};
    CHECK(sup_norm(complex_side_scalar(flat)) < 1e-12);
}

TEST_CASE("complex_side_scalar agrees with abreu_scalar through Legendre duality") {
    const TorusGrid g(32, 32);
    ComplexPotential v(g);
    v.h = random_field(g, 33, 2, 0.0005);
    const RealField sx = complex_side_scalar(v);
    const SymplecticPotential u = legendre(v);
    const CplxField s_modes = to_modes(abreu_scalar(u));
    // the dual of the x-grid node is y = grad v(x), available spectrally
    const RealField g1 = partial(v.h, 1, 1), g2 = partial(v.h, 2, 1);
    for (std::size_t n = 0; n < g.size(); n += 5) {
        const int i = static_cast<int>(n) / g.n2, j = static_cast<int>(n) % g.n2;
        const auto x = g.node(i, j);
        const double y1 = x[0] + g1.v[n], y2 = x[1] + g2.v[n];
        const double sy = eval_modes_at(s_modes, y1, y2).real();
        CHECK(std::abs(sx.v[n] - sy) < 1e-6);
    }
}

TEST_CASE("potential JSON round trip") {
    const TorusGrid g(8, 8);
    SymplecticPotential u(RSym2{1.25, 0.125, 0.75}, random_field(g, 4, 2, 0.01));
    const SymplecticPotential back = potential_from_json(potential_to_json(u));
    CHECK(back.Q.a11 == u.Q.a11);
    CHECK(back.Q.a12 == u.Q.a12);
    // load re-applies the zero-mean normalization, shifting at most a few ulps
    for (std::size_t i = 0; i < u.h.v.size(); ++i)
        CHECK(std::abs(back.h.v[i] - u.h.v[i]) < 1e-18);
}

TEST_CASE("legendre: serial and parallel inversions agree bitwise") {
    const TorusGrid g(16, 16);
    ComplexPotential v(g);
    v.h = random_field(g, 55, 2, 5e-4);
    const SymplecticPotential us = legendre(v, Exec::serial);
    const SymplecticPotential up = legendre(v, Exec::parallel);
    for (std::size_t i = 0; i < us.h.v.size(); ++i) CHECK(us.h.v[i] == up.h.v[i]);
}
