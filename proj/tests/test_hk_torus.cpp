#include <doctest.h>

#include "hcsck/hk_torus.hpp"

#include <cmath>
#include <numbers>

using namespace hcsck;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

HiggsField constant_rank1(const TorusGrid& g, cplx a) {
    HiggsField x(g);
    for (CSym2& m : x.xi.v) m = {a, 0.0, 0.0};
    return x;
}

SymplecticPotential cosine_u(const TorusGrid& g, double eps) {
    RealField h(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) h(i, j) = eps * std::cos(kTwoPi * i / g.n1);
    return SymplecticPotential(RSym2{1, 0, 1}, h);
}
} // namespace

TEST_CASE("residual: flat state vanishes; xi = 0 reduces to Abreu's operator") {
    const TorusGrid g(16, 16);
    const HKState flat{SymplecticPotential(g), HiggsField(g)};
    CHECK(sup_norm(real_mm_residual(flat)) < 1e-12);

    const SymplecticPotential u = cosine_u(g, 0.004);
    const HKState s(u, HiggsField(g));
    const RealField r = real_mm_residual(s);
    const RealField abreu = abreu_scalar(u);
    for (std::size_t i = 0; i < r.v.size(); ++i)
        CHECK(std::abs(r.v[i] + 4.0 * abreu.v[i]) < 1e-10);
    CHECK(std::abs(mean(r)) < 1e-10);
}

TEST_CASE("residual: sqrt route and psi route agree; admissibility guard") {
    const TorusGrid g(16, 16);
    const SymplecticPotential u = cosine_u(g, 0.003);
    const HiggsField xi = random_solution(g, 71, 4, 0.35);
    const HKState s(u, xi);
    const RealField a = real_mm_residual(s);
    const RealField b = real_mm_residual_psi_route(s);
    for (std::size_t i = 0; i < a.v.size(); ++i)
        CHECK(std::abs(a.v[i] - b.v[i]) < 1e-11);

    CHECK_THROWS_AS(HKState(SymplecticPotential(g), constant_rank1(g, cplx(1.0, 0.0))),
                    inadmissible_error);
}

TEST_CASE("hermitian positive-definiteness of sqrt(1-X) G^{-1} node-wise") {
    const TorusGrid g(16, 16);
    const SymplecticPotential u = cosine_u(g, 0.004);
    const HiggsField xi = random_solution(g, 73, 4, 0.5);
    const HKState s(u, xi);
    for (std::size_t i = 0; i < s.X().v.size(); ++i) {
        const CMat2 m = spectral::sqrt_one_minus(s.X().v[i]) *
                        CMat2::from_rsym(s.Ginv().v[i]);
        CHECK(std::abs(m.a12 - std::conj(m.a21)) < 1e-11); // Hermitian
        CHECK(std::abs(m.a11.imag()) < 1e-11);
        const double tr = m.a11.real() + m.a22.real();
        const double det = (m.a11 * m.a22 - m.a12 * m.a21).real();
        CHECK(tr > 0.0);
        CHECK(det > 0.0); // both eigenvalues positive
    }
}

TEST_CASE("hk_energy: flat zero, 1-D quadrature oracle, constant rank-1 xi") {
    const TorusGrid g(32, 32);
    CHECK(hk_energy(HKState(SymplecticPotential(g), HiggsField(g))) == 0.0);

    // xi = 0, h = eps cos(2 pi y1): F = -1/2 int log(1 - eps (2 pi)^2 cos)
    const double eps = 0.5 / (kTwoPi * kTwoPi);
    const double a = eps * kTwoPi * kTwoPi;
    const HKState s(cosine_u(g, eps), HiggsField(g));
    double quad = 0.0;
    const int nq = 1 << 14; // periodic trapezoid, spectrally accurate
    for (int i = 0; i < nq; ++i)
        quad += std::log(1.0 - a * std::cos(kTwoPi * i / nq));
    quad = -0.5 * quad / nq;
    CHECK(std::abs(hk_energy(s) - quad) < 1e-9);

    // constant rank-1 xi on the flat background: 1/2 rho at constant spectrum
    const cplx c(0.4, 0.3);
    const HKState s2(SymplecticPotential(g), constant_rank1(g, c));
    const double want = 0.5 * spectral::bg_function({std::norm(c), 0.0});
    CHECK(std::abs(hk_energy(s2) - want) < 1e-14);
}

TEST_CASE("gradient: identity with residual and directional finite differences") {
    const TorusGrid g(16, 16);
    const SymplecticPotential u = cosine_u(g, 0.002);
    const HiggsField xi = random_solution(g, 79, 4, 0.3);
    const HKState s(u, xi);

    const RealField grad = hk_gradient(s);
    const RealField res = real_mm_residual(s);
    for (std::size_t i = 0; i < grad.v.size(); ++i)
        CHECK(std::abs(grad.v[i] + 0.5 * res.v[i]) < 1e-11);
    CHECK(std::abs(mean(grad)) < 1e-12);

    // (F(u + t phi) - F(u - t phi)) / 2t vs  int grad * phi
    const double t = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const RealField phi = random_field(g, 100 + trial, 3, 0.1);
        RealField hp = u.h, hm = u.h;
        for (std::size_t i = 0; i < hp.v.size(); ++i) {
            hp.v[i] += t * phi.v[i];
            hm.v[i] -= t * phi.v[i];
        }
        const double fp = hk_energy(HKState(SymplecticPotential(u.Q, hp), xi));
        const double fm = hk_energy(HKState(SymplecticPotential(u.Q, hm), xi));
        const double fd = (fp - fm) / (2.0 * t);
        RealField prod(g);
        for (std::size_t i = 0; i < prod.v.size(); ++i)
            prod.v[i] = grad.v[i] * phi.v[i];
        const double pairing = integrate(prod);
        CHECK(std::abs(fd - pairing) < 1e-6 * std::max(1.0, std::abs(pairing)));
    }
}

TEST_CASE("second variation: K-energy reduction, null directions, FD oracle") {
    const TorusGrid g(16, 16);
    const SymplecticPotential u = cosine_u(g, 0.002);

    // xi = 0 reduces to 1/2 int Tr((G^{-1} Hess udot)^2) >= 0
    const RealField udot = random_field(g, 111, 3, 0.3);
    const HKState s0(u, HiggsField(g));
    const double sv0 = second_variation(s0, udot);
    const RSym2Field gi = invert(hessian(u));
    const RealField d11 = partial(udot, 1, 2), d22 = partial(udot, 2, 2);
    const RealField d12 = partial(partial(udot, 1, 1), 2, 1);
    RealField integrand(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const CMat2 m = CMat2::from_rsym(gi.v[i]) *
                        CMat2::from_rsym(RSym2{d11.v[i], d12.v[i], d22.v[i]});
        integrand.v[i] = 0.5 * (m * m).trace().real();
    }
    CHECK(std::abs(sv0 - integrate(integrand)) < 1e-12);
    CHECK(sv0 >= 0.0);

    // constants have Hess = 0: second variation vanishes
    CHECK(second_variation(s0, RealField(g, 2.5)) == 0.0);

    const HiggsField xi = random_solution(g, 83, 4, 0.3);
    const HKState s(u, xi);
    const double t = 1e-4;
    RealField hp = u.h, hm = u.h;
    for (std::size_t i = 0; i < hp.v.size(); ++i) {
        hp.v[i] += t * udot.v[i];
        hm.v[i] -= t * udot.v[i];
    }
    const double f0 = hk_energy(s);
    const double fp = hk_energy(HKState(SymplecticPotential(u.Q, hp), xi));
    const double fm = hk_energy(HKState(SymplecticPotential(u.Q, hm), xi));
    const double fd = (fp - 2.0 * f0 + fm) / (t * t);
    const double sv = second_variation(s, udot);
    CHECK(std::abs(fd - sv) < 1e-4 * std::max(1.0, std::abs(sv)));
}

TEST_CASE("convexity probe: det xi = 0 family and hypothesis guard") {
    const TorusGrid g(16, 16);
    const SymplecticPotential u0(RSym2{1, 0, 1}, random_field(g, 121, 3, 0.002));
    const SymplecticPotential u1(RSym2{1, 0, 1}, random_field(g, 122, 3, 0.002));

    const auto rep = convexity_probe(u0, u1, constant_rank1(g, cplx(0.4, 0.2)), 9);
    CHECK(rep.det_zero);
    CHECK(rep.min_second_difference >= -1e-9);

    // xi = 0: convexity of the K-energy along any linear admissible path
    const auto rep0 = convexity_probe(u0, u1, HiggsField(g), 9);
    CHECK(rep0.min_second_difference >= -1e-9);

    // violating the hypotheses must refuse: indefinite Re(xi), nonzero det
    HiggsField bad(g);
    for (CSym2& m : bad.xi.v) m = {cplx(0.3, 0.0), 0.0, cplx(-0.3, 0.0)};
    CHECK_THROWS_AS(convexity_probe(u0, u1, bad, 5), domain_error);
}

TEST_CASE("solve_real_mm: xi = 0 converges to the flat potential") {
    const TorusGrid g(16, 16);
    const SymplecticPotential init(RSym2{1, 0, 1}, random_field(g, 131, 3, 0.001));
    SolveReport rep;
    const SymplecticPotential u =
        solve_real_mm(HiggsField(g), init, SolveOptions{1e-10, 50, default_exec()}, &rep);
    CHECK(sup_norm(u.h) < 1e-9);
    CHECK(rep.residual_sup < 1e-10);
    CHECK(std::abs(mean(u.h)) < 1e-14);
    for (std::size_t k = 1; k < rep.energy_trace.size(); ++k)
        CHECK(rep.energy_trace[k] <= rep.energy_trace[k - 1] + 1e-12);
}

TEST_CASE("solve_real_mm: uniqueness up to constants for det-zero xi") {
    const TorusGrid g(16, 16);
    // constant rank-one Higgs field (solves the complex moment map trivially)
    const HiggsField xi = constant_rank1(g, cplx(0.12, 0.05));
    const SymplecticPotential init1(RSym2{1, 0, 1}, random_field(g, 141, 2, 0.0015));
    const SymplecticPotential init2(RSym2{1, 0, 1}, random_field(g, 142, 2, 0.0015));
    const SolveOptions opts{1e-9, 60, default_exec()};
    const SymplecticPotential ua = solve_real_mm(xi, init1, opts);
    const SymplecticPotential ub = solve_real_mm(xi, init2, opts);
    // both normalize mean(h) = 0, so "up to a constant" means equal h
    for (std::size_t i = 0; i < ua.h.v.size(); ++i)
        CHECK(std::abs(ua.h.v[i] - ub.h.v[i]) < 1e-7);
}

TEST_CASE("serial and parallel sweeps produce identical bits") {
    const TorusGrid g(16, 16);
    const SymplecticPotential u = cosine_u(g, 0.003);
    const HiggsField xi = random_solution(g, 151, 4, 0.4);
    const HKState s_ser(u, xi, Exec::serial);
    const HKState s_par(u, xi, Exec::parallel);
    const RealField a = real_mm_residual(s_ser, Exec::serial);
    const RealField b = real_mm_residual(s_par, Exec::parallel);
    for (std::size_t i = 0; i < a.v.size(); ++i) CHECK(a.v[i] == b.v[i]);
    const RealField ga = hk_gradient(s_ser, Exec::serial);
    const RealField gb = hk_gradient(s_par, Exec::parallel);
    for (std::size_t i = 0; i < ga.v.size(); ++i) CHECK(ga.v[i] == gb.v[i]);
}
