#include <doctest.h>

#include "hcsck/invariant1d.hpp"

#include <cmath>

using namespace hcsck;

TEST_CASE("assemble_xi: rank one, solves the complex moment map") {
    Inv1DProblem p = Inv1DProblem::cosine(cplx(0.2, 0.0), cplx(0.1, 0.0), 32);
    const HiggsField xi = assemble_xi(p);
    for (const CSym2& m : xi.xi.v) CHECK(std::abs(m.det()) < 1e-13);
    CHECK(sup_norm(complex_mm_residual(xi)) < 1e-11);

    // F == 0 gives the constant diagonal field
    Inv1DProblem p0 = Inv1DProblem::cosine(cplx(0.2, 0.0), cplx(0.0, 0.0), 16);
    const HiggsField xi0 = assemble_xi(p0);
    for (const CSym2& m : xi0.xi.v) {
        CHECK(m.m11 == cplx(0.2, 0.0));
        CHECK(m.m12 == cplx(0.0, 0.0));
        CHECK(m.m22 == cplx(0.0, 0.0));
    }
    p0.c = 0.0;
    CHECK_THROWS_AS(assemble_xi(p0), domain_error);
}

TEST_CASE("cubic_roots: quadratic-factor root at the flat point") {
    const double c = 0.2;
    const double k = -std::sqrt(1.0 - c * c);
    const auto roots = cubic_roots(c, 0.0, k);
    REQUIRE(!roots.empty());
    // at F = 0 the closure degenerates to -x^2 + 2kx + c^2 = 0, and with
    // k = -sqrt(1-c^2) the admissible root is x = 1 + k
    const double want = 1.0 - std::sqrt(0.96);
    bool seen = false;
    for (double r : roots)
        if (std::abs(r - want) < 1e-12) seen = true;
    CHECK(seen);
    CHECK(std::abs(want - 0.0202041) < 1e-7); // frozen digits

    // far outside the bracket k+1 in [0, |c|]: nothing admissible survives
    CHECK(cubic_roots(c, 0.0, -5.0).empty());
    CHECK(cubic_roots(c, 0.0, 2.0).empty());
    CHECK_THROWS_AS(cubic_roots(0.0, 0.0, 0.0), domain_error);
}

TEST_CASE("solve_inv1d: F == 0 reproduces the flat solution exactly") {
    Inv1DProblem p = Inv1DProblem::cosine(cplx(0.15, 0.1), cplx(0.0, 0.0), 32);
    const Inv1DSolution sol = solve_inv1d(p);
    const double cmod = std::abs(p.c);
    CHECK(std::abs(sol.k + std::sqrt(1.0 - cmod * cmod)) < 1e-12);
    for (double x : sol.phi) CHECK(std::abs(x) < 1e-12);
    CHECK(sol.residual_sup < 1e-12);
}

TEST_CASE("solve_inv1d: oscillatory F, residual and paper bounds") {
    Inv1DProblem p = Inv1DProblem::cosine(cplx(0.2, 0.0), cplx(0.1, 0.0), 64);
    const Inv1DSolution sol = solve_inv1d(p);
    CHECK(sol.residual_sup < 1e-10);
    CHECK(std::abs(sol.mean_phi) < 1e-12);
    CHECK(sol.bounds.hold);
    CHECK(sol.bounds.k_plus_1 >= 0.0);
    CHECK(sol.bounds.k_plus_1 <= 0.2 + 1e-12);
    CHECK(sol.bounds.min_one_plus_phi >= 0.8 - 1e-12);
    CHECK(sol.bounds.max_p < sol.bounds.coarse_bound);
    CHECK(sol.bounds.nonsing_margin >= 0.0);
    // phi is genuinely nonconstant here
    double lo = sol.phi[0], hi = sol.phi[0];
    for (double x : sol.phi) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(hi - lo > 1e-4);
}

TEST_CASE("solve_inv1d: uniqueness under a perturbed bracket") {
    Inv1DProblem p = Inv1DProblem::cosine(cplx(0.0, 0.2), cplx(0.05, 0.05), 32);
    const Inv1DSolution a = solve_inv1d(p);
    Inv1DOptions opts;
    opts.bracket_lo = -0.995;
    opts.bracket_hi_shift = -0.02;
    opts.prescan = 77;
    const Inv1DSolution b = solve_inv1d(p, opts);
    CHECK(std::abs(a.k - b.k) < 1e-9);
    for (std::size_t i = 0; i < a.phi.size(); ++i)
        CHECK(std::abs(a.phi[i] - b.phi[i]) < 1e-9);
}

TEST_CASE("solve_inv1d: input validation") {
    Inv1DProblem p = Inv1DProblem::cosine(cplx(0.35, 0.0), cplx(0.1, 0.0), 32);
    CHECK_THROWS_AS(solve_inv1d(p), domain_error); // |c| >= 3/10
    Inv1DProblem q = Inv1DProblem::cosine(cplx(0.2, 0.0), cplx(0.25, 0.0), 32);
    CHECK_THROWS_AS(solve_inv1d(q), domain_error); // |F| > |c|
}

TEST_CASE("lift_to_torus: flat and oscillatory residuals, integrability") {
    // F == 0 lifts to the flat potential with constant xi
    Inv1DProblem p0 = Inv1DProblem::cosine(cplx(0.2, 0.0), cplx(0.0, 0.0), 32);
    const Inv1DSolution s0 = solve_inv1d(p0);
    auto [u0, xi0] = lift_to_torus(p0, s0);
    CHECK(sup_norm(u0.h) < 1e-12);
    CHECK(sup_norm(real_mm_residual(HKState(u0, xi0))) < 1e-10);

    Inv1DProblem p = Inv1DProblem::cosine(cplx(0.2, 0.0), cplx(0.1, 0.0), 64);
    const Inv1DSolution sol = solve_inv1d(p);
    auto [u, xi] = lift_to_torus(p, sol);
    CHECK(sup_norm(real_mm_residual(HKState(u, xi))) < 1e-8);
    // nonconstant F: the solution is not an integrable deformation
    CHECK(integrability_defect(xi, u) > 1e-3);
}

TEST_CASE("first rank-one family xi = diag(0, w(y1)) forces the flat metric") {
    const TorusGrid g(16, 16);
    HiggsField xi(g);
    for (int i = 0; i < g.n1; ++i) {
        const cplx w = 0.3 * std::cos(2.0 * std::numbers::pi * i / g.n1);
        for (int j = 0; j < g.n2; ++j) xi.xi(i, j) = {0.0, 0.0, w};
    }
    CHECK(sup_norm(complex_mm_residual(xi)) < 1e-11);
    // the flat potential already solves the real moment map for this family
    CHECK(sup_norm(real_mm_residual(HKState(SymplecticPotential(g), xi))) < 1e-10);
    // and the solver keeps the metric flat when started off the solution
    const SymplecticPotential init(RSym2{1, 0, 1}, random_field(g, 9, 2, 5e-4));
    const SymplecticPotential u = solve_real_mm(xi, init, SolveOptions{1e-9, 50});
    CHECK(sup_norm(u.h) < 1e-8);
}

TEST_CASE("inv1d csv and report serialization") {
    Inv1DProblem p = Inv1DProblem::cosine(cplx(0.2, 0.0), cplx(0.08, 0.0), 32);
    const Inv1DSolution sol = solve_inv1d(p);
    const std::string csv = inv1d_to_csv(p, sol);
    CHECK(csv.substr(0, 18) == "y1,phi,F_re,F_im\n0");
    const std::string rep = inv1d_report_json(p, sol);
    CHECK(rep.find("\"k\":") != std::string::npos);
    CHECK(rep.find("\"hold\": true") != std::string::npos);
}

TEST_CASE("solve_real_mm recovers the translation-invariant profile") {
    // 1-D data lifted to the torus as the oracle for the 2-D Newton solver
    Inv1DProblem p = Inv1DProblem::cosine(cplx(0.2, 0.0), cplx(0.1, 0.0), 32);
    const Inv1DSolution sol = solve_inv1d(p);
    auto [u_ref, xi] = lift_to_torus(p, sol);

    const TorusGrid g(32, 32);
    const SymplecticPotential init(RSym2{1, 0, 1}, random_field(g, 314, 2, 2e-4));
    SolveReport rep;
    const SymplecticPotential u =
        solve_real_mm(xi, init, SolveOptions{1e-9, 40, default_exec()}, &rep);
    for (std::size_t i = 0; i < u.h.v.size(); ++i)
        CHECK(std::abs(u.h.v[i] - u_ref.h.v[i]) < 1e-7);
    CHECK(rep.residual_sup < 1e-9);
}
