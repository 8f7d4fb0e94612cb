#include <doctest.h>

#include "hcsck/higgs.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace hcsck;

namespace {

// set a single mode k (plus nothing else) in one entry of xi
HiggsField single_mode(const TorusGrid& g, int k1, int k2, const CSym2& coeff) {
    CplxField a(g), b(g), c(g);
    const int i = (k1 + g.n1) % g.n1, j = (k2 + g.n2) % g.n2;
    a(i, j) = coeff.m11;
    b(i, j) = coeff.m12;
    c(i, j) = coeff.m22;
    return higgs_from_entries(from_modes(a), from_modes(b), from_modes(c));
}

double sup_entries(const HiggsField& x) {
    double s = 0.0;
    for (const CSym2& m : x.xi.v)
        s = std::max({s, std::abs(m.m11), std::abs(m.m12), std::abs(m.m22)});
    return s;
}

} // namespace

TEST_CASE("complex_mm_residual: constants, single modes, linearity") {
    const TorusGrid g(16, 16);
    HiggsField c(g);
    for (CSym2& m : c.xi.v) m = {cplx(0.3, -0.2), cplx(0.1, 0.4), cplx(-0.7, 0.0)};
    CHECK(sup_norm(complex_mm_residual(c)) < 1e-13);

    // k = (1,0), xi_k = [[1,0],[0,0]]: residual mode amplitude -4 pi^2
    const HiggsField m1 = single_mode(g, 1, 0, CSym2{1.0, 0.0, 0.0});
    const CplxField r1 = to_modes(complex_mm_residual(m1));
    const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(r1(1, 0) - cplx(-four_pi_sq, 0.0)) < 1e-10);

    // k^T xi_k k = 0 for the off-diagonal mode at k = (1,0)
    const HiggsField m2 = single_mode(g, 1, 0, CSym2{0.0, 1.0, 0.0});
    CHECK(sup_norm(complex_mm_residual(m2)) < 1e-12);

    const HiggsField ra = higgs_from_entries(random_field_complex(g, 1, 4, 1.0),
                                             random_field_complex(g, 2, 4, 1.0),
                                             random_field_complex(g, 3, 4, 1.0));
    const HiggsField rb = higgs_from_entries(random_field_complex(g, 4, 4, 1.0),
                                             random_field_complex(g, 5, 4, 1.0),
                                             random_field_complex(g, 6, 4, 1.0));
    HiggsField sum(g);
    for (std::size_t i = 0; i < sum.xi.v.size(); ++i)
        sum.xi.v[i] = ra.xi.v[i] + rb.xi.v[i];
    const CplxField r_sum = complex_mm_residual(sum);
    const CplxField r_a = complex_mm_residual(ra);
    const CplxField r_b = complex_mm_residual(rb);
    for (std::size_t i = 0; i < r_sum.v.size(); ++i)
        CHECK(std::abs(r_sum.v[i] - r_a.v[i] - r_b.v[i]) < 1e-12);
}

TEST_CASE("mode characterization of the kernel, both directions") {
    const TorusGrid g(16, 16);
    // residual vanishes iff k^T xi_k k = 0 for every mode
    const HiggsField x = higgs_from_entries(random_field_complex(g, 7, 5, 1.0),
                                            random_field_complex(g, 8, 5, 1.0),
                                            random_field_complex(g, 9, 5, 1.0));
    const HiggsField p = project_complex_mm(x);
    const CplxField a = to_modes(entry11(p)), b = to_modes(entry12(p)),
                    c = to_modes(entry22(p));
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const double k1 = TorusGrid::freq(i, g.n1), k2 = TorusGrid::freq(j, g.n2);
            if (k1 == 0 && k2 == 0) continue;
            CHECK(std::abs(a(i, j) * k1 * k1 + 2.0 * b(i, j) * k1 * k2 +
                           c(i, j) * k2 * k2) < 1e-12);
        }
    // conversely: any nonzero k^T xi_k k forces a nonzero residual
    const HiggsField bad = single_mode(g, 2, 1, CSym2{1.0, 0.0, 0.5});
    CHECK(sup_norm(complex_mm_residual(bad)) > 1e-3);
}

TEST_CASE("project_complex_mm: idempotent, norm-nonincreasing, exact kernel") {
    const TorusGrid g(16, 16);
    const HiggsField x = higgs_from_entries(random_field_complex(g, 31, 5, 1.0),
                                            random_field_complex(g, 32, 5, 1.0),
                                            random_field_complex(g, 33, 5, 1.0));
    const HiggsField p = project_complex_mm(x);
    CHECK(sup_norm(complex_mm_residual(p)) < 1e-11);

    const HiggsField pp = project_complex_mm(p);
    double diff = 0.0, drop = 0.0, norm_x = 0.0, norm_p = 0.0;
    for (std::size_t i = 0; i < p.xi.v.size(); ++i) {
        diff = std::max(diff, (CMat2::from_sym(pp.xi.v[i]) -
                               CMat2::from_sym(p.xi.v[i])).max_abs());
        norm_x += frob_norm2_sym(x.xi.v[i]);
        norm_p += frob_norm2_sym(p.xi.v[i]);
    }
    (void)drop;
    CHECK(diff < 1e-13);
    CHECK(norm_p <= norm_x + 1e-12);

    // rank-one mode k k^T at k = (1,0) maps to zero
    const HiggsField kk = single_mode(g, 1, 0, CSym2{1.0, 0.0, 0.0});
    const HiggsField pk = project_complex_mm(kk);
    CHECK(sup_entries(pk) < 1e-13);
}

TEST_CASE("projection matches brute-force least squares on an 8x8 grid") {
    const TorusGrid g(8, 8);
    const std::size_t nn = g.size();
    const HiggsField x = higgs_from_entries(random_field_complex(g, 41, 3, 1.0),
                                            random_field_complex(g, 42, 3, 1.0),
                                            random_field_complex(g, 43, 3, 1.0));
    // variables: node values of (m11, m12, m22); L^2 x Frobenius inner product
    // with weights (1, 2, 1).  Assemble the residual operator column by column.
    const std::size_t nvar = 3 * nn;
    Eigen::MatrixXcd op(nn, nvar);
    for (std::size_t c = 0; c < nvar; ++c) {
        CplxField a(g), b(g), d(g);
        (c < nn ? a.v[c] : c < 2 * nn ? b.v[c - nn] : d.v[c - 2 * nn]) = 1.0;
        const CplxField r = complex_mm_residual(higgs_from_entries(a, b, d));
        for (std::size_t i = 0; i < nn; ++i) op(i, c) = r.v[i];
    }
    Eigen::VectorXcd xi_vec(nvar);
    for (std::size_t i = 0; i < nn; ++i) {
        xi_vec(i) = x.xi.v[i].m11;
        xi_vec(nn + i) = x.xi.v[i].m12;
        xi_vec(2 * nn + i) = x.xi.v[i].m22;
    }
    // weighted least-norm correction: xi' = xi - W^{-1} C^H (C W^{-1} C^H)^+ C xi
    Eigen::VectorXcd winv(nvar);
    for (std::size_t c = 0; c < nvar; ++c)
        winv(c) = (c >= nn && c < 2 * nn) ? 0.5 : 1.0;
    const Eigen::VectorXcd target = op * xi_vec;
    const Eigen::MatrixXcd cwc =
        op * winv.asDiagonal() * op.adjoint() +
        1e-12 * Eigen::MatrixXcd::Identity(nn, nn); // zero mode is null
    const Eigen::VectorXcd mult = cwc.ldlt().solve(target);
    const Eigen::VectorXcd corrected =
        xi_vec - winv.asDiagonal() * (op.adjoint() * mult);

    const HiggsField p = project_complex_mm(x);
    for (std::size_t i = 0; i < nn; ++i) {
        CHECK(std::abs(corrected(i) - p.xi.v[i].m11) < 1e-9);
        CHECK(std::abs(corrected(nn + i) - p.xi.v[i].m12) < 1e-9);
        CHECK(std::abs(corrected(2 * nn + i) - p.xi.v[i].m22) < 1e-9);
    }
}

TEST_CASE("random_solution: determinism, residual, amplitude, linear scaling") {
    const TorusGrid g(16, 16);
    const HiggsField a = random_solution(g, 2024, 4, 0.25);
    const HiggsField b = random_solution(g, 2024, 4, 0.25);
    for (std::size_t i = 0; i < a.xi.v.size(); ++i) {
        CHECK(a.xi.v[i].m11 == b.xi.v[i].m11);
        CHECK(a.xi.v[i].m12 == b.xi.v[i].m12);
        CHECK(a.xi.v[i].m22 == b.xi.v[i].m22);
    }
    CHECK(sup_norm(complex_mm_residual(a)) < 1e-11);
    CHECK(sup_entries(a) == doctest::Approx(0.25).epsilon(1e-14));

    const HiggsField twice = random_solution(g, 2024, 4, 0.5);
    for (std::size_t i = 0; i < a.xi.v.size(); ++i)
        CHECK(std::abs(twice.xi.v[i].m12 - 2.0 * a.xi.v[i].m12) < 1e-15);
}

TEST_CASE("integrability defect: Hessian-generated xi has none, generic does") {
    const TorusGrid g(16, 16);
    SymplecticPotential u(RSym2{1, 0, 1}, random_field(g, 51, 3, 0.003));
    const RSym2Field gi = invert(hessian(u));

    // xi = G^{-1} Hess(phi) G^{-1} for a random periodic phi
    const RealField phi = random_field(g, 52, 3, 0.01);
    const RealField p11 = partial(phi, 1, 2), p22 = partial(phi, 2, 2);
    const RealField p12 = partial(partial(phi, 1, 1), 2, 1);
    HiggsField x(g);
    for (std::size_t i = 0; i < x.xi.v.size(); ++i) {
        const CMat2 m = CMat2::from_rsym(gi.v[i]) *
                        CMat2::from_rsym(RSym2{p11.v[i], p12.v[i], p22.v[i]}) *
                        CMat2::from_rsym(gi.v[i]);
        x.xi.v[i] = {m.a11, m.a12, m.a22};
    }
    CHECK(integrability_defect(x, u) < 1e-10);

    // constant xi against a flat potential
    HiggsField c(g);
    for (CSym2& m : c.xi.v) m = {cplx(0.2, 0.1), cplx(0.0, -0.3), cplx(0.5, 0.0)};
    CHECK(integrability_defect(c, SymplecticPotential(g)) < 1e-13);

    // generic solution of the complex moment map is not integrable
    const HiggsField r = random_solution(g, 53, 4, 0.2);
    CHECK(integrability_defect(r, SymplecticPotential(g)) > 1e-3);
}

TEST_CASE("spectral_radius_field and xi_norm_field") {
    const TorusGrid g(16, 16);
    const SymplecticPotential flat(g);
    HiggsField zero(g);
    CHECK(sup_norm(spectral_radius_field(zero, flat)) == 0.0);
    CHECK(sup_norm(xi_norm_field(zero, flat)) == 0.0);

    // diag(a, 0) against the flat metric: delta+ = |a|^2, delta- = 0
    HiggsField d(g);
    const cplx a(0.3, -0.4);
    for (CSym2& m : d.xi.v) m = {a, 0.0, 0.0};
    const RealField rad = spectral_radius_field(d, flat);
    const RealField nrm = xi_norm_field(d, flat);
    for (std::size_t i = 0; i < rad.v.size(); ++i) {
        CHECK(std::abs(rad.v[i] - std::norm(a)) < 1e-14);
        CHECK(std::abs(nrm.v[i] - rad.v[i]) < 1e-12); // rank one: they coincide
    }

    // pointwise xi_norm >= spectral_radius
    SymplecticPotential u(RSym2{1, 0, 1}, random_field(g, 61, 3, 0.002));
    const HiggsField r = random_solution(g, 62, 4, 0.3);
    const RealField rr = spectral_radius_field(r, u), rn = xi_norm_field(r, u);
    for (std::size_t i = 0; i < rr.v.size(); ++i) CHECK(rn.v[i] >= rr.v[i] - 1e-13);
}

TEST_CASE("higgs JSON round trip") {
    const TorusGrid g(8, 8);
    const HiggsField x = random_solution(g, 5, 2, 0.1);
    const HiggsField back = higgs_from_json(higgs_to_json(x));
    for (std::size_t i = 0; i < x.xi.v.size(); ++i) {
        CHECK(back.xi.v[i].m11 == x.xi.v[i].m11);
        CHECK(back.xi.v[i].m12 == x.xi.v[i].m12);
        CHECK(back.xi.v[i].m22 == x.xi.v[i].m22);
    }
}

TEST_CASE("projection is self-adjoint for the mode-wise Frobenius pairing") {
    const TorusGrid g(16, 16);
    const HiggsField x = higgs_from_entries(random_field_complex(g, 71, 4, 1.0),
                                            random_field_complex(g, 72, 4, 1.0),
                                            random_field_complex(g, 73, 4, 1.0));
    const HiggsField y = higgs_from_entries(random_field_complex(g, 74, 4, 1.0),
                                            random_field_complex(g, 75, 4, 1.0),
                                            random_field_complex(g, 76, 4, 1.0));
    const HiggsField px = project_complex_mm(x);
    const HiggsField py = project_complex_mm(y);
    // node-wise L^2 x Frobenius pairing equals the mode-wise one by Parseval
    cplx lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        lhs += frob_sym(px.xi.v[i], y.xi.v[i]);
        rhs += frob_sym(x.xi.v[i], py.xi.v[i]);
    }
    CHECK(std::abs(lhs - rhs) / static_cast<double>(g.size()) < 1e-12);
}
