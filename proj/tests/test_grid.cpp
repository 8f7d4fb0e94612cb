#include <doctest.h>

#include "hcsck/grid.hpp"

#include <cmath>
#include <numbers>

using namespace hcsck;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

RealField sampled(const TorusGrid& g, double (*f)(double, double)) {
    RealField out(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            auto y = g.node(i, j);
            out(i, j) = f(y[0], y[1]);
        }
    return out;
}
} // namespace

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(TorusGrid(6, 16), domain_error);
    CHECK_THROWS_AS(TorusGrid(16, 7), domain_error);
    const TorusGrid g(16, 32);
    CHECK(g.size() == 512);
}

TEST_CASE("to_modes / from_modes round trip, zero mode, Parseval") {
    const TorusGrid g(16, 16);
    const RealField f = random_field(g, 5, 5, 1.0);
    const CplxField m = to_modes(f);
    const RealField back = from_modes_real(m);
    for (std::size_t i = 0; i < f.v.size(); ++i)
        CHECK(std::abs(f.v[i] - back.v[i]) < 1e-13);

    // constant field -> single zero mode, equal to the mean
    RealField c(g, 3.25);
    const CplxField cm = to_modes(c);
    CHECK(std::abs(cm(0, 0) - 3.25) < 1e-14);
    double rest = 0.0;
    for (std::size_t i = 1; i < cm.v.size(); ++i) rest += std::abs(cm.v[i]);
    CHECK(rest < 1e-12);
    CHECK(std::abs(mean(f) - to_modes(f)(0, 0).real()) < 1e-14);

    double node_sq = 0.0, mode_sq = 0.0;
    for (double x : f.v) node_sq += x * x;
    node_sq /= static_cast<double>(f.v.size());
    for (cplx z : m.v) mode_sq += std::norm(z);
    CHECK(std::abs(node_sq - mode_sq) < 1e-12);
}

TEST_CASE("spectral derivative exact on trigonometric polynomials") {
    const TorusGrid g(32, 16);
    const RealField f = sampled(g, [](double y1, double) { return std::cos(kTwoPi * y1); });
    const RealField d = partial(f, 1, 1);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const double want = -kTwoPi * std::sin(kTwoPi * i / g.n1);
            CHECK(std::abs(d(i, j) - want) < 1e-11);
        }

    const RealField c(g, 2.0);
    CHECK(sup_norm(partial(c, 1, 1)) < 1e-13);
    CHECK(sup_norm(partial(c, 2, 2)) < 1e-13);
}

TEST_CASE("mixed partials commute on band-limited fields") {
    const TorusGrid g(32, 32);
    const RealField f = random_field(g, 17, 9, 1.0);
    const RealField a = partial(partial(f, 1, 1), 2, 1);
    const RealField b = partial(partial(f, 2, 1), 1, 1);
    for (std::size_t i = 0; i < a.v.size(); ++i)
        CHECK(std::abs(a.v[i] - b.v[i]) < 1e-12);
}

TEST_CASE("mean and integrate") {
    const TorusGrid g(32, 32);
    CHECK(std::abs(mean(sampled(g, [](double y1, double) {
                       return std::sin(kTwoPi * y1);
                   }))) < 1e-14);
    CHECK(mean(RealField(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    const double m = mean(sampled(g, [](double y1, double) {
        const double c = std::cos(kTwoPi * y1);
        return c * c;
    }));
    CHECK(std::abs(m - 0.5) < 1e-13);
    CHECK(integrate(RealField(g, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("integration by parts on band-limited fields") {
    const TorusGrid g(32, 32);
    const RealField f = random_field(g, 3, 7, 1.0);
    const RealField h = random_field(g, 4, 7, 1.0);
    for (int axis : {1, 2}) {
        RealField fg(g), gf(g);
        const RealField dh = partial(h, axis, 1);
        const RealField df = partial(f, axis, 1);
        for (std::size_t i = 0; i < f.v.size(); ++i) {
            fg.v[i] = f.v[i] * dh.v[i];
            gf.v[i] = df.v[i] * h.v[i];
        }
        CHECK(std::abs(integrate(fg) + integrate(gf)) < 1e-11);
    }
}

TEST_CASE("random_field: determinism, zero mean, bandwidth, amplitude") {
    const TorusGrid g(32, 32);
    const RealField a = random_field(g, 12345, 6, 0.3);
    const RealField b = random_field(g, 12345, 6, 0.3);
    for (std::size_t i = 0; i < a.v.size(); ++i) CHECK(a.v[i] == b.v[i]);

    CHECK(std::abs(mean(a)) < 1e-15);
    CHECK(sup_norm(a) == doctest::Approx(0.3).epsilon(1e-15));

    const CplxField m = to_modes(a);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const int k1 = TorusGrid::freq(i, g.n1), k2 = TorusGrid::freq(j, g.n2);
            if (std::max(std::abs(k1), std::abs(k2)) > 6)
                CHECK(std::abs(m(i, j)) < 1e-14);
        }
    CHECK_THROWS_AS(random_field(g, 1, 16, 1.0), domain_error);
}

TEST_CASE("trigonometric interpolation jet matches spectral derivatives at nodes") {
    const TorusGrid g(16, 16);
    const RealField f = random_field(g, 77, 5, 1.0);
    const CplxField m = to_modes(f);
    const RealField d1 = partial(f, 1, 1), d2 = partial(f, 2, 1);
    const RealField d11 = partial(f, 1, 2), d22 = partial(f, 2, 2);
    const RealField d12 = partial(partial(f, 1, 1), 2, 1);
    for (int i = 0; i < g.n1; i += 3)
        for (int j = 0; j < g.n2; j += 3) {
            auto y = g.node(i, j);
            const ScalarJet2 jet = eval_modes_jet(m, y[0], y[1]);
            CHECK(std::abs(jet.value - f(i, j)) < 1e-12);
            CHECK(std::abs(jet.grad[0] - d1(i, j)) < 1e-10);
            CHECK(std::abs(jet.grad[1] - d2(i, j)) < 1e-10);
            CHECK(std::abs(jet.hess.a11 - d11(i, j)) < 1e-9);
            CHECK(std::abs(jet.hess.a12 - d12(i, j)) < 1e-9);
            CHECK(std::abs(jet.hess.a22 - d22(i, j)) < 1e-9);
        }
}

TEST_CASE("field JSON round trip and CSV header") {
    const TorusGrid g(8, 8);
    const RealField f = random_field(g, 3, 2, 1.0);
    const RealField back = field_from_json(field_to_json(f));
    for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(f.v[i] == back.v[i]);
    CHECK(field_to_csv(f).substr(0, 12) == "y1,y2,value\n");
}
