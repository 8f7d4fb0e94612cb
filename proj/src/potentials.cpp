#include "hcsck/potentials.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "vendor_json.hpp"

namespace hcsck {

SymplecticPotential::SymplecticPotential(RSym2 q, RealField hh) : Q(q), h(std::move(hh)) {
    if (!(Q.det() > 0.0 && Q.trace() > 0.0))
        throw domain_error("SymplecticPotential: Q must be positive-definite");
    const double m = mean(h);
    for (double& x : h.v) x -= m; // normalization: solutions are unique up to a constant
}

RSym2Field hessian(const SymplecticPotential& u) {
    const CplxField hm = to_modes(u.h);
    const RealField h11 = from_modes_real(partial_modes(hm, 1, 2));
    const RealField h22 = from_modes_real(partial_modes(hm, 2, 2));
    const RealField h12 = from_modes_real(partial_modes(partial_modes(hm, 1, 1), 2, 1));
    RSym2Field g(u.grid());
    for (int i = 0; i < g.grid.n1; ++i) {
        for (int j = 0; j < g.grid.n2; ++j) {
            RSym2 m{u.Q.a11 + h11(i, j), u.Q.a12 + h12(i, j), u.Q.a22 + h22(i, j)};
            if (!(m.det() > 0.0 && m.trace() > 0.0)) {
                char buf[160];
                std::snprintf(buf, sizeof(buf),
                              "degenerate potential: Hess u not positive-definite at "
                              "node (%d, %d), min eigenvalue %.6g",
                              i, j, m.min_eig());
                throw degenerate_potential_error(buf);
            }
            g(i, j) = m;
        }
    }
    return g;
}

RSym2Field invert(const RSym2Field& g) {
    RSym2Field out(g.grid);
    for (std::size_t i = 0; i < g.v.size(); ++i) out.v[i] = g.v[i].inverse();
    return out;
}

namespace {

// (M^{ab})_{,ab} for a real symmetric field: d11 M11 + 2 d12 M12 + d22 M22.
RealField double_divergence(const RSym2Field& m) {
    RealField f11(m.grid), f12(m.grid), f22(m.grid);
    for (std::size_t i = 0; i < m.v.size(); ++i) {
        f11.v[i] = m.v[i].a11;
        f12.v[i] = m.v[i].a12;
        f22.v[i] = m.v[i].a22;
    }
    const CplxField m11 = to_modes(f11), m12 = to_modes(f12), m22 = to_modes(f22);
    CplxField acc = partial_modes(m11, 1, 2);
    const CplxField c = partial_modes(partial_modes(m12, 1, 1), 2, 1);
    const CplxField d = partial_modes(m22, 2, 2);
    for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += 2.0 * c.v[i] + d.v[i];
    return from_modes_real(acc);
}

} // namespace

RealField abreu_scalar(const SymplecticPotential& u) {
    RealField s = double_divergence(invert(hessian(u)));
    for (double& x : s.v) x *= -0.25;
    return s;
}

namespace {

constexpr int kNewtonMax = 50;
constexpr double kNewtonTol = 1e-12;

struct DualSolve {
    Field<std::array<double, 2>> x;   // dual node positions
    RealField hu;                     // periodic part of u before mean removal
};

DualSolve solve_dual(const ComplexPotential& v, Exec exec) {
    const TorusGrid g = v.grid();
    const bool flat_h = sup_norm(v.h) == 0.0;
    if (!flat_h) {
        if (std::abs(v.Q.a11 - 1.0) > 0.0 || std::abs(v.Q.a22 - 1.0) > 0.0 ||
            v.Q.a12 != 0.0)
            throw domain_error("legendre: periodic perturbations require Q = I");
    }
    const CplxField hm = to_modes(v.h);
    const RSym2 qinv = v.Q.inverse();

    DualSolve out{Field<std::array<double, 2>>(g), RealField(g)};
    std::vector<int> fail(g.size(), 0);
    parallel_for(g.size(), exec, [&](std::size_t n) {
        const int i = static_cast<int>(n) / g.n2;
        const int j = static_cast<int>(n) % g.n2;
        const auto y = g.node(i, j);
        // solve grad v(x) = y
        double x1 = qinv.a11 * y[0] + qinv.a12 * y[1];
        double x2 = qinv.a12 * y[0] + qinv.a22 * y[1];
        bool ok = false;
        double hval = 0.0;
        for (int it = 0; it < kNewtonMax; ++it) {
            const ScalarJet2 jet = flat_h ? ScalarJet2{} : eval_modes_jet(hm, x1, x2);
            hval = jet.value;
            const double r1 = v.Q.a11 * x1 + v.Q.a12 * x2 + jet.grad[0] - y[0];
            const double r2 = v.Q.a12 * x1 + v.Q.a22 * x2 + jet.grad[1] - y[1];
            if (std::abs(r1) < kNewtonTol && std::abs(r2) < kNewtonTol) {
                ok = true;
                break;
            }
            const RSym2 hess{v.Q.a11 + jet.hess.a11, v.Q.a12 + jet.hess.a12,
                             v.Q.a22 + jet.hess.a22};
            const double det = hess.det();
            if (!(det > 0.0)) break; // non-convex sample
            x1 -= (hess.a22 * r1 - hess.a12 * r2) / det;
            x2 -= (-hess.a12 * r1 + hess.a11 * r2) / det;
        }
        if (!ok) {
            fail[n] = 1;
            return;
        }
        out.x.v[n] = {x1, x2};
        // u(y) = x.y - v(x); subtract the quadratic part of u to get h_u
        const double vx =
            0.5 * (v.Q.a11 * x1 * x1 + 2.0 * v.Q.a12 * x1 * x2 + v.Q.a22 * x2 * x2) +
            hval;
        const double uq = 0.5 * (qinv.a11 * y[0] * y[0] + 2.0 * qinv.a12 * y[0] * y[1] +
                                 qinv.a22 * y[1] * y[1]);
        out.hu.v[n] = x1 * y[0] + x2 * y[1] - vx - uq;
    });
    for (std::size_t n = 0; n < fail.size(); ++n)
        if (fail[n])
            throw convergence_error("legendre: Newton inversion of grad v failed "
                                    "(input not strongly convex?)");
    return out;
}

} // namespace

SymplecticPotential legendre(const ComplexPotential& v, Exec exec) {
    DualSolve d = solve_dual(v, exec);
    return SymplecticPotential(v.Q.inverse(), std::move(d.hu));
}

Field<std::array<double, 2>> legendre_dual_points(const ComplexPotential& v, Exec exec) {
    return solve_dual(v, exec).x;
}

RealField complex_side_scalar(const ComplexPotential& v) {
    const TorusGrid g = v.grid();
    const RSym2Field hess_v = hessian(v);
    const RSym2Field vinv = invert(hess_v);

    // third derivatives d_c v_{,ad} from the Hessian entry fields
    RealField e11(g), e12(g), e22(g);
    for (std::size_t i = 0; i < hess_v.v.size(); ++i) {
        e11.v[i] = hess_v.v[i].a11;
        e12.v[i] = hess_v.v[i].a12;
        e22.v[i] = hess_v.v[i].a22;
    }
    const CplxField m11 = to_modes(e11), m12 = to_modes(e12), m22 = to_modes(e22);
    auto third = [&](int a, int d, int c) {
        const CplxField* m = nullptr;
        if (a == 1 && d == 1) m = &m11;
        else if (a == 2 && d == 2) m = &m22;
        else m = &m12;
        return from_modes_real(partial_modes(*m, c, 1));
    };
    RealField t111 = third(1, 1, 1), t112 = third(1, 1, 2);
    RealField t121 = third(1, 2, 1), t122 = third(1, 2, 2);
    RealField t221 = third(2, 2, 1), t222 = third(2, 2, 2);

    // Gamma_a = v^{cd} d_c v_{,ad}
    RealField gamma1(g), gamma2(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const RSym2& w = vinv.v[i];
        gamma1.v[i] = w.a11 * t111.v[i] + w.a12 * (t112.v[i] + t121.v[i]) +
                      w.a22 * t122.v[i];
        gamma2.v[i] = w.a11 * t121.v[i] + w.a12 * (t122.v[i] + t221.v[i]) +
                      w.a22 * t222.v[i];
    }
    const RealField g11 = partial(gamma1, 1, 1), g12 = partial(gamma1, 2, 1);
    const RealField g21 = partial(gamma2, 1, 1), g22 = partial(gamma2, 2, 1);
    RealField s(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const RSym2& w = vinv.v[i];
        s.v[i] = -0.25 * (w.a11 * g11.v[i] + w.a12 * (g12.v[i] + g21.v[i]) +
                          w.a22 * g22.v[i]);
    }
    return s;
}

std::string potential_to_json(const SymplecticPotential& u) {
    std::ostringstream os;
    os << "{ \"Q\": [[" << fmt_g17(u.Q.a11) << ", " << fmt_g17(u.Q.a12) << "], ["
       << fmt_g17(u.Q.a12) << ", " << fmt_g17(u.Q.a22) << "]], \"h\": "
       << field_to_json(u.h) << " }";
    return os.str();
}

SymplecticPotential potential_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const auto& q = j.at("Q");
    RSym2 Q{q[0][0].get<double>(), q[0][1].get<double>(), q[1][1].get<double>()};
    RealField h = field_from_json(j.at("h").dump());
    return SymplecticPotential(Q, std::move(h));
}

} // namespace hcsck
