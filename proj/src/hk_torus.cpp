#include "hcsck/hk_torus.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>

namespace hcsck {

HKState::HKState(SymplecticPotential u, HiggsField xi, Exec exec)
    : u_(std::move(u)), xi_(std::move(xi)) {
    if (!(u_.grid() == xi_.grid()))
        throw domain_error("HKState: potential and Higgs field grids differ");
    g_ = hessian(u_);
    ginv_ = invert(g_);
    x_ = higgs_product(xi_.xi, g_, exec);
    spectra_.resize(x_.v.size());
    parallel_for(x_.v.size(), exec,
                 [&](std::size_t i) { spectra_[i] = spectral::spectrum_of(x_.v[i]); });
    double radius = 0.0;
    for (const auto& s : spectra_) radius = std::max(radius, s.delta_plus);
    margin_ = 1.0 - radius;
    if (!(radius <= 1.0 - kAdmissibilityMargin)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "inadmissible state: spectral radius %.17g exceeds 1 - 1e-6",
                      radius);
        throw inadmissible_error(buf);
    }
}

namespace {

// sum_ab d_a d_b M^{ab} for a complex 2x2 matrix field
CplxField double_divergence(const CMat2Field& m) {
    CplxField f11(m.grid), f12(m.grid), f22(m.grid);
    for (std::size_t i = 0; i < m.v.size(); ++i) {
        f11.v[i] = m.v[i].a11;
        f12.v[i] = m.v[i].a12 + m.v[i].a21;
        f22.v[i] = m.v[i].a22;
    }
    CplxField acc = partial_modes(to_modes(f11), 1, 2);
    const CplxField c = partial_modes(partial_modes(to_modes(f12), 1, 1), 2, 1);
    const CplxField d = partial_modes(to_modes(f22), 2, 2);
    for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += c.v[i] + d.v[i];
    return from_modes(acc);
}

RealField take_real_checked(const CplxField& f, const char* who) {
    RealField out(f.grid);
    double im = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        im = std::max(im, std::abs(f.v[i].imag()));
        out.v[i] = f.v[i].real();
    }
    if (im > 1e-10) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: imaginary part %.3g exceeds 1e-10", who, im);
        throw std::runtime_error(buf);
    }
    return out;
}

} // namespace

RealField real_mm_residual(const HKState& s, Exec exec) {
    CMat2Field m(s.X().grid);
    parallel_for(m.v.size(), exec, [&](std::size_t i) {
        m.v[i] = spectral::sqrt_one_minus(s.X().v[i]) * CMat2::from_rsym(s.Ginv().v[i]);
    });
    return take_real_checked(double_divergence(m), "real_mm_residual");
}

RealField real_mm_residual_psi_route(const HKState& s, Exec exec) {
    RealField grad = hk_gradient(s, exec);
    for (double& x : grad.v) x *= -2.0;
    return grad;
}

double hk_energy(const HKState& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.G().v.size(); ++i) {
        acc += -0.5 * std::log(s.G().v[i].det()) +
               0.5 * spectral::bg_function(s.spectra()[i]);
    }
    return acc / static_cast<double>(s.G().v.size());
}

RealField hk_gradient(const HKState& s, Exec exec) {
    CMat2Field m(s.X().grid);
    parallel_for(m.v.size(), exec, [&](std::size_t i) {
        const CMat2 ginv = CMat2::from_rsym(s.Ginv().v[i]);
        const CMat2 b = spectral::psi_of_matrix(s.X().v[i]) * s.X().v[i] * ginv;
        m.v[i] = (-0.5) * ginv + b;
    });
    return take_real_checked(double_divergence(m), "hk_gradient");
}

double second_variation(const HKState& s, const RealField& udot) {
    const CplxField um = to_modes(udot);
    const RealField d11 = from_modes_real(partial_modes(um, 1, 2));
    const RealField d22 = from_modes_real(partial_modes(um, 2, 2));
    const RealField d12 = from_modes_real(partial_modes(partial_modes(um, 1, 1), 2, 1));

    double acc = 0.0;
    for (std::size_t i = 0; i < s.G().v.size(); ++i) {
        const RSym2 gdot{d11.v[i], d12.v[i], d22.v[i]};
        const CMat2 gd = CMat2::from_rsym(gdot);
        const CMat2 gi = CMat2::from_rsym(s.Ginv().v[i]);
        const CMat2 gig = gi * gd;
        const double trg = gig.trace().real();
        const double trg2 = (gig * gig).trace().real();

        const CSym2& xi = s.xi().xi.v[i];
        const CMat2 xim = CMat2::from_sym(xi);
        const CMat2 xic = CMat2::from_sym(xi.conj());
        const CMat2 gm = CMat2::from_rsym(s.G().v[i]);

        const double x = s.X().v[i].trace().real();
        const double y = s.X().v[i].det().real();
        const double xdot = 2.0 * (xim * gm * xic * gd).trace().real();
        const double xddot = 2.0 * (xim * gd * xic * gd).trace().real();
        const double ydot = 2.0 * y * trg;
        const double yddot = 4.0 * y * trg * trg - 2.0 * y * trg2;

        const auto j = spectral::bg_jet(x, y);
        acc += 0.5 * trg2 +
               0.5 * (j.rx * xddot + j.ry * yddot + j.rxx * xdot * xdot +
                      2.0 * j.rxy * xdot * ydot + j.ryy * ydot * ydot);
    }
    return acc / static_cast<double>(s.G().v.size());
}

ConvexityReport convexity_probe(const SymplecticPotential& u0,
                                const SymplecticPotential& u1, const HiggsField& xi,
                                int samples) {
    if (samples < 3) throw domain_error("convexity_probe: need at least 3 samples");
    ConvexityReport rep;
    rep.samples = samples;

    double scale = 0.0;
    for (const CSym2& m : xi.xi.v)
        scale = std::max({scale, std::abs(m.m11), std::abs(m.m12), std::abs(m.m22)});
    const double tol = 1e-12 * std::max(1.0, scale * scale);
    rep.det_zero = true;
    rep.semidefinite = true;
    for (const CSym2& m : xi.xi.v) {
        if (std::abs(m.det()) > tol) rep.det_zero = false;
        if (m.real().det() < -tol || m.imag().det() < -tol) rep.semidefinite = false;
    }
    if (!rep.det_zero && !rep.semidefinite)
        throw domain_error("convexity_probe: hypothesis violated — xi has nonzero "
                           "determinant and Re(xi), Im(xi) are not both semidefinite");

    for (const SymplecticPotential* u : {&u0, &u1}) {
        const double nrm = sup_norm(xi_norm_field(xi, *u));
        rep.max_xi_norm_endpoints = std::max(rep.max_xi_norm_endpoints, nrm);
        if (!(nrm < 1.0))
            throw domain_error("convexity_probe: endpoint violates |xi|_u^2 < 1");
    }

    rep.energies.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / (samples - 1);
        RealField h(u0.grid());
        for (std::size_t i = 0; i < h.v.size(); ++i)
            h.v[i] = (1.0 - t) * u0.h.v[i] + t * u1.h.v[i];
        const RSym2 q = (1.0 - t) * u0.Q + t * u1.Q;
        rep.energies.push_back(hk_energy(HKState(SymplecticPotential(q, h), xi)));
    }
    double mn = 0.0;
    for (int k = 1; k + 1 < samples; ++k) {
        const double d2 =
            rep.energies[k - 1] - 2.0 * rep.energies[k] + rep.energies[k + 1];
        mn = k == 1 ? d2 : std::min(mn, d2);
    }
    rep.min_second_difference = mn;
    return rep;
}

// ---------------------------------------------------------------------------
// Newton solver over the real Fourier coefficients of h (zero mode pinned).

namespace {

struct ModeBasis {
    struct Dof {
        int i, j;
        bool imag_part;
    };
    TorusGrid g;
    std::vector<Dof> dofs;

    explicit ModeBasis(TorusGrid grid) : g(grid) {
        for (int i = 0; i < g.n1; ++i) {
            for (int j = 0; j < g.n2; ++j) {
                if (i == 0 && j == 0) continue;
                const int ci = (g.n1 - i) % g.n1, cj = (g.n2 - j) % g.n2;
                if (ci == i && cj == j) {
                    dofs.push_back({i, j, false}); // self-conjugate: real only
                } else if (std::make_pair(i, j) < std::make_pair(ci, cj)) {
                    dofs.push_back({i, j, false});
                    dofs.push_back({i, j, true});
                }
            }
        }
    }

    std::size_t size() const { return dofs.size(); }

    RealField synth(const Eigen::VectorXd& theta) const {
        CplxField modes{CplxField(g)};
        for (std::size_t d = 0; d < dofs.size(); ++d) {
            const auto& dof = dofs[d];
            const int ci = (g.n1 - dof.i) % g.n1, cj = (g.n2 - dof.j) % g.n2;
            const cplx add = dof.imag_part ? cplx(0.0, theta[d]) : cplx(theta[d], 0.0);
            modes(dof.i, dof.j) += add;
            if (ci != dof.i || cj != dof.j) modes(ci, cj) += std::conj(add);
        }
        return from_modes_real(modes);
    }

    Eigen::VectorXd analyze(const RealField& f) const {
        const CplxField modes = to_modes(f);
        Eigen::VectorXd theta(static_cast<Eigen::Index>(dofs.size()));
        for (std::size_t d = 0; d < dofs.size(); ++d) {
            const cplx z = modes(dofs[d].i, dofs[d].j);
            theta[d] = dofs[d].imag_part ? z.imag() : z.real();
        }
        return theta;
    }
};

} // namespace

SymplecticPotential solve_real_mm(const HiggsField& xi,
                                  const SymplecticPotential& u_init,
                                  const SolveOptions& opts, SolveReport* report) {
    const TorusGrid g = u_init.grid();
    const ModeBasis basis(g);
    const RSym2 q = u_init.Q;

    auto make_u = [&](const Eigen::VectorXd& theta) {
        return SymplecticPotential(q, basis.synth(theta));
    };

    Eigen::VectorXd theta = basis.analyze(u_init.h);
    HKState state(make_u(theta), xi, opts.exec);
    RealField res = real_mm_residual(state, opts.exec);
    Eigen::VectorXd fvec = basis.analyze(res);
    double sup = sup_norm(res);
    double energy = hk_energy(state);

    SolveReport rep;
    rep.energy_trace.push_back(energy);

    const auto n = static_cast<Eigen::Index>(basis.size());
    int it = 0;
    for (; it < opts.max_iter && sup > opts.tol; ++it) {
        // forward-difference Jacobian, column by column
        Eigen::MatrixXd jac(n, n);
        const double base_scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
        const double eps = 1e-7 * base_scale;
        for (Eigen::Index c = 0; c < n; ++c) {
            Eigen::VectorXd tp = theta;
            tp[c] += eps;
            const HKState sp(make_u(tp), xi, opts.exec);
            const Eigen::VectorXd fp =
                basis.analyze(real_mm_residual(sp, opts.exec));
            jac.col(c) = (fp - fvec) / eps;
        }
        const Eigen::VectorXd dir = jac.partialPivLu().solve(-fvec);

        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half, step *= 0.5) {
            const Eigen::VectorXd trial = theta + step * dir;
            try {
                HKState st(make_u(trial), xi, opts.exec);
                const RealField r = real_mm_residual(st, opts.exec);
                const double s = sup_norm(r);
                const double e = hk_energy(st);
                if (s < sup && e <= energy + 1e-12 * std::max(1.0, std::abs(energy))) {
                    theta = trial;
                    state = std::move(st);
                    res = r;
                    fvec = basis.analyze(res);
                    sup = s;
                    energy = e;
                    accepted = true;
                    break;
                }
            } catch (const inadmissible_error&) {
                // spectral radius too close to 1: halve the step
            } catch (const degenerate_potential_error&) {
            }
        }
        if (!accepted)
            throw convergence_error("solve_real_mm: line search failed to stay "
                                    "admissible while decreasing the residual");
        rep.energy_trace.push_back(energy);
    }
    if (sup > opts.tol)
        throw convergence_error("solve_real_mm: no convergence after max_iter");

    rep.iterations = it;
    rep.residual_sup = sup;
    rep.admissibility_min_margin = state.admissibility_margin();
    if (report) *report = rep;
    return state.u();
}

} // namespace hcsck
