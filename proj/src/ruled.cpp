#include "hcsck/ruled.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace hcsck {

using cheb::Series;

double MomentumProfile::phi(double lambda) const {
    return m * lambda * (1.0 - lambda) * g(lambda);
}

double MomentumProfile::dphi(double lambda) const {
    const Series dg = cheb::derivative(g);
    return m * ((1.0 - 2.0 * lambda) * g(lambda) + lambda * (1.0 - lambda) * dg(lambda));
}

double MomentumProfile::ddphi(double lambda) const {
    const Series dg = cheb::derivative(g);
    const Series ddg = cheb::derivative(dg);
    return m * (-2.0 * g(lambda) + 2.0 * (1.0 - 2.0 * lambda) * dg(lambda) +
                lambda * (1.0 - lambda) * ddg(lambda));
}

double MomentumProfile::min_g(int samples) const {
    double mn = std::min(g(0.0), g(1.0));
    for (int i = 0; i < samples; ++i) mn = std::min(mn, g((i + 0.5) / samples));
    return mn;
}

MomentumProfile phi0(double m, int nodes) {
    if (!(m > 0.0)) throw domain_error("phi0: m must be positive");
    MomentumProfile p;
    p.m = m;
    p.nodes = nodes;
    // g0 = (4 + 2m - m(4+3m) lambda(1-lambda)) / (2(2+m));
    // lambda(1-lambda) = (1 - s^2)/4 = (T0 - T2)/8 ... expressed directly:
    const double denom = 2.0 * (2.0 + m);
    const double a = (4.0 + 2.0 * m) / denom;
    const double b = m * (4.0 + 3.0 * m) / denom;
    // lambda(1-lambda) = 1/4 - s^2/4 = 1/4 - (T2 + T0)/8 = T0/8 - T2/8
    p.g.c = {a - b / 8.0, 0.0, b / 8.0};
    return p;
}

double c0(double m) { return 2.0 * m * m; }

double c0_variant(double m, RuledVariant v) {
    return v == RuledVariant::standard ? 2.0 * m * m : 8.0 * m * m;
}

CurvatureSamples scal_from_profile(const MomentumProfile& p, double s_sigma,
                                   int samples) {
    CurvatureSamples out;
    const auto nodes = cheb::lobatto_nodes(samples - 1);
    const Series dg = cheb::derivative(p.g);
    const Series ddg = cheb::derivative(dg);
    out.tau.reserve(nodes.size());
    out.value.reserve(nodes.size());
    for (double l : nodes) {
        const double phip =
            p.m * ((1.0 - 2.0 * l) * p.g(l) + l * (1.0 - l) * dg(l));
        const double phipp = p.m * (-2.0 * p.g(l) + 2.0 * (1.0 - 2.0 * l) * dg(l) +
                                    l * (1.0 - l) * ddg(l));
        const double tau = l * p.m;
        // d/dtau = (1/m) d/dlambda
        out.tau.push_back(tau);
        out.value.push_back(s_sigma / (1.0 + tau) - phipp / (p.m * p.m) -
                            2.0 * phip / (p.m * (1.0 + tau)));
    }
    return out;
}

double curvature_weighted_integral(const MomentumProfile& p, double s_sigma) {
    // int_0^m s(tau)(1+tau) dtau = m int_0^1 [s_Sigma - phi''(l)(1+lm)/m^2
    //                                         - 2 phi'(l)/m] dlambda: polynomial
    const Series dg = cheb::derivative(p.g);
    const Series ddg = cheb::derivative(dg);
    const int deg = p.g.degree() + 4;
    const Series integrand = cheb::from_function(
        [&](double l) {
            const double phip =
                p.m * ((1.0 - 2.0 * l) * p.g(l) + l * (1.0 - l) * dg(l));
            const double phipp =
                p.m * (-2.0 * p.g(l) + 2.0 * (1.0 - 2.0 * l) * dg(l) +
                       l * (1.0 - l) * ddg(l));
            return p.m * (s_sigma - phipp * (1.0 + l * p.m) / (p.m * p.m) -
                          2.0 * phip / p.m);
        },
        std::max(8, deg));
    return cheb::integrate01(integrand);
}

double curvature_weighted_average(const MomentumProfile& p, double s_sigma) {
    // weight integral int_0^m (1+tau) dtau = m(2+m)/2
    return curvature_weighted_integral(p, s_sigma) / (p.m * (2.0 + p.m) / 2.0);
}

namespace {

// workspace shared by t_of_lambda, fm_residual and the solver: series for g,
// its derivatives, the regular factor a-tilde of (phi' + m) = m (1-lambda) at,
// and the antiderivative of the regular part of m/phi.
struct ProfileWorkspace {
    Series g, dg, ddg;
    Series at;   // (1 + (1-2l) g + l(1-l) g') / (1 - lambda)
    Series b;    // phi'' / m
    Series rint; // int_{1/2}^lambda (1/g - 1)/(x(1-x)) dx
    double drop = 0.0;

    explicit ProfileWorkspace(const MomentumProfile& p) {
        g = p.g;
        dg = cheb::derivative(g);
        ddg = cheb::derivative(dg);

        // a = 1 + (1-2l) g + l(1-l) g'
        const int deg = g.degree() + 3;
        const Series a = cheb::from_function(
            [&](double l) {
                return 1.0 + (1.0 - 2.0 * l) * g(l) + l * (1.0 - l) * dg(l);
            },
            std::max(4, deg));
        // a(1) = 1 - g(1) = 0 by the boundary normalization; factor it out
        auto div = cheb::divide_linear(a, 1.0);
        drop = div.remainder;
        at = cheb::scale(div.quotient, -1.0); // a = (1-l) at

        b = cheb::from_function(
            [&](double l) {
                return -2.0 * g(l) + 2.0 * (1.0 - 2.0 * l) * dg(l) +
                       l * (1.0 - l) * ddg(l);
            },
            std::max(4, deg));

        // r = (1/g - 1)/(l(1-l)), regular with r(0) = -g'(0), r(1) = g'(1)
        const int rdeg = std::max(32, 4 * g.degree() + 16);
        const auto nodes = cheb::lobatto_nodes(rdeg);
        std::vector<double> rv(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double l = nodes[i];
            if (l < 1e-12) rv[i] = -dg(0.0);
            else if (l > 1.0 - 1e-12) rv[i] = dg(1.0);
            else rv[i] = (1.0 / g(l) - 1.0) / (l * (1.0 - l));
        }
        rint = cheb::antiderivative(cheb::from_lobatto_values(rv), 0.5);
    }

    // e^t without the log(lambda/(1-lambda)) factor
    double regular_exp(double l) const { return std::exp(rint(l)); }
};

} // namespace

double t_of_lambda(const MomentumProfile& p, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw domain_error("t_of_lambda: interior points only");
    const ProfileWorkspace w(p);
    return std::log(lambda / (1.0 - lambda)) + w.rint(lambda);
}

namespace {

std::vector<double> fm_residual_ws(const MomentumProfile& p, double c,
                                   RuledVariant variant, int count,
                                   const ProfileWorkspace& w) {
    const double m = p.m;
    const auto nodes = cheb::gauss_nodes(count > 0 ? count : p.nodes);
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double l = nodes[i];
        const double gl = w.g(l);
        const double bl = w.b(l);
        const double atl = w.at(l);
        const double E = w.regular_exp(l);
        const double denom = 1.0 + l * m;
        const double phip = m * ((1.0 - 2.0 * l) * gl + l * (1.0 - l) * w.dg(l));
        const double cscK =
            m * bl + (2.0 * m * phip + m * m) / denom;
        if (variant == RuledVariant::standard) {
            // c/m^2 e^t ((phi'+m)^2 + phi phi'')/(1+lm)
            //   = c l E [ (1-l) at^2 + l g b ] / (1+lm)
            const double coupling =
                c * l * E * ((1.0 - l) * atl * atl + l * gl * bl) / denom;
            out[i] = cscK + 4.0 * m / (2.0 + m) - coupling;
        } else {
            // X = (c/m) l^2 g E / (1+lm), kept strictly below 1
            const double x = (c / m) * l * l * gl * E / denom;
            if (!(x < 1.0 - 1e-12))
                throw domain_error("fm_residual: norm-variant argument reached 1");
            const double root = std::sqrt(1.0 - x);
            const double tail =
                c * E *
                (m * m * l * l * l * (1.0 - l) * gl * gl / (denom * denom) -
                 l * (1.0 - l) * atl * atl) /
                (2.0 * root * denom);
            out[i] = (1.0 + root) * cscK + 8.0 * m / (2.0 + m) + tail;
        }
    }
    return out;
}

} // namespace

std::vector<double> fm_residual(const MomentumProfile& p, double c,
                                RuledVariant variant, int count) {
    if (p.min_g() <= 0.0) throw domain_error("fm_residual: g must stay positive");
    const ProfileWorkspace w(p);
    return fm_residual_ws(p, c, variant, count, w);
}

LinearizedInverse linearized_inverse(const Series& f) {
    LinearizedInverse out;
    const Series i1 = cheb::antiderivative(f, 0.0);
    const Series i2 = cheb::antiderivative(i1, 0.0);
    out.k = -6.0 * i2(1.0);
    // u = i2 - 2k (l^4/4 - l^3/3)
    const Series quartic = cheb::from_function(
        [&](double l) { return l * l * l * (l / 4.0 - 1.0 / 3.0); }, 4);
    out.u = cheb::add(i2, cheb::scale(quartic, -2.0 * out.k));
    return out;
}

namespace {

MomentumProfile profile_from_correction(double m, int nodes, const Series& corr) {
    // phi = phi0 + lambda^2 (1-lambda)^2 corr  <=>  g = g0 + l(1-l) corr / m
    MomentumProfile p = phi0(m, nodes);
    p.g = cheb::add(p.g, cheb::scale(cheb::times_lambda_one_minus(corr), 1.0 / m));
    return p;
}

double sup_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

} // namespace

RuledSolution solve_ruled(double m, const RuledOptions& opts) {
    if (!(m > 0.0)) throw domain_error("solve_ruled: m must be positive");
    if (m > 0.2)
        throw domain_error("solve_ruled: adiabatic regime is validated for m <= 0.2");
    const int n = opts.nodes;

    // unknowns: correction coefficients (n-1 of them) plus the constant c
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    z[n - 1] = c0_variant(m, opts.variant);

    auto build = [&](const Eigen::VectorXd& zz) {
        Series corr;
        corr.c.assign(zz.data(), zz.data() + n - 1);
        return profile_from_correction(m, n, corr);
    };
    auto eval = [&](const Eigen::VectorXd& zz) {
        const MomentumProfile p = build(zz);
        if (p.min_g() <= 0.0)
            throw domain_error("solve_ruled: positivity lost");
        if (!(zz[n - 1] > 0.0)) throw domain_error("solve_ruled: c must stay positive");
        const ProfileWorkspace w(p);
        return fm_residual_ws(p, zz[n - 1], opts.variant, n, w);
    };

    // refine the start with the explicit first-order inverse
    {
        const auto r0 = eval(z);
        const Series f = cheb::from_gauss_values(r0);
        const LinearizedInverse li = linearized_inverse(cheb::scale(f, -1.0));
        // push u into the correction parametrization: u / (l^2 (1-l)^2)
        auto d1 = cheb::divide_linear(li.u, 0.0);
        auto d2 = cheb::divide_linear(d1.quotient, 0.0);
        auto d3 = cheb::divide_linear(d2.quotient, 1.0);
        auto d4 = cheb::divide_linear(d3.quotient, 1.0);
        Eigen::VectorXd z2 = z;
        for (int j = 0; j < n - 1 && j <= d4.quotient.degree(); ++j)
            z2[j] += d4.quotient.c[j];
        z2[n - 1] += li.k;
        try {
            if (sup_abs(eval(z2)) < sup_abs(r0)) z = z2;
        } catch (const domain_error&) {
            // keep the plain approximate solution as the start
        }
    }

    std::vector<double> res = eval(z);
    double sup = sup_abs(res);

    RuledSolution sol;
    sol.variant = opts.variant;
    int it = 0;
    for (; it < opts.max_iter && sup > opts.tol; ++it) {
        Eigen::MatrixXd jac(n, n);
        const double eps = 1e-7 * std::max(1.0, z.cwiseAbs().maxCoeff());
        for (int col = 0; col < n; ++col) {
            Eigen::VectorXd zp = z;
            zp[col] += eps;
            std::vector<double> rp;
            try {
                rp = eval(zp);
            } catch (const domain_error&) {
                zp[col] = z[col] - eps;
                rp = eval(zp);
                for (int row = 0; row < n; ++row)
                    jac(row, col) = (res[row] - rp[row]) / eps;
                continue;
            }
            for (int row = 0; row < n; ++row) jac(row, col) = (rp[row] - res[row]) / eps;
        }
        Eigen::VectorXd rhs(n);
        for (int row = 0; row < n; ++row) rhs[row] = -res[row];
        const Eigen::VectorXd dir = jac.partialPivLu().solve(rhs);

        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half < 40; ++half, step *= 0.5) {
            const Eigen::VectorXd trial = z + step * dir;
            try {
                const auto rt = eval(trial);
                const double st = sup_abs(rt);
                if (st < sup) {
                    z = trial;
                    res = rt;
                    sup = st;
                    accepted = true;
                    break;
                }
            } catch (const domain_error&) {
                // positivity or admissibility lost: halve
            }
        }
        if (!accepted)
            throw convergence_error("solve_ruled: line search stalled before reaching "
                                    "the tolerance");
    }
    if (sup > opts.tol)
        throw convergence_error("solve_ruled: no convergence within max_iter");

    sol.profile = build(z);
    sol.c = z[n - 1];
    sol.residual_sup = sup;
    sol.iterations = it;
    return sol;
}

std::string ruled_to_json(const RuledSolution& sol, int phi_samples) {
    std::ostringstream os;
    os << "{ \"m\": " << fmt_g17(sol.profile.m) << ", \"c\": " << fmt_g17(sol.c)
       << ", \"variant\": \""
       << (sol.variant == RuledVariant::standard ? "standard" : "norm")
       << "\", \"residual_sup\": " << fmt_g17(sol.residual_sup)
       << ", \"iterations\": " << sol.iterations << ", \"g_coeffs\": [";
    for (std::size_t j = 0; j < sol.profile.g.c.size(); ++j) {
        if (j) os << ", ";
        os << fmt_g17(sol.profile.g.c[j]);
    }
    os << "], \"phi_samples\": [";
    for (int i = 0; i < phi_samples; ++i) {
        const double l = static_cast<double>(i) / (phi_samples - 1);
        if (i) os << ", ";
        os << '[' << fmt_g17(l) << ", " << fmt_g17(sol.profile.phi(l)) << ']';
    }
    os << "] }";
    return os.str();
}

} // namespace hcsck
