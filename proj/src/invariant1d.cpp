#include "hcsck/invariant1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hcsck {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = 0.01; // fixed nonsingularity constant

// plain O(n^2) DFT helpers; n stays small for 1-D profiles
std::vector<cplx> dft(const std::vector<cplx>& f) {
    const int n = static_cast<int>(f.size());
    std::vector<cplx> out(n, 0.0);
    for (int k = 0; k < n; ++k) {
        cplx s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ph = -kTwoPi * k * i / n;
            s += f[i] * cplx(std::cos(ph), std::sin(ph));
        }
        out[k] = s / static_cast<double>(n);
    }
    return out;
}

std::vector<double> idft_real(const std::vector<cplx>& modes) {
    const int n = static_cast<int>(modes.size());
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double ph = kTwoPi * k * i / n;
            s += modes[k] * cplx(std::cos(ph), std::sin(ph));
        }
        out[i] = s.real();
    }
    return out;
}

// Closure of the field equation on the rank-one family, in x = k + 1/(1+phi):
//   |F/c|^2 + (1+phi) = 2x / (|c|^2 + x^2),  1+phi = 1/(x-k).
double residual_at(double cmod2, double Fmod2, double k, double phi) {
    const double x = k + 1.0 / (1.0 + phi);
    return Fmod2 / cmod2 + (phi + 1.0) - 2.0 * x / (cmod2 + x * x);
}

// Solutions satisfy 1+phi >= 1/(1+|c|) > 1-|c| and p <= |c| pointwise.
bool admissible_root(double x, double cmod, double Fmod, double k) {
    if (!(x > k) || !(x > 0.0) || x > 1.0 + cmod + 1e-12) return false;
    const double w = 1.0 / (x - k); // = 1 + phi
    if (w < 1.0 - cmod - 1e-12) return false;
    const double p = w * cmod * cmod + Fmod * Fmod;
    return p <= cmod + 1e-12;
}

std::vector<double> real_cubic_roots(double a3, double a2, double a1, double a0) {
    std::vector<double> roots;
    if (std::abs(a3) < 1e-14 * std::max({std::abs(a2), std::abs(a1), std::abs(a0)})) {
        // quadratic fallback (F -> 0 degenerates the leading coefficient)
        const double disc = a1 * a1 - 4.0 * a2 * a0;
        if (std::abs(a2) < 1e-300) {
            if (a1 != 0.0) roots.push_back(-a0 / a1);
        } else if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            roots.push_back((-a1 + s) / (2.0 * a2));
            roots.push_back((-a1 - s) / (2.0 * a2));
        }
        return roots;
    }
    const double b2 = a2 / a3, b1 = a1 / a3, b0 = a0 / a3;
    // depressed form t^3 + p t + q with x = t - b2/3
    const double p = b1 - b2 * b2 / 3.0;
    const double q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    if (disc >= 0.0 && p < 0.0) {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
        const double theta = std::acos(arg);
        for (int m = 0; m < 3; ++m)
            roots.push_back(r * std::cos((theta - kTwoPi * m) / 3.0) - b2 / 3.0);
    } else {
        const double half_q = 0.5 * q;
        const double s = std::sqrt(std::max(0.0, half_q * half_q + p * p * p / 27.0));
        roots.push_back(std::cbrt(-half_q + s) + std::cbrt(-half_q - s) - b2 / 3.0);
    }
    // polish on the monic cubic
    for (double& x : roots) {
        for (int it = 0; it < 3; ++it) {
            const double fx = ((x + b2) * x + b1) * x + b0;
            const double dfx = (3.0 * x + 2.0 * b2) * x + b1;
            if (dfx != 0.0) x -= fx / dfx;
        }
    }
    return roots;
}

} // namespace

std::vector<double> cubic_roots(double cmod, double Fmod, double k) {
    if (!(cmod > 0.0)) throw domain_error("cubic_roots: |c| must be positive");
    // clearing denominators in the closure gives, with r = |F/c|^2,
    //   r x^3 - (1 + k r) x^2 + (|F|^2 + 2k) x + (|c|^2 - k |F|^2) = 0
    const double r = Fmod * Fmod / (cmod * cmod);
    const double a3 = r;
    const double a2 = -(1.0 + k * r);
    const double a1 = Fmod * Fmod + 2.0 * k;
    const double a0 = cmod * cmod - k * Fmod * Fmod;
    std::vector<double> roots = real_cubic_roots(a3, a2, a1, a0);
    std::vector<double> out;
    for (double x : roots)
        if (admissible_root(x, cmod, Fmod, k)) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

Inv1DProblem Inv1DProblem::cosine(cplx c, cplx amplitude, int n) {
    Inv1DProblem p;
    p.c = c;
    p.n = n;
    p.F.resize(n);
    for (int i = 0; i < n; ++i) p.F[i] = amplitude * std::cos(kTwoPi * i / n);
    return p;
}

HiggsField assemble_xi(const Inv1DProblem& p) {
    if (p.c == cplx(0.0, 0.0))
        throw domain_error("assemble_xi: the rank-one family needs c != 0");
    const TorusGrid g(p.n, p.n);
    HiggsField out(g);
    for (int i = 0; i < g.n1; ++i) {
        const cplx F = p.F[i];
        const CSym2 m{p.c, F, F * F / p.c};
        for (int j = 0; j < g.n2; ++j) out.xi(i, j) = m;
    }
    return out;
}

namespace {

// node sweep at fixed k; returns false when some node has no admissible root
bool sweep_phi(const Inv1DProblem& p, double k, std::vector<double>& phi) {
    const double cmod = std::abs(p.c);
    phi.resize(p.F.size());
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < p.F.size(); ++i) {
        const auto roots = cubic_roots(cmod, std::abs(p.F[i]), k);
        if (roots.empty()) return false;
        double pick = roots.front(); // cold start: the perturbative branch
        if (std::isfinite(prev)) {
            for (double r : roots)
                if (std::abs(r - prev) < std::abs(pick - prev)) pick = r;
        }
        phi[i] = 1.0 / (pick - k) - 1.0;
        prev = pick;
    }
    return true;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

Inv1DSolution solve_inv1d(const Inv1DProblem& p, const Inv1DOptions& opts) {
    const double cmod = std::abs(p.c);
    if (!(cmod > 0.0 && cmod < 0.3))
        throw domain_error("solve_inv1d: guaranteed-existence entry point needs "
                           "0 < |c| < 3/10");
    for (const cplx& F : p.F)
        if (std::abs(F) > cmod + 1e-14)
            throw domain_error("solve_inv1d: |F| <= |c| violated");
    if (static_cast<int>(p.F.size()) != p.n || p.n < 8)
        throw domain_error("solve_inv1d: bad sample count");

    const double k_flat = -std::sqrt(1.0 - cmod * cmod);
    const double lo = opts.bracket_lo;
    const double hi = cmod - 1.0 + opts.bracket_hi_shift;

    // uniform pre-scan; pick the sign change nearest the F == 0 root
    std::vector<double> phi;
    struct Sample {
        double k, mean;
        bool valid;
    };
    std::vector<Sample> scan(opts.prescan);
    for (int i = 0; i < opts.prescan; ++i) {
        const double k = lo + (hi - lo) * i / (opts.prescan - 1);
        const bool ok = sweep_phi(p, k, phi);
        scan[i] = {k, ok ? mean_of(phi) : 0.0, ok};
    }
    double bra = 0.0, ket = 0.0;
    bool found = false;
    int changes = 0;
    double best_dist = 0.0;
    for (int i = 0; i + 1 < opts.prescan; ++i) {
        if (!scan[i].valid || !scan[i + 1].valid) continue;
        if (scan[i].mean == 0.0) {
            bra = ket = scan[i].k;
            found = true;
            continue;
        }
        if (scan[i].mean * scan[i + 1].mean <= 0.0) {
            ++changes;
            const double mid = 0.5 * (scan[i].k + scan[i + 1].k);
            const double dist = std::abs(mid - k_flat);
            if (!found || dist < best_dist) {
                bra = scan[i].k;
                ket = scan[i + 1].k;
                best_dist = dist;
                found = true;
            }
        }
    }
    if (!found)
        throw convergence_error("solve_inv1d: no admissible k with zero-mean phi in "
                                "the bracket; scan found no sign change");

    // bisection to machine precision
    double fa;
    sweep_phi(p, bra, phi);
    fa = mean_of(phi);
    for (int it = 0; it < 200 && ket - bra > 4e-16 * std::max(1.0, std::abs(bra));
         ++it) {
        const double mid = 0.5 * (bra + ket);
        if (!sweep_phi(p, mid, phi))
            throw convergence_error("solve_inv1d: admissibility lost during bisection");
        const double fm = mean_of(phi);
        if (fa * fm <= 0.0) {
            ket = mid;
        } else {
            bra = mid;
            fa = fm;
        }
    }
    const double k = 0.5 * (bra + ket);

    Inv1DSolution sol;
    sol.k = k;
    sol.multiple_sign_changes = changes > 1;
    if (!sweep_phi(p, k, sol.phi))
        throw convergence_error("solve_inv1d: admissibility lost at the root");
    sol.mean_phi = mean_of(sol.phi);
    // remove the leftover mean (within bisection tolerance) so phi = f'' exactly
    for (double& x : sol.phi) x -= sol.mean_phi;

    const double cmod2 = cmod * cmod;
    sol.residual_sup = 0.0;
    for (std::size_t i = 0; i < sol.phi.size(); ++i)
        sol.residual_sup = std::max(
            sol.residual_sup,
            std::abs(residual_at(cmod2, std::norm(p.F[i]), k, sol.phi[i])));

    // f by spectral double antiderivative, zero mean in both integrations
    std::vector<cplx> phic(sol.phi.begin(), sol.phi.end());
    std::vector<cplx> modes = dft(phic);
    for (int kk = 0; kk < p.n; ++kk) {
        if (kk == 0) {
            modes[kk] = 0.0;
            continue;
        }
        const int s = kk <= p.n / 2 ? kk : kk - p.n;
        modes[kk] /= -(kTwoPi * s) * (kTwoPi * s);
    }
    sol.f = idft_real(modes);

    // bounds ledger
    Inv1DBounds& b = sol.bounds;
    b.k_plus_1 = k + 1.0;
    b.min_one_plus_phi = 1.0 + *std::min_element(sol.phi.begin(), sol.phi.end());
    b.coarse_bound = cmod2 * (3.0 + cmod);
    b.max_p = 0.0;
    b.nonsing_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sol.phi.size(); ++i) {
        const double pv = (1.0 + sol.phi[i]) * cmod2 + std::norm(p.F[i]);
        b.max_p = std::max(b.max_p, pv);
        b.nonsing_margin =
            std::min(b.nonsing_margin, cmod2 * (1.0 - kEps) - pv * pv);
    }
    b.hold = b.k_plus_1 >= -1e-12 && b.k_plus_1 <= cmod + 1e-12 &&
             b.min_one_plus_phi >= 1.0 - cmod - 1e-12 && b.max_p < b.coarse_bound &&
             b.nonsing_margin >= 0.0;
    return sol;
}

std::pair<SymplecticPotential, HiggsField> lift_to_torus(const Inv1DProblem& p,
                                                         const Inv1DSolution& sol) {
    const TorusGrid g(p.n, p.n);
    RealField h(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) h(i, j) = sol.f[i];
    return {SymplecticPotential(RSym2{1, 0, 1}, std::move(h)), assemble_xi(p)};
}

std::string inv1d_to_csv(const Inv1DProblem& p, const Inv1DSolution& sol) {
    std::ostringstream os;
    os << "y1,phi,F_re,F_im\n";
    for (int i = 0; i < p.n; ++i) {
        os << fmt_g17(static_cast<double>(i) / p.n) << ',' << fmt_g17(sol.phi[i])
           << ',' << fmt_g17(p.F[i].real()) << ',' << fmt_g17(p.F[i].imag()) << '\n';
    }
    return os.str();
}

std::string inv1d_report_json(const Inv1DProblem& p, const Inv1DSolution& sol) {
    std::ostringstream os;
    os << "{ \"k\": " << fmt_g17(sol.k)
       << ", \"residual_sup\": " << fmt_g17(sol.residual_sup)
       << ", \"mean_phi\": " << fmt_g17(sol.mean_phi)
       << ", \"multiple_sign_changes\": "
       << (sol.multiple_sign_changes ? "true" : "false") << ", \"bounds\": {"
       << " \"k_plus_1\": " << fmt_g17(sol.bounds.k_plus_1)
       << ", \"c_abs\": " << fmt_g17(std::abs(p.c))
       << ", \"min_one_plus_phi\": " << fmt_g17(sol.bounds.min_one_plus_phi)
       << ", \"max_p\": " << fmt_g17(sol.bounds.max_p)
       << ", \"coarse_bound\": " << fmt_g17(sol.bounds.coarse_bound)
       << ", \"nonsing_margin\": " << fmt_g17(sol.bounds.nonsing_margin)
       << ", \"hold\": " << (sol.bounds.hold ? "true" : "false") << " } }";
    return os.str();
}

} // namespace hcsck
