#include "hcsck/higgs.hpp"

#include <cmath>
#include <sstream>

#include "vendor_json.hpp"

namespace hcsck {

CplxField entry11(const HiggsField& x) {
    CplxField f(x.grid());
    for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = x.xi.v[i].m11;
    return f;
}
CplxField entry12(const HiggsField& x) {
    CplxField f(x.grid());
    for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = x.xi.v[i].m12;
    return f;
}
CplxField entry22(const HiggsField& x) {
    CplxField f(x.grid());
    for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = x.xi.v[i].m22;
    return f;
}

HiggsField higgs_from_entries(const CplxField& m11, const CplxField& m12,
                              const CplxField& m22) {
    if (!(m11.grid == m12.grid) || !(m11.grid == m22.grid))
        throw domain_error("higgs_from_entries: grids differ");
    HiggsField out(m11.grid);
    for (std::size_t i = 0; i < out.xi.v.size(); ++i)
        out.xi.v[i] = {m11.v[i], m12.v[i], m22.v[i]};
    return out;
}

CplxField complex_mm_residual(const HiggsField& x) {
    const CplxField a = to_modes(entry11(x));
    const CplxField b = to_modes(entry12(x));
    const CplxField c = to_modes(entry22(x));
    CplxField acc = partial_modes(a, 1, 2);
    const CplxField ab = partial_modes(partial_modes(b, 1, 1), 2, 1);
    const CplxField cc = partial_modes(c, 2, 2);
    for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += 2.0 * ab.v[i] + cc.v[i];
    return from_modes(acc);
}

HiggsField project_complex_mm(const HiggsField& x) {
    CplxField a = to_modes(entry11(x));
    CplxField b = to_modes(entry12(x));
    CplxField c = to_modes(entry22(x));
    const TorusGrid& g = x.grid();
    for (int i = 0; i < g.n1; ++i) {
        const double k1 = TorusGrid::freq(i, g.n1);
        for (int j = 0; j < g.n2; ++j) {
            const double k2 = TorusGrid::freq(j, g.n2);
            if (k1 == 0.0 && k2 == 0.0) continue;
            const cplx quad = a(i, j) * k1 * k1 + 2.0 * b(i, j) * k1 * k2 +
                              c(i, j) * k2 * k2;
            const double norm4 = (k1 * k1 + k2 * k2) * (k1 * k1 + k2 * k2);
            const cplx t = quad / norm4;
            a(i, j) -= t * k1 * k1;
            b(i, j) -= t * k1 * k2;
            c(i, j) -= t * k2 * k2;
        }
    }
    return higgs_from_entries(from_modes(a), from_modes(b), from_modes(c));
}

HiggsField random_solution(const TorusGrid& g, std::uint64_t seed, int bandwidth,
                           double amplitude) {
    HiggsField raw(g);
    const CplxField e11 = random_field_complex(g, seed, bandwidth, 1.0);
    const CplxField e12 = random_field_complex(g, seed + 0x517cc1b727220a95ull,
                                               bandwidth, 1.0);
    const CplxField e22 = random_field_complex(g, seed + 0x2545f4914f6cdd1dull,
                                               bandwidth, 1.0);
    HiggsField sol = project_complex_mm(higgs_from_entries(e11, e12, e22));
    double sup = 0.0;
    for (const CSym2& m : sol.xi.v)
        sup = std::max({sup, std::abs(m.m11), std::abs(m.m12), std::abs(m.m22)});
    if (sup > 0.0) {
        const cplx s(amplitude / sup, 0.0);
        for (CSym2& m : sol.xi.v) m = s * m;
    }
    return sol;
}

double integrability_defect(const HiggsField& x, const SymplecticPotential& u) {
    const RSym2Field g = hessian(u);
    CplxField h11(x.grid()), h12(x.grid()), h22(x.grid());
    for (std::size_t i = 0; i < g.v.size(); ++i) {
        // H = G xi G, symmetric since G and xi are
        const CMat2 m = CMat2::from_rsym(g.v[i]) * CMat2::from_sym(x.xi.v[i]) *
                        CMat2::from_rsym(g.v[i]);
        h11.v[i] = m.a11;
        h12.v[i] = m.a12;
        h22.v[i] = m.a22;
    }
    const CplxField c1a = partial(h11, 2, 1), c1b = partial(h12, 1, 1);
    const CplxField c2a = partial(h12, 2, 1), c2b = partial(h22, 1, 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < c1a.v.size(); ++i)
        acc += std::norm(c1a.v[i] - c1b.v[i]) + std::norm(c2a.v[i] - c2b.v[i]);
    return std::sqrt(acc / static_cast<double>(c1a.v.size()));
}

CMat2Field higgs_product(const Sym2Field& xi, const RSym2Field& g, Exec exec) {
    CMat2Field out(xi.grid);
    parallel_for(xi.v.size(), exec, [&](std::size_t i) {
        const CMat2 xg = mul(xi.v[i], g.v[i]);
        const CMat2 xgc = mul(xi.v[i].conj(), g.v[i]);
        out.v[i] = xg * xgc;
    });
    return out;
}

RealField spectral_radius_field(const HiggsField& x, const SymplecticPotential& u,
                                Exec exec) {
    const CMat2Field prod = higgs_product(x.xi, hessian(u), exec);
    RealField out(x.grid());
    parallel_for(prod.v.size(), exec, [&](std::size_t i) {
        out.v[i] = spectral::spectrum_of(prod.v[i]).delta_plus;
    });
    return out;
}

RealField xi_norm_field(const HiggsField& x, const SymplecticPotential& u, Exec exec) {
    const CMat2Field prod = higgs_product(x.xi, hessian(u), exec);
    RealField out(x.grid());
    parallel_for(prod.v.size(), exec, [&](std::size_t i) {
        const auto s = spectral::spectrum_of(prod.v[i]);
        out.v[i] = s.delta_plus + s.delta_minus;
    });
    return out;
}

std::string higgs_to_json(const HiggsField& x) {
    std::ostringstream os;
    os << "{ \"n1\": " << x.grid().n1 << ", \"n2\": " << x.grid().n2
       << ", \"entries\": {";
    const char* names[3] = {"m11", "m12", "m22"};
    for (int e = 0; e < 3; ++e) {
        os << (e ? ", " : " ") << '"' << names[e] << "\": [";
        for (std::size_t i = 0; i < x.xi.v.size(); ++i) {
            const CSym2& m = x.xi.v[i];
            const cplx z = e == 0 ? m.m11 : e == 1 ? m.m12 : m.m22;
            if (i) os << ", ";
            os << fmt_g17(z.real()) << ", " << fmt_g17(z.imag());
        }
        os << "]";
    }
    os << " } }";
    return os.str();
}

HiggsField higgs_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TorusGrid g(j.at("n1").get<int>(), j.at("n2").get<int>());
    HiggsField out(g);
    const auto& e = j.at("entries");
    const char* names[3] = {"m11", "m12", "m22"};
    for (int k = 0; k < 3; ++k) {
        const auto& arr = e.at(names[k]);
        if (arr.size() != 2 * g.size())
            throw domain_error("higgs_from_json: entry array size mismatch");
        for (std::size_t i = 0; i < g.size(); ++i) {
            const cplx z(arr[2 * i].get<double>(), arr[2 * i + 1].get<double>());
            if (k == 0) out.xi.v[i].m11 = z;
            else if (k == 1) out.xi.v[i].m12 = z;
            else out.xi.v[i].m22 = z;
        }
    }
    return out;
}

} // namespace hcsck
