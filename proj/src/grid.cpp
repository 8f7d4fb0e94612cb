#include "hcsck/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "vendor_json.hpp"

namespace hcsck {

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

TorusGrid::TorusGrid(int a, int b) : n1(a), n2(b) {
    if (n1 < 8 || n2 < 8 || n1 % 2 || n2 % 2)
        throw domain_error("TorusGrid: resolutions must be even and >= 8");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW plans are cached per (n1, n2, sign); planning is serialized, execution
// on caller-owned buffers is thread-safe.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    void execute(const TorusGrid& g, int sign, cplx* data) {
        fftw_plan p;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_tuple(g.n1, g.n2, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<cplx> scratch(g.size());
                p = fftw_plan_dft_2d(g.n1, g.n2,
                                     reinterpret_cast<fftw_complex*>(scratch.data()),
                                     reinterpret_cast<fftw_complex*>(scratch.data()),
                                     sign, FFTW_ESTIMATE);
                if (!p) throw std::runtime_error("fftw_plan_dft_2d failed");
                plans_.emplace(key, p);
            } else {
                p = it->second;
            }
        }
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

  private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

} // namespace

CplxField to_modes(const CplxField& f) {
    CplxField out = f;
    PlanCache::instance().execute(f.grid, FFTW_FORWARD, out.v.data());
    const double norm = 1.0 / static_cast<double>(f.grid.size());
    for (auto& z : out.v) z *= norm;
    return out;
}

CplxField to_modes(const RealField& f) {
    CplxField c(f.grid);
    for (std::size_t i = 0; i < f.v.size(); ++i) c.v[i] = f.v[i];
    return to_modes(c);
}

CplxField from_modes(const CplxField& modes) {
    CplxField out = modes;
    PlanCache::instance().execute(modes.grid, FFTW_BACKWARD, out.v.data());
    return out;
}

RealField from_modes_real(const CplxField& modes) {
    CplxField c = from_modes(modes);
    RealField out(modes.grid);
    for (std::size_t i = 0; i < c.v.size(); ++i) out.v[i] = c.v[i].real();
    return out;
}

CplxField partial_modes(const CplxField& modes, int axis, int order) {
    if ((axis != 1 && axis != 2) || (order != 1 && order != 2))
        throw domain_error("partial: axis and order must be 1 or 2");
    CplxField out = modes;
    const TorusGrid& g = modes.grid;
    const int n = axis == 1 ? g.n1 : g.n2;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const int k = TorusGrid::freq(axis == 1 ? i : j, n);
            cplx factor;
            if (order == 1) {
                // odd-derivative convention: drop the Nyquist mode
                factor = (2 * k == n) ? cplx(0.0, 0.0) : cplx(0.0, kTwoPi * k);
            } else {
                factor = -kTwoPi * kTwoPi * static_cast<double>(k) * k;
            }
            out(i, j) *= factor;
        }
    }
    return out;
}

CplxField partial(const CplxField& f, int axis, int order) {
    return from_modes(partial_modes(to_modes(f), axis, order));
}

RealField partial(const RealField& f, int axis, int order) {
    return from_modes_real(partial_modes(to_modes(f), axis, order));
}

double mean(const RealField& f) {
    // trapezoid rule is exact-mean on a uniform periodic grid
    double s = 0.0;
    for (double x : f.v) s += x;
    return s / static_cast<double>(f.v.size());
}

cplx mean(const CplxField& f) {
    cplx s = 0.0;
    for (cplx x : f.v) s += x;
    return s / static_cast<double>(f.v.size());
}

double integrate(const RealField& f) { return mean(f); }
cplx integrate(const CplxField& f) { return mean(f); }

double sup_norm(const RealField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double sup_norm(const CplxField& f) {
    double m = 0.0;
    for (cplx x : f.v) m = std::max(m, std::abs(x));
    return m;
}

namespace {

CplxField random_modes(const TorusGrid& g, std::uint64_t seed, int bandwidth,
                       bool hermitian) {
    if (bandwidth < 1 || 2 * bandwidth >= std::min(g.n1, g.n2))
        throw domain_error("random_field: bandwidth too large for grid");
    Rng rng(seed);
    CplxField modes(g);
    // fixed iteration order for determinism
    for (int k1 = -bandwidth; k1 <= bandwidth; ++k1) {
        for (int k2 = -bandwidth; k2 <= bandwidth; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const int i = (k1 + g.n1) % g.n1;
            const int j = (k2 + g.n2) % g.n2;
            if (hermitian) {
                // fill each conjugate pair once, from the lexicographically
                // positive representative
                if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
                const cplx a = rng.uniform_complex(1.0);
                modes(i, j) = a;
                modes((g.n1 - i) % g.n1, (g.n2 - j) % g.n2) = std::conj(a);
            } else {
                modes(i, j) = rng.uniform_complex(1.0);
            }
        }
    }
    return modes;
}

} // namespace

RealField random_field(const TorusGrid& g, std::uint64_t seed, int bandwidth,
                       double amplitude) {
    RealField f = from_modes_real(random_modes(g, seed, bandwidth, true));
    const double sup = sup_norm(f);
    if (sup > 0.0) {
        const double s = amplitude / sup;
        for (double& x : f.v) x *= s;
    }
    return f;
}

CplxField random_field_complex(const TorusGrid& g, std::uint64_t seed, int bandwidth,
                               double amplitude) {
    CplxField f = from_modes(random_modes(g, seed, bandwidth, false));
    const double sup = sup_norm(f);
    if (sup > 0.0) {
        const double s = amplitude / sup;
        for (cplx& x : f.v) x *= s;
    }
    return f;
}

namespace {

// phase factors exp(2 pi i k y) per axis, indexed like the mode array
std::vector<cplx> phase_table(int n, double y) {
    std::vector<cplx> e(n);
    for (int i = 0; i < n; ++i) {
        const double phase = kTwoPi * TorusGrid::freq(i, n) * y;
        e[i] = cplx(std::cos(phase), std::sin(phase));
    }
    return e;
}

} // namespace

cplx eval_modes_at(const CplxField& modes, double y1, double y2) {
    const TorusGrid& g = modes.grid;
    const auto e1 = phase_table(g.n1, y1);
    const auto e2 = phase_table(g.n2, y2);
    cplx s = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < g.n2; ++j) row += modes(i, j) * e2[j];
        s += row * e1[i];
    }
    return s;
}

ScalarJet2 eval_modes_jet(const CplxField& modes, double y1, double y2) {
    const TorusGrid& g = modes.grid;
    const auto e1 = phase_table(g.n1, y1);
    const auto e2 = phase_table(g.n2, y2);
    cplx v = 0.0, d1 = 0.0, d2 = 0.0, d11 = 0.0, d12 = 0.0, d22 = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        const double w1 = kTwoPi * TorusGrid::freq(i, g.n1);
        cplx row = 0.0, row2 = 0.0, row22 = 0.0;
        for (int j = 0; j < g.n2; ++j) {
            const double w2 = kTwoPi * TorusGrid::freq(j, g.n2);
            const cplx e = modes(i, j) * e2[j];
            row += e;
            row2 += cplx(0.0, w2) * e;
            row22 -= w2 * w2 * e;
        }
        const cplx f = e1[i];
        v += row * f;
        d1 += cplx(0.0, w1) * row * f;
        d2 += row2 * f;
        d11 -= w1 * w1 * row * f;
        d12 += cplx(0.0, w1) * row2 * f;
        d22 += row22 * f;
    }
    ScalarJet2 out;
    out.value = v.real();
    out.grad = {d1.real(), d2.real()};
    out.hess = {d11.real(), d12.real(), d22.real()};
    return out;
}

std::string field_to_csv(const RealField& f) {
    std::ostringstream os;
    os << "y1,y2,value\n";
    for (int i = 0; i < f.grid.n1; ++i) {
        for (int j = 0; j < f.grid.n2; ++j) {
            auto y = f.grid.node(i, j);
            os << fmt_g17(y[0]) << ',' << fmt_g17(y[1]) << ',' << fmt_g17(f(i, j))
               << '\n';
        }
    }
    return os.str();
}

std::string field_to_json(const RealField& f) {
    std::ostringstream os;
    os << "{ \"n1\": " << f.grid.n1 << ", \"n2\": " << f.grid.n2 << ", \"values\": [";
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        if (i) os << ", ";
        os << fmt_g17(f.v[i]);
    }
    os << "] }";
    return os.str();
}

RealField field_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TorusGrid g(j.at("n1").get<int>(), j.at("n2").get<int>());
    RealField f(g);
    const auto& vals = j.at("values");
    if (vals.size() != f.v.size())
        throw domain_error("field_from_json: value count does not match grid");
    for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = vals[i].get<double>();
    return f;
}

} // namespace hcsck
