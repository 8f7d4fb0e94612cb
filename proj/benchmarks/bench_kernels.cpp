// Timing harness for the node-wise kernels: each runs once through the serial
// reference path and once under OpenMP, checking bitwise agreement and
// reporting the speedup.

#include "hcsck/hk_torus.hpp"
#include "hcsck/potentials.hpp"

#include <chrono>
#include <cstdio>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace hcsck;

namespace {

template <class F>
double time_ms(const F& f, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s serial %8.2f ms   parallel %8.2f ms   speedup %.2fx   %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "bitwise-identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both paths run serially\n");
#endif
    apply_thread_cap_from_env();

    const TorusGrid g(256, 256);
    SymplecticPotential u(g);
    {
        RealField h(g);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j)
                h(i, j) = 2e-4 * std::cos(2.0 * std::numbers::pi * i / g.n1) *
                          std::cos(2.0 * std::numbers::pi * j / g.n2);
        u = SymplecticPotential(RSym2{1, 0, 1}, h);
    }
    const HiggsField xi = random_solution(g, 42, 8, 0.4);
    const RSym2Field G = hessian(u);

    // product sweep X = xi G conj(xi) G
    {
        CMat2Field xs, xp;
        const double ts = time_ms([&] { xs = higgs_product(xi.xi, G, Exec::serial); });
        const double tp = time_ms([&] { xp = higgs_product(xi.xi, G, Exec::parallel); });
        bool same = true;
        for (std::size_t i = 0; i < xs.v.size(); ++i)
            same = same && xs.v[i].a11 == xp.v[i].a11 && xs.v[i].a12 == xp.v[i].a12 &&
                   xs.v[i].a21 == xp.v[i].a21 && xs.v[i].a22 == xp.v[i].a22;
        report("higgs product sweep", ts, tp, same);
    }

    // spectral radius sweep (eigenvalues per node)
    {
        RealField rs, rp;
        const double ts = time_ms([&] { rs = spectral_radius_field(xi, u, Exec::serial); });
        const double tp = time_ms([&] { rp = spectral_radius_field(xi, u, Exec::parallel); });
        bool same = true;
        for (std::size_t i = 0; i < rs.v.size(); ++i) same = same && rs.v[i] == rp.v[i];
        report("spectral radius sweep", ts, tp, same);
    }

    // full real-moment-map residual (matrix square roots + transforms)
    {
        const HKState ss(u, xi, Exec::serial);
        RealField rs, rp;
        const double ts = time_ms([&] { rs = real_mm_residual(ss, Exec::serial); });
        const double tp = time_ms([&] { rp = real_mm_residual(ss, Exec::parallel); });
        bool same = true;
        for (std::size_t i = 0; i < rs.v.size(); ++i) same = same && rs.v[i] == rp.v[i];
        report("real moment map residual", ts, tp, same);
    }

    // Legendre dual-point Newton sweep
    {
        const TorusGrid gl(64, 64);
        ComplexPotential v(gl);
        v.h = random_field(gl, 7, 2, 5e-4);
        SymplecticPotential us_out, up_out;
        const double ts = time_ms([&] { us_out = legendre(v, Exec::serial); }, 2);
        const double tp = time_ms([&] { up_out = legendre(v, Exec::parallel); }, 2);
        bool same = true;
        for (std::size_t i = 0; i < us_out.h.v.size(); ++i)
            same = same && us_out.h.v[i] == up_out.h.v[i];
        report("legendre dual sweep 64x64", ts, tp, same);
    }
    return 0;
}
