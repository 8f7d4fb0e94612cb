#pragma once

// Uniform periodic grids on the 2-torus R^2/Z^2 with Fourier-spectral
// differentiation, exact quadrature, and seeded band-limited random fields.
// Nodes sit at (i/n1, j/n2), stored row-major (index = i*n2 + j).  Mode
// arrays use the same layout with signed frequency k = i <= n/2 ? i : i - n.

#include "hcsck/common.hpp"
#include "hcsck/exec.hpp"
#include "hcsck/mat2.hpp"

#include <array>
#include <vector>

namespace hcsck {

struct TorusGrid {
    int n1 = 0, n2 = 0;

    TorusGrid() = default;
    TorusGrid(int a, int b);

    std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n2 + j; }
    std::array<double, 2> node(int i, int j) const {
        return {static_cast<double>(i) / n1, static_cast<double>(j) / n2};
    }
    // signed frequency along an axis
    static int freq(int i, int n) { return i <= n / 2 ? i : i - n; }
    bool operator==(const TorusGrid&) const = default;
};

template <class T>
struct Field {
    TorusGrid grid;
    std::vector<T> v;

    Field() = default;
    explicit Field(TorusGrid g, T fill = T{}) : grid(g), v(g.size(), fill) {}

    T& operator()(int i, int j) { return v[grid.idx(i, j)]; }
    const T& operator()(int i, int j) const { return v[grid.idx(i, j)]; }
};

using RealField = Field<double>;
using CplxField = Field<cplx>;
using Sym2Field = Field<CSym2>;   // complex symmetric per node
using RSym2Field = Field<RSym2>;  // real symmetric per node
using CMat2Field = Field<CMat2>;

// --- Fourier transforms (FFTW behind a plan cache) ---------------------------
// to_modes returns hat f_k = (1/(n1 n2)) sum f e^{-2 pi i k.y}; from_modes is
// the exact inverse, so the zero mode is the mean and Parseval holds with
// mean-square normalization on the node side.
CplxField to_modes(const CplxField& f);
CplxField to_modes(const RealField& f);
CplxField from_modes(const CplxField& modes);
RealField from_modes_real(const CplxField& modes);

// Spectral partial derivative along axis (1 or 2) of order 1 or 2.  The
// Nyquist mode of first derivatives is zeroed so real fields stay real.
CplxField partial(const CplxField& f, int axis, int order);
RealField partial(const RealField& f, int axis, int order);
CplxField partial_modes(const CplxField& modes, int axis, int order);

double mean(const RealField& f);
cplx mean(const CplxField& f);
double integrate(const RealField& f);
cplx integrate(const CplxField& f);

double sup_norm(const RealField& f);
double sup_norm(const CplxField& f);

// Deterministic band-limited real field: zero mean, modes supported on
// 0 < max(|k1|,|k2|) <= bandwidth, sup norm scaled to exactly `amplitude`.
RealField random_field(const TorusGrid& g, std::uint64_t seed, int bandwidth,
                       double amplitude);
CplxField random_field_complex(const TorusGrid& g, std::uint64_t seed, int bandwidth,
                               double amplitude);

// Evaluate the trigonometric interpolant at an arbitrary point of the torus.
cplx eval_modes_at(const CplxField& modes, double y1, double y2);
// ... together with its gradient and Hessian (for Newton inversions).
struct ScalarJet2 {
    double value = 0.0;
    std::array<double, 2> grad{0.0, 0.0};
    RSym2 hess;
};
ScalarJet2 eval_modes_jet(const CplxField& modes, double y1, double y2);

// --- serialization -----------------------------------------------------------
std::string field_to_csv(const RealField& f);
std::string field_to_json(const RealField& f);
RealField field_from_json(const std::string& text);

} // namespace hcsck
