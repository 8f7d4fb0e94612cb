#pragma once

// Higgs tensors xi on the torus: the linear complex moment map in Fourier
// modes, mode-wise orthogonal projection onto its kernel, admissibility
// fields, and the integrability defect.

#include "hcsck/potentials.hpp"
#include "hcsck/spectral.hpp"

namespace hcsck {

struct HiggsField {
    Sym2Field xi;

    HiggsField() = default;
    explicit HiggsField(TorusGrid g) : xi(g) {}
    const TorusGrid& grid() const { return xi.grid; }
};

// entry fields and their assembly
CplxField entry11(const HiggsField& x);
CplxField entry12(const HiggsField& x);
CplxField entry22(const HiggsField& x);
HiggsField higgs_from_entries(const CplxField& m11, const CplxField& m12,
                              const CplxField& m22);

// (xi^{ab})_{,ab} = d11 xi11 + 2 d12 xi12 + d22 xi22; linear in xi.
CplxField complex_mm_residual(const HiggsField& x);

// Mode-wise orthogonal projection (Frobenius pairing on symmetric matrices)
// onto {M : k^T M k = 0}: xi_k -> xi_k - (k^T xi_k k / |k|^4) k k^T.
HiggsField project_complex_mm(const HiggsField& x);

// Deterministic band-limited solution of the complex moment map with entry
// sup norm scaled to exactly `amplitude`.
HiggsField random_solution(const TorusGrid& g, std::uint64_t seed, int bandwidth,
                           double amplitude);

// L^2 norm of the two curl components of H = G xi G; zero iff H is a Hessian
// field up to spectral accuracy.
double integrability_defect(const HiggsField& x, const SymplecticPotential& u);

// node-wise delta_plus of xi G conj(xi) G
RealField spectral_radius_field(const HiggsField& x, const SymplecticPotential& u,
                                Exec exec = default_exec());
// node-wise delta_plus + delta_minus = Tr(xi G conj(xi) G)
RealField xi_norm_field(const HiggsField& x, const SymplecticPotential& u,
                        Exec exec = default_exec());

// X = xi G conj(xi) G per node (shared by the real moment map machinery)
CMat2Field higgs_product(const Sym2Field& xi, const RSym2Field& g,
                         Exec exec = default_exec());

std::string higgs_to_json(const HiggsField& x);
HiggsField higgs_from_json(const std::string& text);

} // namespace hcsck
