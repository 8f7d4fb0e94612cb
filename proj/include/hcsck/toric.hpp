#pragma once

// Toric-surface stability toolkit: Delzant polytopes, Guillemin potentials,
// the sigma boundary measure, the Donaldson-Futaki functional L_C, a crease
// stability probe, integration-by-parts checks for the moment-map operators,
// and the boundary-refined HK-energy.

#include "hcsck/jet.hpp"
#include "hcsck/mat2.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hcsck::toric {

using Vec2 = std::array<double, 2>;

// bivariate polynomial sum c x^i y^j
template <class T>
struct Poly2 {
    struct Term {
        int i = 0, j = 0;
        T c{};
    };
    std::vector<Term> terms;

    T operator()(double x, double y) const {
        T acc{};
        for (const Term& t : terms)
            acc += t.c * std::pow(x, t.i) * std::pow(y, t.j);
        return acc;
    }
    Poly2 dx() const {
        Poly2 out;
        for (const Term& t : terms)
            if (t.i > 0) out.terms.push_back({t.i - 1, t.j, static_cast<double>(t.i) * t.c});
        return out;
    }
    Poly2 dy() const {
        Poly2 out;
        for (const Term& t : terms)
            if (t.j > 0) out.terms.push_back({t.i, t.j - 1, static_cast<double>(t.j) * t.c});
        return out;
    }
    Jet2<T> jet(double x, double y) const {
        Jet2<T> out;
        out.v = (*this)(x, y);
        const Poly2 px = dx(), py = dy();
        out.g = {px(x, y), py(x, y)};
        out.h = {px.dx()(x, y), px.dy()(x, y), py.dy()(x, y)};
        return out;
    }
    bool empty() const { return terms.empty(); }
};

using RealPoly = Poly2<double>;
using CplxPoly = Poly2<cplx>;

// smooth symmetric complex matrix datum Phi on the polytope
struct MatrixPoly {
    CplxPoly p11, p12, p22;
    static MatrixPoly identity();
};

struct Facet {
    std::array<long, 2> normal; // primitive integer inward normal
    double offset = 0.0;        // ell(y) = <normal, y> + offset
};

struct DelzantPolytope {
    std::vector<Facet> facets;
    std::vector<Vec2> vertices;              // counterclockwise, from validate
    std::vector<std::array<int, 2>> edges;   // per facet: vertex index pair

    double ell(int r, const Vec2& y) const {
        return facets[r].normal[0] * y[0] + facets[r].normal[1] * y[1] +
               facets[r].offset;
    }
    Vec2 centroid() const;
    double area() const;
};

// computes vertices/edges and checks boundedness, nonempty interior,
// primitive normals and the unimodular vertex condition; throws on failure
// with the violated condition named.
DelzantPolytope validate_delzant(std::vector<Facet> facets);

DelzantPolytope unit_square();
DelzantPolytope standard_simplex();
DelzantPolytope scaled(const DelzantPolytope& p, double t);
DelzantPolytope polytope_from_json(const std::string& text);

// piecewise-linear convex function max over affine pieces
struct PLConvexFn {
    struct Piece {
        Vec2 a{};
        double b = 0.0;
    };
    std::vector<Piece> pieces;
    double operator()(const Vec2& y) const;
};

// --- Guillemin potential -----------------------------------------------------
double guillemin_potential(const DelzantPolytope& p, const Vec2& y);
RSym2 guillemin_hessian(const DelzantPolytope& p, const Vec2& y,
                        const RealPoly* h = nullptr);

struct KernelDecayReport {
    double fitted_order = 0.0;
    std::vector<double> ell_values;
    std::vector<double> kernel_norms;
};
// |G^{-1} grad(ell_r)| ~ ell_r along the inward normal ray from the facet
// midpoint; the fitted log-log slope must be near 1.
KernelDecayReport boundary_kernel_check(const DelzantPolytope& p, const RealPoly& h,
                                        int facet, int samples = 12);

// --- quadrature ----------------------------------------------------------------
using ScalarFn = std::function<double(const Vec2&)>;

// The boundary measure on a facet with primitive inward normal nu comes in
// two normalizations: Lebesgue / |nu|^2 (the convention the sigma-integral
// arithmetic below is stated in) and Donaldson's lattice measure
// Lebesgue / |nu| (the one produced by the integration-by-parts boundary
// terms, under which the Futaki functional of the standard simplex vanishes
// on affine functions).  Both are exposed; reports record which one was used.
enum class BoundaryMeasure { inverse_norm2, lattice };

double lebesgue_integral(const DelzantPolytope& p, const ScalarFn& f);
double lebesgue_integral(const DelzantPolytope& p, const PLConvexFn& f);
double sigma_integral(const DelzantPolytope& p, const ScalarFn& f,
                      BoundaryMeasure bm = BoundaryMeasure::inverse_norm2);
double sigma_integral(const DelzantPolytope& p, const PLConvexFn& f,
                      BoundaryMeasure bm = BoundaryMeasure::inverse_norm2);
// graded variants for integrands that are singular at the boundary
double lebesgue_integral_graded(const DelzantPolytope& p, const ScalarFn& f,
                                int levels = 36);
double sigma_integral_graded(const DelzantPolytope& p, const ScalarFn& f,
                             int levels = 36,
                             BoundaryMeasure bm = BoundaryMeasure::inverse_norm2);

// inner polytope with every side moved inward by distance delta
DelzantPolytope shrink(const DelzantPolytope& p, double delta);

// --- Donaldson-Futaki --------------------------------------------------------
// C with L_C(1) = 0: sigma-perimeter over area
double futaki_constant(const DelzantPolytope& p,
                       BoundaryMeasure bm = BoundaryMeasure::inverse_norm2);

double donaldson_functional(const DelzantPolytope& p, const ScalarFn& f, double c,
                            BoundaryMeasure bm = BoundaryMeasure::inverse_norm2);
double donaldson_functional(const DelzantPolytope& p, const PLConvexFn& f, double c,
                            BoundaryMeasure bm = BoundaryMeasure::inverse_norm2);
// L_C on the coordinate functions in the lattice normalization, where the
// value is the Futaki invariant and vanishes for the standard simplex
std::array<double, 2> futaki_vector(const DelzantPolytope& p);

struct StabilityProbeReport {
    double min_value = 0.0;
    Vec2 argmin_a{};
    double argmin_b = 0.0;
    int creases_tested = 0;
    bool probe_destabilized = false;
};
// minimum of L_C over a deterministic family of normalized crease functions
// max(0, <a,y> + b) with small integer directions a
StabilityProbeReport stability_probe(const DelzantPolytope& p, int samples = 8);

// --- moment-map integrands and checks ----------------------------------------
// jets of G = Hess(u_P + h) and of xi = G^{-1} Phi G^{-1} at an interior point
MatJet2<double> hessian_jet(const DelzantPolytope& p, const RealPoly& h,
                            const Vec2& y);
MatJet2<cplx> xi_jet(const DelzantPolytope& p, const RealPoly& h,
                     const MatrixPoly& phi, const Vec2& y);
// M = sqrt(1 - G^{-1} Phi G^{-1} conj(Phi)) G^{-1}
MatJet2<cplx> sqrt_residual_jet(const DelzantPolytope& p, const RealPoly& h,
                                const MatrixPoly& phi, const Vec2& y);

struct IntByPartsReport {
    double defect = 0.0;               // extrapolated delta -> 0
    std::vector<double> deltas;
    std::vector<double> defects;       // per inner polytope
};
// complex form: int (xi^{ij})_{,ij} f  vs  int xi^{ij} f_{,ij}
IntByPartsReport intbyparts_complex(const DelzantPolytope& p, const RealPoly& h,
                                    const MatrixPoly& phi, const RealPoly& f);
// real form: int Tr(M D^2 f)  vs  int f (M^{ab})_{,ab} + int_boundary f dsigma
IntByPartsReport intbyparts_real(const DelzantPolytope& p, const RealPoly& h,
                                 const MatrixPoly& phi, const RealPoly& f);

// boundary-refined HK-energy
//   int_bd u dsigma - int C u - int log det D^2 u - int rho(G^{-1} Phi G^{-1} conj(Phi))
double toric_hk_energy(const DelzantPolytope& p, const RealPoly& h,
                       const MatrixPoly& phi, int levels = 36);
// directional derivative of the energy in a smooth direction f:
//   int_bd f dsigma - int C f - int Tr(sqrt(1-X) G^{-1} D^2 f)
double toric_hk_directional(const DelzantPolytope& p, const RealPoly& h,
                            const MatrixPoly& phi, const RealPoly& f);

std::string futaki_report_json(const DelzantPolytope& p,
                               const StabilityProbeReport& probe);

} // namespace hcsck::toric
