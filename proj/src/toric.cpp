#include "hcsck/toric.hpp"

#include "hcsck/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "vendor_json.hpp"

namespace hcsck::toric {

namespace {

// 8- and 16-point Gauss-Legendre rules mapped to [0, 1]
struct GaussRule {
    std::vector<double> x, w;
};

const GaussRule& gauss8() {
    static const GaussRule r = [] {
        const double a[4] = {0.1834346424956498, 0.5255324099163290,
                             0.7966664774136267, 0.9602898564975363};
        const double w[4] = {0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};
        GaussRule g;
        for (int i = 3; i >= 0; --i) {
            g.x.push_back(0.5 * (1.0 - a[i]));
            g.w.push_back(0.5 * w[i]);
        }
        for (int i = 0; i < 4; ++i) {
            g.x.push_back(0.5 * (1.0 + a[i]));
            g.w.push_back(0.5 * w[i]);
        }
        return g;
    }();
    return r;
}

const GaussRule& gauss16() {
    static const GaussRule r = [] {
        const double a[8] = {0.0950125098376374, 0.2816035507792589,
                             0.4580167776572274, 0.6178762444026438,
                             0.7554044083550030, 0.8656312023878318,
                             0.9445750230732326, 0.9894009349916499};
        const double w[8] = {0.1894506104550685, 0.1826034150449236,
                             0.1691565193950025, 0.1495959888165767,
                             0.1246289712555339, 0.0951585116824928,
                             0.0622535239386479, 0.0271524594117541};
        GaussRule g;
        for (int i = 7; i >= 0; --i) {
            g.x.push_back(0.5 * (1.0 - a[i]));
            g.w.push_back(0.5 * w[i]);
        }
        for (int i = 0; i < 8; ++i) {
            g.x.push_back(0.5 * (1.0 + a[i]));
            g.w.push_back(0.5 * w[i]);
        }
        return g;
    }();
    return r;
}

long gcd_abs(long a, long b) { return std::gcd(std::labs(a), std::labs(b)); }

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
Vec2 lerp(const Vec2& a, const Vec2& b, double t) {
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}
double norm2(const Vec2& a) { return dot(a, a); }

using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& poly) {
    double acc = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    return 0.5 * acc;
}

Vec2 polygon_centroid(const Polygon& poly) {
    Vec2 c{0.0, 0.0};
    for (const Vec2& v : poly) {
        c[0] += v[0];
        c[1] += v[1];
    }
    c[0] /= static_cast<double>(poly.size());
    c[1] /= static_cast<double>(poly.size());
    return c;
}

// keep { y : a.y + b >= 0 } (Sutherland-Hodgman)
Polygon clip(const Polygon& poly, const Vec2& a, double b) {
    Polygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double fp = dot(a, p) + b, fq = dot(a, q) + b;
        if (fp >= 0.0) out.push_back(p);
        if ((fp > 0.0 && fq < 0.0) || (fp < 0.0 && fq > 0.0))
            out.push_back(lerp(p, q, fp / (fp - fq)));
    }
    return out;
}

// integral over a triangle via the Duffy map with an 8x8 tensor rule
template <class F>
double tri_quad(const F& f, const Vec2& a, const Vec2& b, const Vec2& c) {
    const double two_area =
        std::abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    if (two_area == 0.0) return 0.0;
    const GaussRule& g = gauss8();
    double acc = 0.0;
    for (std::size_t iu = 0; iu < g.x.size(); ++iu) {
        const double u = g.x[iu];
        for (std::size_t iv = 0; iv < g.x.size(); ++iv) {
            const double v = g.x[iv];
            const Vec2 y{a[0] + u * (b[0] - a[0]) + u * v * (c[0] - b[0]),
                         a[1] + u * (b[1] - a[1]) + u * v * (c[1] - b[1])};
            acc += g.w[iu] * g.w[iv] * u * f(y);
        }
    }
    return acc * two_area;
}

template <class F>
double polygon_quad(const Polygon& poly, const F& f) {
    if (poly.size() < 3) return 0.0;
    const Vec2 c = polygon_centroid(poly);
    double acc = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        acc += tri_quad(f, c, poly[i], poly[(i + 1) % poly.size()]);
    return acc;
}

// graded version: strips accumulate geometrically toward the boundary edge
template <class F>
double polygon_quad_graded(const Polygon& poly, const F& f, int levels) {
    if (poly.size() < 3) return 0.0;
    const Vec2 c = polygon_centroid(poly);
    double acc = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        double s0 = 0.0;
        for (int k = 0; k < levels; ++k) {
            const double s1 = (k + 1 == levels) ? 1.0 : 1.0 - std::pow(0.5, k + 1);
            // strip between apex fractions s0 and s1 of the fan triangle
            const Vec2 a0 = lerp(c, a, s0), b0 = lerp(c, b, s0);
            const Vec2 a1 = lerp(c, a, s1), b1 = lerp(c, b, s1);
            // interior Gauss nodes never touch the boundary edge itself
            acc += tri_quad(f, a0, a1, b1) + tri_quad(f, a0, b1, b0);
            s0 = s1;
        }
    }
    return acc;
}

// 1-D integral along a segment with dyadic grading toward both endpoints
template <class F>
double segment_quad_graded(const F& f, int levels) {
    const GaussRule& g = gauss16();
    double acc = 0.0;
    auto add_interval = [&](double t0, double t1) {
        for (std::size_t i = 0; i < g.x.size(); ++i)
            acc += (t1 - t0) * g.w[i] * f(t0 + (t1 - t0) * g.x[i]);
    };
    // [0, 1/2] graded toward 0, [1/2, 1] graded toward 1
    double hi = 0.5;
    for (int k = 0; k < levels; ++k) {
        const double lo = (k + 1 == levels) ? 0.0 : hi * 0.5;
        add_interval(lo, hi);
        hi = lo;
    }
    double lo2 = 0.5;
    for (int k = 0; k < levels; ++k) {
        const double hi2 = (k + 1 == levels) ? 1.0 : 1.0 - (1.0 - lo2) * 0.5;
        add_interval(lo2, hi2);
        lo2 = hi2;
    }
    return acc;
}

// least-squares fit of values(delta) on a basis, returning the coefficient of
// the first (constant) basis function
double extrapolate(const std::vector<double>& deltas, const std::vector<double>& vals,
                   const std::vector<std::function<double(double)>>& basis) {
    const int n = static_cast<int>(deltas.size());
    const int m = static_cast<int>(basis.size());
    Eigen::MatrixXd a(n, m);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) a(i, j) = basis[j](deltas[i]);
        b(i) = vals[i];
    }
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    return x(0);
}

} // namespace

// --- polytope ----------------------------------------------------------------

Vec2 DelzantPolytope::centroid() const { return polygon_centroid(vertices); }
double DelzantPolytope::area() const { return polygon_area(vertices); }

MatrixPoly MatrixPoly::identity() {
    MatrixPoly m;
    m.p11.terms = {{0, 0, cplx(1.0, 0.0)}};
    m.p22.terms = {{0, 0, cplx(1.0, 0.0)}};
    return m;
}

DelzantPolytope validate_delzant(std::vector<Facet> facets) {
    DelzantPolytope p;
    p.facets = std::move(facets);
    const int nf = static_cast<int>(p.facets.size());
    if (nf < 3) throw domain_error("validate_delzant: empty interior (too few facets)");

    for (const Facet& f : p.facets) {
        if (f.normal[0] == 0 && f.normal[1] == 0)
            throw domain_error("validate_delzant: zero normal");
        if (gcd_abs(f.normal[0], f.normal[1]) != 1)
            throw domain_error("validate_delzant: non-primitive normal");
    }

    // bounded iff the inward normals leave no angular gap of pi or more
    std::vector<double> angles;
    for (const Facet& f : p.facets)
        angles.push_back(std::atan2(static_cast<double>(f.normal[1]),
                                    static_cast<double>(f.normal[0])));
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double next = i + 1 < angles.size() ? angles[i + 1]
                                                  : angles[0] + 2.0 * std::numbers::pi;
        if (next - angles[i] >= std::numbers::pi - 1e-12)
            throw domain_error("validate_delzant: unbounded polytope");
    }

    // vertices from pairwise facet intersections
    double scale = 0.0;
    for (const Facet& f : p.facets) scale = std::max(scale, std::abs(f.offset));
    scale = std::max(scale, 1.0);
    const double tol = 1e-10 * scale;
    std::vector<Vec2> verts;
    for (int r = 0; r < nf; ++r) {
        for (int s = r + 1; s < nf; ++s) {
            const double det =
                static_cast<double>(p.facets[r].normal[0]) * p.facets[s].normal[1] -
                static_cast<double>(p.facets[s].normal[0]) * p.facets[r].normal[1];
            if (det == 0.0) continue;
            const Vec2 v{(-p.facets[r].offset * p.facets[s].normal[1] +
                          p.facets[s].offset * p.facets[r].normal[1]) /
                             det,
                         (-p.facets[s].offset * p.facets[r].normal[0] +
                          p.facets[r].offset * p.facets[s].normal[0]) /
                             det};
            bool inside = true;
            for (int t = 0; t < nf && inside; ++t)
                if (p.ell(t, v) < -tol) inside = false;
            if (!inside) continue;
            bool dup = false;
            for (const Vec2& w : verts)
                if (norm2(sub(v, w)) < tol * tol) dup = true;
            if (!dup) verts.push_back(v);
        }
    }
    if (verts.size() < 3) throw domain_error("validate_delzant: empty interior");

    // order counterclockwise
    const Vec2 c = polygon_centroid(verts);
    std::vector<int> order(verts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return std::atan2(verts[i][1] - c[1], verts[i][0] - c[0]) <
               std::atan2(verts[j][1] - c[1], verts[j][0] - c[0]);
    });
    for (int i : order) p.vertices.push_back(verts[i]);
    if (polygon_area(p.vertices) < tol)
        throw domain_error("validate_delzant: empty interior (zero area)");

    // Delzant condition: each vertex has exactly two active facets with
    // unimodular normal pair
    for (const Vec2& v : p.vertices) {
        std::vector<int> act;
        for (int r = 0; r < nf; ++r)
            if (std::abs(p.ell(r, v)) < tol) act.push_back(r);
        if (act.size() != 2)
            throw domain_error("validate_delzant: vertex is not simple");
        const long det = p.facets[act[0]].normal[0] * p.facets[act[1]].normal[1] -
                         p.facets[act[1]].normal[0] * p.facets[act[0]].normal[1];
        if (det != 1 && det != -1) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "validate_delzant: vertex determinant %ld != +-1 at "
                          "(%.6g, %.6g)",
                          det, v[0], v[1]);
            throw domain_error(buf);
        }
    }

    // per-facet edges (consecutive vertex pairs on the facet)
    p.edges.assign(nf, {-1, -1});
    const int nv = static_cast<int>(p.vertices.size());
    for (int r = 0; r < nf; ++r) {
        for (int i = 0; i < nv; ++i) {
            const int j = (i + 1) % nv;
            if (std::abs(p.ell(r, p.vertices[i])) < tol &&
                std::abs(p.ell(r, p.vertices[j])) < tol) {
                p.edges[r] = {i, j};
                break;
            }
        }
        if (p.edges[r][0] < 0)
            throw domain_error("validate_delzant: facet carries no edge");
    }
    return p;
}

DelzantPolytope unit_square() {
    return validate_delzant({{{1, 0}, 0.0},
                             {{-1, 0}, 1.0},
                             {{0, 1}, 0.0},
                             {{0, -1}, 1.0}});
}

DelzantPolytope standard_simplex() {
    return validate_delzant({{{1, 0}, 0.0}, {{0, 1}, 0.0}, {{-1, -1}, 1.0}});
}

DelzantPolytope scaled(const DelzantPolytope& p, double t) {
    std::vector<Facet> f = p.facets;
    for (Facet& x : f) x.offset *= t;
    return validate_delzant(std::move(f));
}

DelzantPolytope polytope_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<Facet> facets;
    for (const auto& f : j.at("facets")) {
        Facet x;
        x.normal = {f.at("normal")[0].get<long>(), f.at("normal")[1].get<long>()};
        x.offset = f.at("offset").get<double>();
        facets.push_back(x);
    }
    return validate_delzant(std::move(facets));
}

DelzantPolytope shrink(const DelzantPolytope& p, double delta) {
    std::vector<Facet> f = p.facets;
    for (Facet& x : f) {
        const double len = std::sqrt(static_cast<double>(x.normal[0]) * x.normal[0] +
                                     static_cast<double>(x.normal[1]) * x.normal[1]);
        x.offset -= delta * len;
    }
    return validate_delzant(std::move(f));
}

double PLConvexFn::operator()(const Vec2& y) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Piece& p : pieces) best = std::max(best, dot(p.a, y) + p.b);
    return best;
}

// --- Guillemin potential -----------------------------------------------------

double guillemin_potential(const DelzantPolytope& p, const Vec2& y) {
    double acc = 0.0;
    for (std::size_t r = 0; r < p.facets.size(); ++r) {
        const double l = p.ell(static_cast<int>(r), y);
        if (!(l > 0.0))
            throw domain_error("guillemin_potential: point not in the interior");
        acc += l * std::log(l);
    }
    return acc;
}

RSym2 guillemin_hessian(const DelzantPolytope& p, const Vec2& y, const RealPoly* h) {
    RSym2 g{0.0, 0.0, 0.0};
    for (std::size_t r = 0; r < p.facets.size(); ++r) {
        const double l = p.ell(static_cast<int>(r), y);
        if (!(l > 0.0))
            throw domain_error("guillemin_hessian: point not in the interior");
        const double n0 = static_cast<double>(p.facets[r].normal[0]);
        const double n1 = static_cast<double>(p.facets[r].normal[1]);
        g.a11 += n0 * n0 / l;
        g.a12 += n0 * n1 / l;
        g.a22 += n1 * n1 / l;
    }
    if (h && !h->empty()) {
        const Jet2<double> j = h->jet(y[0], y[1]);
        g.a11 += j.h[0];
        g.a12 += j.h[1];
        g.a22 += j.h[2];
    }
    return g;
}

KernelDecayReport boundary_kernel_check(const DelzantPolytope& p, const RealPoly& h,
                                        int facet, int samples) {
    const auto& e = p.edges.at(facet);
    const Vec2 mid = lerp(p.vertices[e[0]], p.vertices[e[1]], 0.5);
    const Vec2 nu{static_cast<double>(p.facets[facet].normal[0]),
                  static_cast<double>(p.facets[facet].normal[1])};
    const double nu2 = norm2(nu);
    KernelDecayReport rep;
    const double s0 = 0.02 * std::sqrt(p.area()) / std::sqrt(nu2);
    for (int k = 0; k < samples; ++k) {
        const double s = s0 * std::pow(0.5, k);
        const Vec2 y{mid[0] + s * nu[0], mid[1] + s * nu[1]};
        const RSym2 g = guillemin_hessian(p, y, &h);
        if (!(g.det() > 0.0 && g.trace() > 0.0))
            throw degenerate_potential_error(
                "boundary_kernel_check: Hessian not positive-definite at a sample");
        const RSym2 gi = g.inverse();
        const Vec2 w{gi.a11 * nu[0] + gi.a12 * nu[1],
                     gi.a12 * nu[0] + gi.a22 * nu[1]};
        rep.ell_values.push_back(s * nu2);
        rep.kernel_norms.push_back(std::sqrt(norm2(w)));
    }
    // least-squares slope of log|w| against log(ell)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(rep.ell_values.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log(rep.ell_values[i]);
        const double yv = std::log(rep.kernel_norms[i]);
        sx += x;
        sy += yv;
        sxx += x * x;
        sxy += x * yv;
    }
    rep.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

// --- quadrature ----------------------------------------------------------------

double lebesgue_integral(const DelzantPolytope& p, const ScalarFn& f) {
    return polygon_quad(p.vertices, f);
}

double lebesgue_integral_graded(const DelzantPolytope& p, const ScalarFn& f,
                                int levels) {
    return polygon_quad_graded(p.vertices, f, levels);
}

double lebesgue_integral(const DelzantPolytope& p, const PLConvexFn& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.pieces.size(); ++i) {
        Polygon region = p.vertices;
        for (std::size_t j = 0; j < f.pieces.size() && region.size() >= 3; ++j) {
            if (i == j) continue;
            // keep where piece i dominates piece j
            const Vec2 a{f.pieces[i].a[0] - f.pieces[j].a[0],
                         f.pieces[i].a[1] - f.pieces[j].a[1]};
            const double b = f.pieces[i].b - f.pieces[j].b;
            if (a[0] == 0.0 && a[1] == 0.0) {
                if (b < 0.0) region.clear();
                continue;
            }
            region = clip(region, a, b);
        }
        if (region.size() < 3) continue;
        const auto& piece = f.pieces[i];
        acc += polygon_quad(region, [&](const Vec2& y) {
            return dot(piece.a, y) + piece.b;
        });
    }
    return acc;
}

namespace {

double facet_weight(const DelzantPolytope& p, int r, BoundaryMeasure bm) {
    const auto& e = p.edges[r];
    const double len = std::sqrt(norm2(sub(p.vertices[e[1]], p.vertices[e[0]])));
    const double nu2 =
        static_cast<double>(p.facets[r].normal[0]) * p.facets[r].normal[0] +
        static_cast<double>(p.facets[r].normal[1]) * p.facets[r].normal[1];
    return bm == BoundaryMeasure::inverse_norm2 ? len / nu2 : len / std::sqrt(nu2);
}

template <class F>
double facet_integral(const DelzantPolytope& p, int r, const F& f_of_t,
                      bool graded, int levels, BoundaryMeasure bm) {
    const double weight = facet_weight(p, r, bm);
    if (graded) return weight * segment_quad_graded(f_of_t, levels);
    const GaussRule& g = gauss16();
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f_of_t(g.x[i]);
    return weight * acc;
}

} // namespace

double sigma_integral(const DelzantPolytope& p, const ScalarFn& f,
                      BoundaryMeasure bm) {
    double acc = 0.0;
    for (std::size_t r = 0; r < p.facets.size(); ++r) {
        const auto& e = p.edges[r];
        const Vec2 v0 = p.vertices[e[0]], v1 = p.vertices[e[1]];
        acc += facet_integral(
            p, static_cast<int>(r),
            [&](double t) { return f(lerp(v0, v1, t)); }, false, 0, bm);
    }
    return acc;
}

double sigma_integral_graded(const DelzantPolytope& p, const ScalarFn& f,
                             int levels, BoundaryMeasure bm) {
    double acc = 0.0;
    for (std::size_t r = 0; r < p.facets.size(); ++r) {
        const auto& e = p.edges[r];
        const Vec2 v0 = p.vertices[e[0]], v1 = p.vertices[e[1]];
        acc += facet_integral(
            p, static_cast<int>(r),
            [&](double t) { return f(lerp(v0, v1, t)); }, true, levels, bm);
    }
    return acc;
}

double sigma_integral(const DelzantPolytope& p, const PLConvexFn& f,
                      BoundaryMeasure bm) {
    double acc = 0.0;
    for (std::size_t r = 0; r < p.facets.size(); ++r) {
        const auto& e = p.edges[r];
        const Vec2 v0 = p.vertices[e[0]], v1 = p.vertices[e[1]];
        // breakpoints where the active piece changes along the edge
        std::vector<double> cuts{0.0, 1.0};
        for (std::size_t i = 0; i < f.pieces.size(); ++i)
            for (std::size_t j = i + 1; j < f.pieces.size(); ++j) {
                const double da0 = dot(f.pieces[i].a, v0) + f.pieces[i].b -
                                   (dot(f.pieces[j].a, v0) + f.pieces[j].b);
                const double da1 = dot(f.pieces[i].a, v1) + f.pieces[i].b -
                                   (dot(f.pieces[j].a, v1) + f.pieces[j].b);
                if ((da0 < 0.0) != (da1 < 0.0)) cuts.push_back(da0 / (da0 - da1));
            }
        std::sort(cuts.begin(), cuts.end());
        const GaussRule& g = gauss8();
        double edge_acc = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double t0 = cuts[s], t1 = cuts[s + 1];
            for (std::size_t i = 0; i < g.x.size(); ++i)
                edge_acc += (t1 - t0) * g.w[i] * f(lerp(v0, v1, t0 + (t1 - t0) * g.x[i]));
        }
        acc += edge_acc * facet_weight(p, static_cast<int>(r), bm);
    }
    return acc;
}

// --- Donaldson-Futaki --------------------------------------------------------

double futaki_constant(const DelzantPolytope& p, BoundaryMeasure bm) {
    const double perimeter =
        sigma_integral(p, [](const Vec2&) { return 1.0; }, bm);
    return perimeter / p.area();
}

double donaldson_functional(const DelzantPolytope& p, const ScalarFn& f, double c,
                            BoundaryMeasure bm) {
    return sigma_integral(p, f, bm) - c * lebesgue_integral(p, f);
}

double donaldson_functional(const DelzantPolytope& p, const PLConvexFn& f, double c,
                            BoundaryMeasure bm) {
    return sigma_integral(p, f, bm) - c * lebesgue_integral(p, f);
}

std::array<double, 2> futaki_vector(const DelzantPolytope& p) {
    const double c = futaki_constant(p, BoundaryMeasure::lattice);
    return {donaldson_functional(
                p, [](const Vec2& y) { return y[0]; }, c, BoundaryMeasure::lattice),
            donaldson_functional(
                p, [](const Vec2& y) { return y[1]; }, c, BoundaryMeasure::lattice)};
}

StabilityProbeReport stability_probe(const DelzantPolytope& p, int samples) {
    static const std::array<Vec2, 8> dirs{{{1, 0},
                                           {0, 1},
                                           {1, 1},
                                           {1, -1},
                                           {2, 1},
                                           {1, 2},
                                           {2, -1},
                                           {1, -2}}};
    const double c = futaki_constant(p, BoundaryMeasure::lattice);
    StabilityProbeReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (const Vec2& a : dirs) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const Vec2& v : p.vertices) {
            lo = std::min(lo, dot(a, v));
            hi = std::max(hi, dot(a, v));
        }
        for (int k = 1; k <= samples; ++k) {
            const double b = -(lo + (hi - lo) * k / (samples + 1));
            PLConvexFn f;
            f.pieces = {{{0.0, 0.0}, 0.0}, {a, b}};
            double sup = 0.0;
            for (const Vec2& v : p.vertices) sup = std::max(sup, dot(a, v) + b);
            if (sup <= 0.0) continue;
            const double val =
                donaldson_functional(p, f, c, BoundaryMeasure::lattice) / sup;
            ++rep.creases_tested;
            if (val < rep.min_value) {
                rep.min_value = val;
                rep.argmin_a = a;
                rep.argmin_b = b;
            }
        }
    }
    rep.probe_destabilized = rep.min_value < -1e-8;
    return rep;
}

// --- moment-map jets -----------------------------------------------------------

MatJet2<double> hessian_jet(const DelzantPolytope& p, const RealPoly& h,
                            const Vec2& y) {
    MatJet2<double> g;
    for (std::size_t r = 0; r < p.facets.size(); ++r) {
        const double n0 = static_cast<double>(p.facets[r].normal[0]);
        const double n1 = static_cast<double>(p.facets[r].normal[1]);
        Jet2<double> lj;
        lj.v = p.ell(static_cast<int>(r), y);
        if (!(lj.v > 0.0))
            throw domain_error("hessian_jet: point not in the interior");
        lj.g = {n0, n1};
        const Jet2<double> il = inverse(lj);
        g.e[0] = g.e[0] + n0 * n0 * il;
        g.e[1] = g.e[1] + n0 * n1 * il;
        g.e[2] = g.e[2] + n0 * n1 * il;
        g.e[3] = g.e[3] + n1 * n1 * il;
    }
    if (!h.empty()) {
        // jets of the Hessian entries of h need fourth derivatives
        const RealPoly hx = h.dx(), hy = h.dy();
        g.e[0] = g.e[0] + hx.dx().jet(y[0], y[1]);
        g.e[1] = g.e[1] + hx.dy().jet(y[0], y[1]);
        g.e[2] = g.e[2] + hx.dy().jet(y[0], y[1]);
        g.e[3] = g.e[3] + hy.dy().jet(y[0], y[1]);
    }
    return g;
}

namespace {

MatJet2<cplx> phi_jet(const MatrixPoly& phi, const Vec2& y, bool conjugate) {
    auto lift = [&](const CplxPoly& poly) {
        Jet2<cplx> j = poly.jet(y[0], y[1]);
        if (conjugate) {
            j.v = std::conj(j.v);
            j.g = {std::conj(j.g[0]), std::conj(j.g[1])};
            j.h = {std::conj(j.h[0]), std::conj(j.h[1]), std::conj(j.h[2])};
        }
        return j;
    };
    MatJet2<cplx> m;
    m.e[0] = lift(phi.p11);
    m.e[1] = lift(phi.p12);
    m.e[2] = lift(phi.p12);
    m.e[3] = lift(phi.p22);
    return m;
}

} // namespace

MatJet2<cplx> xi_jet(const DelzantPolytope& p, const RealPoly& h,
                     const MatrixPoly& phi, const Vec2& y) {
    const MatJet2<cplx> gi = to_complex(inverse2(hessian_jet(p, h, y)));
    return gi * phi_jet(phi, y, false) * gi;
}

MatJet2<cplx> sqrt_residual_jet(const DelzantPolytope& p, const RealPoly& h,
                                const MatrixPoly& phi, const Vec2& y) {
    const MatJet2<cplx> gi = to_complex(inverse2(hessian_jet(p, h, y)));
    const MatJet2<cplx> x = gi * phi_jet(phi, y, false) * gi * phi_jet(phi, y, true);
    const Jet2<cplx> t = x.trace();
    const Jet2<cplx> d = x.det();
    // sqrt(1 - X) = ((1 + w) I - X)/q with w = sqrt(1 - t + d), q = sqrt(2 - t + 2w)
    const Jet2<cplx> one = Jet2<cplx>::constant(1.0);
    const Jet2<cplx> w = sqrt(one - t + d);
    const Jet2<cplx> q = sqrt(Jet2<cplx>::constant(2.0) - t + cplx(2.0) * w);
    const MatJet2<cplx> num =
        scale(one + w, MatJet2<cplx>::identity()) - x;
    return scale(inverse(q), num * gi);
}

// --- integration-by-parts checks ----------------------------------------------

namespace {

IntByPartsReport run_ibp(const DelzantPolytope& p,
                         const std::function<double(const DelzantPolytope&)>& defect) {
    IntByPartsReport rep;
    const double scale = std::sqrt(p.area());
    rep.deltas = {4e-3 * scale, 2e-3 * scale, 1e-3 * scale, 5e-4 * scale};
    for (double d : rep.deltas) rep.defects.push_back(defect(shrink(p, d)));
    rep.defect = std::abs(extrapolate(
        rep.deltas, rep.defects,
        {[](double) { return 1.0; }, [](double d) { return d; },
         [](double d) { return d * d; }, [](double d) { return d * d * d; }}));
    return rep;
}

} // namespace

IntByPartsReport intbyparts_complex(const DelzantPolytope& p, const RealPoly& h,
                                    const MatrixPoly& phi, const RealPoly& f) {
    const RealPoly fxx = f.dx().dx(), fxy = f.dx().dy(), fyy = f.dy().dy();
    auto defect = [&](const DelzantPolytope& inner) {
        const double lhs = polygon_quad_graded(
            inner.vertices,
            [&](const Vec2& y) {
                const MatJet2<cplx> xi = xi_jet(p, h, phi, y);
                return (xi.double_divergence() * f(y[0], y[1])).real();
            },
            30);
        const double rhs = polygon_quad_graded(
            inner.vertices,
            [&](const Vec2& y) {
                const MatJet2<cplx> xi = xi_jet(p, h, phi, y);
                const cplx pairing = xi.e[0].v * fxx(y[0], y[1]) +
                                     2.0 * xi.e[1].v * fxy(y[0], y[1]) +
                                     xi.e[3].v * fyy(y[0], y[1]);
                return pairing.real();
            },
            30);
        return lhs - rhs;
    };
    return run_ibp(p, defect);
}

IntByPartsReport intbyparts_real(const DelzantPolytope& p, const RealPoly& h,
                                 const MatrixPoly& phi, const RealPoly& f) {
    const RealPoly fxx = f.dx().dx(), fxy = f.dx().dy(), fyy = f.dy().dy();
    const double boundary = sigma_integral_graded(
        p, [&](const Vec2& y) { return f(y[0], y[1]); }, 30,
        BoundaryMeasure::lattice);
    auto defect = [&](const DelzantPolytope& inner) {
        const double lhs = polygon_quad_graded(
            inner.vertices,
            [&](const Vec2& y) {
                const MatJet2<cplx> m = sqrt_residual_jet(p, h, phi, y);
                const cplx tr = m.e[0].v * fxx(y[0], y[1]) +
                                (m.e[1].v + m.e[2].v) * fxy(y[0], y[1]) +
                                m.e[3].v * fyy(y[0], y[1]);
                return tr.real();
            },
            30);
        const double interior = polygon_quad_graded(
            inner.vertices,
            [&](const Vec2& y) {
                const MatJet2<cplx> m = sqrt_residual_jet(p, h, phi, y);
                return (m.double_divergence() * f(y[0], y[1])).real();
            },
            30);
        return lhs - interior - boundary;
    };
    return run_ibp(p, defect);
}

// --- toric HK-energy -----------------------------------------------------------

namespace {

double rho_at(const DelzantPolytope& p, const RealPoly& h, const MatrixPoly& phi,
              const Vec2& y) {
    const RSym2 g = guillemin_hessian(p, y, &h);
    const RSym2 gi = g.inverse();
    const CMat2 gim = CMat2::from_rsym(gi);
    const CMat2 ph{phi.p11(y[0], y[1]), phi.p12(y[0], y[1]), phi.p12(y[0], y[1]),
                   phi.p22(y[0], y[1])};
    const CMat2 x = gim * ph * gim * ph.conj();
    const auto s = spectral::spectrum_of(x);
    if (!(s.delta_plus < 1.0 - kDomainMargin))
        throw inadmissible_error("toric_hk_energy: spectral radius reached 1 in the "
                                 "interior");
    return spectral::bg_function(s);
}

} // namespace

double toric_hk_energy(const DelzantPolytope& p, const RealPoly& h,
                       const MatrixPoly& phi, int levels) {
    const double c = futaki_constant(p, BoundaryMeasure::lattice);
    const double boundary = sigma_integral_graded(
        p,
        [&](const Vec2& y) {
            double u = 0.0;
            // ell log ell extends by 0 over the facet where ell = 0
            for (std::size_t r = 0; r < p.facets.size(); ++r) {
                const double l = p.ell(static_cast<int>(r), y);
                if (l > 0.0) u += l * std::log(l);
            }
            return u + h(y[0], y[1]);
        },
        levels, BoundaryMeasure::lattice);

    auto interior_at = [&](const DelzantPolytope& inner) {
        return polygon_quad_graded(
            inner.vertices,
            [&](const Vec2& y) {
                const double u = guillemin_potential(p, y) + h(y[0], y[1]);
                const RSym2 g = guillemin_hessian(p, y, &h);
                return c * u + std::log(g.det()) + rho_at(p, h, phi, y);
            },
            levels);
    };

    const double scale = std::sqrt(p.area());
    const std::vector<double> deltas{4e-3 * scale, 2e-3 * scale, 1e-3 * scale,
                                     5e-4 * scale, 2.5e-4 * scale};
    std::vector<double> vals;
    for (double d : deltas) vals.push_back(interior_at(shrink(p, d)));
    const double interior = extrapolate(
        deltas, vals,
        {[](double) { return 1.0; }, [](double d) { return d * std::log(d); },
         [](double d) { return d; }, [](double d) { return d * d * std::log(d); },
         [](double d) { return d * d; }});
    return boundary - interior;
}

double toric_hk_directional(const DelzantPolytope& p, const RealPoly& h,
                            const MatrixPoly& phi, const RealPoly& f) {
    const double c = futaki_constant(p, BoundaryMeasure::lattice);
    const RealPoly fxx = f.dx().dx(), fxy = f.dx().dy(), fyy = f.dy().dy();
    const double boundary = sigma_integral_graded(
        p, [&](const Vec2& y) { return f(y[0], y[1]); }, 30,
        BoundaryMeasure::lattice);
    const double bulk = lebesgue_integral_graded(
        p, [&](const Vec2& y) { return f(y[0], y[1]); }, 30);

    auto pairing_at = [&](const DelzantPolytope& inner) {
        return polygon_quad_graded(
            inner.vertices,
            [&](const Vec2& y) {
                const MatJet2<cplx> m = sqrt_residual_jet(p, h, phi, y);
                const cplx tr = m.e[0].v * fxx(y[0], y[1]) +
                                (m.e[1].v + m.e[2].v) * fxy(y[0], y[1]) +
                                m.e[3].v * fyy(y[0], y[1]);
                return tr.real();
            },
            30);
    };
    const double scale = std::sqrt(p.area());
    const std::vector<double> deltas{4e-3 * scale, 2e-3 * scale, 1e-3 * scale,
                                     5e-4 * scale};
    std::vector<double> vals;
    for (double d : deltas) vals.push_back(pairing_at(shrink(p, d)));
    const double pairing = extrapolate(
        deltas, vals,
        {[](double) { return 1.0; }, [](double d) { return d; },
         [](double d) { return d * d; }, [](double d) { return d * d * d; }});
    return boundary - c * bulk - pairing;
}

std::string futaki_report_json(const DelzantPolytope& p,
                               const StabilityProbeReport& probe) {
    const double c = futaki_constant(p);
    const double c_lat = futaki_constant(p, BoundaryMeasure::lattice);
    const auto fv = futaki_vector(p);
    std::ostringstream os;
    os << "{ \"C\": " << fmt_g17(c) << ", \"C_lattice\": " << fmt_g17(c_lat)
       << ", \"futaki_vector\": [" << fmt_g17(fv[0])
       << ", " << fmt_g17(fv[1]) << "], \"probe_min\": " << fmt_g17(probe.min_value)
       << ", \"probe_argmin\": { \"a\": [" << fmt_g17(probe.argmin_a[0]) << ", "
       << fmt_g17(probe.argmin_a[1]) << "], \"b\": " << fmt_g17(probe.argmin_b)
       << " }, \"creases_tested\": " << probe.creases_tested
       << ", \"probe_destabilized\": " << (probe.probe_destabilized ? "true" : "false")
       << ", \"boundary_measure\": \"lebesgue_over_sq_norm_of_normal\""
       << ", \"futaki_vector_measure\": \"lattice (lebesgue_over_norm_of_normal)\" }";
    return os.str();
}

} // namespace hcsck::toric
