#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "geometry.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace helmbem {

struct CoincidentSingleLayer {
    cplx i11, i12;
};

struct HypersingularCoincident {
    cplx u11_reg, u12;
};

struct VariationalCoincident {
    cplx u11, u12;
};

struct HypersingularAdjacent {
    cplx reg, sing_reg;
    cplx total() const { return reg + sing_reg; }
};

// Which restriction of the hat functions is used on each segment of an adjacent pair:
// the one equal to 1 at the shared vertex, or the one vanishing there.
struct BasisPair {
    bool m_at_vertex = true;
    bool n_at_vertex = true;
};

// Block of an adjacent pair indexed (m basis, n basis) with 0 = vertex basis, 1 = far basis.
using PairBlock = Eigen::Matrix2cd;

// Adjacent pair parametrized from the shared vertex V: r = V + s dm, r' = V + s' dn, s, s' in [0,1].
struct AdjacentGeom {
    Vec2 vertex, dm, dn;
    Vec2 nm, nn;
    double lm = 0.0, ln = 0.0, theta = 0.0;
    // +1 when s runs from A to B on the segment (vertex is its A end), -1 otherwise
    double orient_m = 1.0, orient_n = 1.0;

    static AdjacentGeom from_mesh(const Mesh& mesh, int m, int n) {
        const SegmentPairClass c = classify_pair(mesh, m, n);
        if (c.tag != PairTag::Adjacent) throw ArgumentError("segments are not adjacent");
        const SegmentGeom sm = mesh.segment(m), sn = mesh.segment(n);
        AdjacentGeom g;
        g.vertex = c.vertex_m == NodeAt::A ? sm.a : sm.b;
        g.dm = (c.vertex_m == NodeAt::A ? sm.b : sm.a) - g.vertex;
        g.dn = (c.vertex_n == NodeAt::A ? sn.b : sn.a) - g.vertex;
        g.nm = sm.normal;
        g.nn = sn.normal;
        g.lm = sm.length;
        g.ln = sn.length;
        g.orient_m = c.vertex_m == NodeAt::A ? 1.0 : -1.0;
        g.orient_n = c.vertex_n == NodeAt::A ? 1.0 : -1.0;
        g.theta = adjacent_angle(mesh, m, n);
        return g;
    }

    // S_n leaves the origin along +x (normal (0,-1)); S_m arrives at the origin from angle theta.
    static AdjacentGeom canonical(double lm, double ln, double theta) {
        if (!(lm > 0) || !(ln > 0) || !std::isfinite(lm) || !std::isfinite(ln) || !std::isfinite(theta))
            throw ArgumentError("adjacent geometry needs positive finite lengths and a finite angle");
        const SegmentGeom sm(Vec2(lm * std::cos(theta), lm * std::sin(theta)), Vec2(0.0, 0.0));
        const SegmentGeom sn(Vec2(0.0, 0.0), Vec2(ln, 0.0));
        AdjacentGeom g;
        g.vertex = Vec2(0.0, 0.0);
        g.dm = sm.a;
        g.dn = sn.b;
        g.nm = sm.normal;
        g.nn = sn.normal;
        g.lm = lm;
        g.ln = ln;
        g.orient_m = -1.0;
        g.orient_n = 1.0;
        g.theta = theta;
        return g;
    }

    // positions relative to the vertex; the kernels only depend on r - r'
    Vec2 rm(double s) const { return s * dm; }
    Vec2 rn(double s) const { return s * dn; }
    bool collinear() const { return std::abs(std::sin(theta)) < 1e-10; }
    // curl of the vertex (far) basis along each segment
    double curl_m(bool at_vertex) const { return (at_vertex ? -orient_m : orient_m) / lm; }
    double curl_n(bool at_vertex) const { return (at_vertex ? -orient_n : orient_n) / ln; }
};

namespace detail {

inline double vbasis(bool at_vertex, double s) { return at_vertex ? 1.0 - s : s; }

// Kernel times all four basis products and the Jacobian, ordered (vv, vf, fv, ff).
template <class K>
auto four_products(const AdjacentGeom& g, K&& kernel) {
    return [&g, kernel](double s, double sp) -> Eigen::Vector4cd {
        const cplx v = kernel(s, sp) * (g.lm * g.ln);
        return Eigen::Vector4cd(v * (1 - s) * (1 - sp), v * (1 - s) * sp, v * s * (1 - sp), v * s * sp);
    };
}

inline PairBlock to_block(const Eigen::Vector4cd& v) {
    PairBlock b;
    b << v(0), v(1), v(2), v(3);
    return b;
}

inline int polar_panels(const KernelContext& ctx, double lmax) {
    return std::max(1, static_cast<int>(std::ceil(ctx.k * lmax / 3.0)));
}

}  // namespace detail

// Integral over [0,1]^2 of f(s, s') with an integrable singularity at the corner (0,0).
// Polar coordinates s = rho cos(phi), s' = rho sin(phi) with the two phi halves mapped to the
// unit square, so the rho Jacobian cancels the 1/rho behaviour. The first radial panel is graded
// rho = h u^2 to smooth the remaining rho^p log(rho) terms.
template <class F>
auto polar_vertex_integrate(F&& f, int nq, int panels) {
    using R = std::decay_t<decltype(f(0.5, 0.5))>;
    const QuadRule& rule = gl_rule(nq);
    const double h = 1.0 / panels;
    std::vector<double> rr, rw;
    for (int i = 0; i < rule.order; ++i) {
        const double u = 0.5 * (rule.nodes[i] + 1.0);
        rr.push_back(h * u * u);
        rw.push_back(0.5 * rule.weights[i] * 2.0 * h * u);
    }
    for (int p = 1; p < panels; ++p) {
        for (int i = 0; i < rule.order; ++i) {
            rr.push_back(h * (p + 0.5 * (rule.nodes[i] + 1.0)));
            rw.push_back(0.5 * h * rule.weights[i]);
        }
    }
    std::vector<double> breaks;
    for (int p = 0; p <= panels; ++p) breaks.push_back(0.25 * kPi * p / panels);
    const PointRule phi = composite_rule(rule, breaks);

    R total = detail::zero<R>();
    for (int half = 0; half < 2; ++half) {
        for (std::size_t a = 0; a < phi.x.size(); ++a) {
            // second half reflects phi -> pi/2 - phi and swaps the roles of s and s'
            const double t = std::tan(phi.x[a]);
            const double jac = 1.0 + t * t;
            R row = detail::zero<R>();
            for (std::size_t b = 0; b < rr.size(); ++b) {
                const double r = rr[b];
                const R v = half == 0 ? f(r, r * t) : f(r * t, r);
                if (!detail::all_finite(v)) detail::non_finite(static_cast<int>(b), r);
                row += v * (rw[b] * r);
            }
            total += row * (phi.w[a] * jac);
        }
    }
    return total;
}

inline cplx double_coincident() { return {0.0, 0.0}; }

inline CoincidentSingleLayer single_coincident(const KernelContext& ctx, double l, int nq = 20) {
    ctx.validate();
    const double s = ctx.k * l;
    if (!std::isfinite(s) || !(s > 0)) throw ArgumentError("single_coincident: k*l must be finite and > 0");
    const double k = ctx.k, k2 = k * k, k4 = k2 * k2;
    const HankelKind F = HankelKind::First;
    const cplx h0 = hankel(F, 0, s), h1 = hankel(F, 1, s), h2 = hankel(F, 2, s);
    const double s0 = struve_h(0, s), s1 = struve_h(1, s);
    const cplx g0 = gamma0(F, s, nq), g2 = gamma2(F, s, nq);
    const cplx I(0.0, 1.0);
    const cplx i11 = I * kPi / (8.0 * k2) * (h1 * s0 - h0 * s1) - I / (2.0 * k2) * h2 +
                     2.0 / (kPi * k4 * l * l) + I / (4.0 * k2) * g0 + I / (2.0 * k4 * l * l) * g2;
    const cplx i12 = -i11 + I / (4.0 * k2) * g0;
    return {kernel_kind(ctx.kind, i11), kernel_kind(ctx.kind, i12)};
}

inline HypersingularCoincident hyper_direct_coincident(const KernelContext& ctx, double l, int nq = 20) {
    const KernelContext first(ctx.k, HankelKind::First, ctx.scale);
    const CoincidentSingleLayer I = single_coincident(first, l, nq);
    const double k = ctx.k, s = k * l;
    const cplx h0 = hankel(HankelKind::First, 0, s), h1 = hankel(HankelKind::First, 1, s);
    const cplx J(0.0, 1.0);
    const cplx u11 = k * k * I.i11 + J / (2.0 * s) * h1 - J * 0.25 +
                     1.0 / (2.0 * kPi) * (kEuler + std::log(0.5 * k) - 2.0 / (s * s));
    const cplx u12 = k * k * I.i12 + J * 0.25 * h0 - J / (2.0 * s) * h1 + 1.0 / (kPi * s * s);
    return {kernel_kind(ctx.kind, u11), kernel_kind(ctx.kind, u12)};
}

inline VariationalCoincident hyper_variational_coincident(const KernelContext& ctx, double l, int nq = 20) {
    const CoincidentSingleLayer I = single_coincident(ctx, l, nq);
    const double k2 = ctx.k * ctx.k;
    const cplx g0 = gamma0(ctx.kind, ctx.k * l, nq);
    const cplx c = cplx(0.0, 1.0) / (2.0 * k2 * l * l) * g0;
    return {k2 * I.i11 - c, k2 * I.i12 + c};
}

inline cplx single_adjacent(const KernelContext& ctx, const AdjacentGeom& g, BasisPair bp, int nq = 20,
                            int levels = 8) {
    const QuadRule& rule = gl_rule(nq);
    auto f = [&](double s, double sp) {
        return green(ctx, g.rm(s), g.rn(sp)) * (g.lm * g.ln) * detail::vbasis(bp.m_at_vertex, s) *
               detail::vbasis(bp.n_at_vertex, sp);
    };
    if (bp.m_at_vertex && bp.n_at_vertex) return integrate_2d_refined(rule, f, levels);
    return integrate_2d(rule, f);
}

inline PairBlock single_adjacent_block(const KernelContext& ctx, const AdjacentGeom& g, int nq = 20,
                                       int levels = 8) {
    PairBlock b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b(i, j) = single_adjacent(ctx, g, {i == 0, j == 0}, nq, levels);
    return b;
}

// D (adjoint = false, normal at r') or Dadj (adjoint = true, normal at r) on an adjacent pair,
// all four basis combinations through the vertex polar transform. Collinear pairs give exact zeros.
inline PairBlock double_adjacent_block(const KernelContext& ctx, const AdjacentGeom& g, bool adjoint,
                                       int nq = 20) {
    if (g.collinear()) return PairBlock::Zero();
    auto kernel = [&](double s, double sp) {
        return adjoint ? dg_dn(ctx, g.rm(s), g.rn(sp), g.nm) : dg_dnp(ctx, g.rm(s), g.rn(sp), g.nn);
    };
    const int panels = detail::polar_panels(ctx, std::max(g.lm, g.ln));
    return detail::to_block(polar_vertex_integrate(detail::four_products(g, kernel), nq, panels));
}

struct AdjacentDoubleResult {
    cplx value;
    bool collinear = false;
};

// Both-one-at-vertex double layer integral in the canonical frame.
inline AdjacentDoubleResult double_adjacent_singular(const KernelContext& ctx, double lm, double ln, double theta,
                                                     int nq = 20) {
    ctx.validate();
    const AdjacentGeom g = AdjacentGeom::canonical(lm, ln, theta);
    if (g.collinear()) return {cplx(0.0, 0.0), true};
    auto kernel = [&](double s, double sp) {
        return dg_dnp(ctx, g.rm(s), g.rn(sp), g.nn) * (lm * ln) * (1 - s) * (1 - sp);
    };
    return {polar_vertex_integrate(kernel, nq, detail::polar_panels(ctx, std::max(lm, ln))), false};
}

// Closed form of the singular part for the both-one-at-vertex basis pair, with the
// log(eps) divergence removed. atan2 keeps the correct branch for obtuse triangles.
inline cplx hyper_adjacent_singular_part(HankelKind kind, double lm, double ln, double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double lm2 = lm * lm, ln2 = ln * ln, mn = lm * ln;
    const double L2 = lm2 + ln2 - 2.0 * mn * c;
    const double at = lm2 * std::atan2(ln * s, lm - ln * c) + ln2 * std::atan2(lm * s, ln - lm * c);
    const double bracket = (c * (lm2 + ln2) - 2.0 * mn) * std::log(L2) - c * (lm2 * std::log(lm2) + ln2 * std::log(ln2));
    const double v = 0.5 + s / (2.0 * mn) * at - std::log(mn) - bracket / (4.0 * mn);
    return {-kind_sign(kind) * v / (2.0 * kPi), 0.0};
}

inline HypersingularAdjacent hyper_direct_adjacent(const KernelContext& ctx, const AdjacentGeom& g, BasisPair bp,
                                                   int nq = 20, int levels = 8) {
    ctx.validate();
    if (bp.m_at_vertex && bp.n_at_vertex) {
        if (g.collinear() && std::cos(g.theta) > 0) throw ArgumentError("hyper_direct_adjacent: folded pair");
        auto f = [&](double s, double sp) {
            return d2g_dndnp_reg(ctx, g.rm(s), g.rn(sp), g.nm, g.nn) * (g.lm * g.ln) * (1 - s) * (1 - sp);
        };
        return {integrate_2d_refined(gl_rule(nq), f, levels),
                hyper_adjacent_singular_part(ctx.kind, g.lm, g.ln, g.theta)};
    }
    auto f = [&](double s, double sp) {
        return d2g_dndnp(ctx, g.rm(s), g.rn(sp), g.nm, g.nn) * (g.lm * g.ln) * detail::vbasis(bp.m_at_vertex, s) *
               detail::vbasis(bp.n_at_vertex, sp);
    };
    return {polar_vertex_integrate(f, nq, detail::polar_panels(ctx, std::max(g.lm, g.ln))), cplx(0.0, 0.0)};
}

inline HypersingularAdjacent hyper_direct_adjacent(const KernelContext& ctx, double lm, double ln, double theta,
                                                   BasisPair bp, int nq = 20, int levels = 8) {
    return hyper_direct_adjacent(ctx, AdjacentGeom::canonical(lm, ln, theta), bp, nq, levels);
}

inline PairBlock hyper_direct_adjacent_block(const KernelContext& ctx, const AdjacentGeom& g, int nq = 20,
                                             int levels = 8) {
    auto kernel = [&](double s, double sp) { return d2g_dndnp(ctx, g.rm(s), g.rn(sp), g.nm, g.nn); };
    const int panels = detail::polar_panels(ctx, std::max(g.lm, g.ln));
    Eigen::Vector4cd v = polar_vertex_integrate(detail::four_products(g, kernel), nq, panels);
    v(0) = hyper_direct_adjacent(ctx, g, {true, true}, nq, levels).total();
    return detail::to_block(v);
}

// Variational form on an adjacent pair: kernel g [k^2 (n.n') p p' - curl p curl p'].
// The curl product never vanishes, so every combination is log singular at the vertex.
inline PairBlock hyper_variational_adjacent_block(const KernelContext& ctx, const AdjacentGeom& g, int nq = 20,
                                                  int levels = 8) {
    const double k2nn = ctx.k * ctx.k * g.nm.dot(g.nn);
    const double cv[2] = {g.curl_m(true), g.curl_m(false)};
    const double cw[2] = {g.curl_n(true), g.curl_n(false)};
    auto f = [&](double s, double sp) -> Eigen::Vector4cd {
        const cplx G = green(ctx, g.rm(s), g.rn(sp)) * (g.lm * g.ln);
        const double p[2] = {1 - s, s}, q[2] = {1 - sp, sp};
        Eigen::Vector4cd v;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) v(2 * i + j) = G * (k2nn * p[i] * q[j] - cv[i] * cw[j]);
        return v;
    };
    return detail::to_block(integrate_2d_refined(gl_rule(nq), f, levels));
}

}  // namespace helmbem
