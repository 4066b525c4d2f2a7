#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "assembly.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"

namespace helmbem {

struct OracleResult {
    cplx value;
    double est_error = 0.0;
    std::vector<double> epsilons_used;
    // set when est_error is large relative to the value
    bool flagged = false;
};

namespace oracle_detail {

constexpr int kNodes = 20;

// a = x0 < x1 < ... = b with widths h0, 2 h0, 4 h0, ... each capped at hmax
inline std::vector<double> growing_breaks(double a, double b, double h0, double hmax) {
    std::vector<double> br{a};
    double h = std::min(h0, hmax);
    while (br.back() + h < b * (1 - 1e-15) - 1e-300) {
        br.push_back(br.back() + h);
        h = std::min(2 * h, hmax);
    }
    br.push_back(b);
    return br;
}

// [0, L] with breaks clustered around the scale x: x/4, x/2, x, 2x, ... (capped at hmax)
inline std::vector<double> scaled_breaks(double L, double x, double hmax) {
    std::vector<double> br{0.0};
    for (double t = 0.25 * x; t < L; t *= 2.0) {
        while (t - br.back() > hmax) br.push_back(br.back() + hmax);
        br.push_back(t);
    }
    while (L - br.back() > hmax) br.push_back(br.back() + hmax);
    br.push_back(L);
    return br;
}

template <class F>
cplx integrate_breaks(const std::vector<double>& br, F&& f) {
    const QuadRule& rule = gl_rule(kNodes);
    cplx s = 0.0;
    for (std::size_t p = 0; p + 1 < br.size(); ++p)
        if (br[p + 1] > br[p]) s += integrate_1d(rule, br[p], br[p + 1], f);
    return s;
}

// value(eps) = a + b t + c t log t + d t^2 + e t^2 log t with t = eps/eps_max; returns a.
inline cplx extrapolate(const std::vector<double>& eps, const std::vector<cplx>& vals, int nterms) {
    const int m = static_cast<int>(eps.size());
    const double e0 = *std::max_element(eps.begin(), eps.end());
    Eigen::MatrixXcd A(m, nterms);
    Eigen::VectorXcd v(m);
    for (int i = 0; i < m; ++i) {
        const double t = eps[i] / e0, lt = std::log(t);
        const double row[5] = {1.0, t, t * lt, t * t, t * t * lt};
        for (int j = 0; j < nterms; ++j) A(i, j) = row[j];
        v(i) = vals[i];
    }
    return A.colPivHouseholderQr().solve(v)(0);
}

struct PairSetup {
    Operator op;
    Method method;
    KernelContext ctx;
    SegmentGeom sm, sn;
    NodeAt bm, bn;
};

// Integrand at r on S_m, r' on S_n with basis values pm, pn.
inline cplx integrand(const PairSetup& P, const Vec2& r, const Vec2& rp, double pm, double pn) {
    switch (P.op) {
        case Operator::S: return green(P.ctx, r, rp) * pm * pn;
        case Operator::D: return dg_dnp(P.ctx, r, rp, P.sn.normal) * pm * pn;
        case Operator::Dadj: return dg_dn(P.ctx, r, rp, P.sm.normal) * pm * pn;
        case Operator::N:
            if (P.method == Method::Variational) {
                const double k2nn = P.ctx.k * P.ctx.k * P.sm.normal.dot(P.sn.normal);
                return green(P.ctx, r, rp) * (k2nn * pm * pn - basis_curl(P.sm, P.bm) * basis_curl(P.sn, P.bn));
            }
            return d2g_dndnp(P.ctx, r, rp, P.sm.normal, P.sn.normal) * pm * pn;
    }
    return 0.0;
}

// Same segment, band |x' - x| > eps excluded. x is arclength from A.
inline cplx coincident_band(const PairSetup& P, double eps) {
    const double l = P.sm.length;
    const Vec2 e = (P.sm.b - P.sm.a) / l;
    const double hmax = std::min(l, 3.0 / P.ctx.k);
    const QuadRule& inner = gl_rule(8);
    auto W = [&](double u) {
        const double lo = std::max(0.0, -u), hi = std::min(l, l - u);
        return integrate_1d(inner, lo, hi, [&](double x) {
            const double xp = x + u;
            // kernels only see r - r', taken exactly as -u e
            return integrand(P, Vec2(0.0, 0.0), u * e, basis_value(P.bm, x / l), basis_value(P.bn, xp / l));
        });
    };
    const std::vector<double> br = growing_breaks(eps, l, eps, hmax);
    return integrate_breaks(br, W) + integrate_breaks(br, [&](double u) { return W(-u); });
}

// Same segment, hypersingular kernel: outer x in [eps, l - eps], inner Hadamard finite part.
inline cplx coincident_hyper(const PairSetup& P, double eps) {
    const double l = P.sm.length, k = P.ctx.k;
    const Vec2 e = (P.sm.b - P.sm.a) / l;
    const double c = kind_sign(P.ctx.kind) / (2.0 * kPi);
    const double hmax = std::min(l, 3.0 / k);
    const QuadRule& inner = gl_rule(8);
    auto W = [&](double u) {
        const double lo = std::max(eps, -u), hi = std::min(l - eps, l - u);
        if (hi <= lo) return 0.0;
        return integrate_1d(inner, lo, hi, [&](double x) { return basis_value(P.bm, x / l) * basis_value(P.bn, (x + u) / l); });
    };
    auto K = [&](double u) { return d2g_dndnp(P.ctx, Vec2(0.0, 0.0), u * e, P.sm.normal, P.sm.normal); };
    cplx total = 0.0;
    const std::vector<double> br = growing_breaks(eps, l - eps, eps, hmax);
    total += integrate_breaks(br, [&](double u) { return K(u) * W(u); });
    total += integrate_breaks(br, [&](double u) { return K(-u) * W(-u); });
    // |u| < eps: W is linear in u there, so the odd part drops out; the c/u^2 part has finite part -2 c W0 / eps
    const double W0 = W(0.0);
    auto Kreg = [&](double au) { return cplx(0.0, 0.25 * k) * hankel_reg(P.ctx.kind, 1, k * au) / au; };
    std::vector<double> sb{0.0};
    for (double t = eps * std::ldexp(1.0, -30); t < eps; t *= 2.0) sb.push_back(t);
    sb.push_back(eps);
    total += integrate_breaks(sb, [&](double u) { return 2.0 * W0 * Kreg(u); });
    total += -2.0 * c * W0 / eps;
    return total;
}

struct VertexFrame {
    Vec2 V, em, en;
    double lm, ln;
    bool m_vertex_is_a, n_vertex_is_a;
    double pm(NodeAt at, double x) const {
        const double t = m_vertex_is_a ? x / lm : 1.0 - x / lm;
        return basis_value(at, t);
    }
    double pn(NodeAt at, double x) const {
        const double t = n_vertex_is_a ? x / ln : 1.0 - x / ln;
        return basis_value(at, t);
    }
};

// Adjacent pair; x, x' are distances from the shared vertex. Excludes [0,eps]^2 (or the
// strip x < eps when strip_only).
inline cplx adjacent_excluded(const PairSetup& P, const VertexFrame& F, double eps, bool strip_only) {
    const double hmax = std::min(std::max(F.lm, F.ln), 3.0 / P.ctx.k);
    auto f = [&](double x, double xp) {
        // vertex-relative positions keep r - r' accurate near the vertex
        return integrand(P, x * F.em, xp * F.en, F.pm(P.bm, x), F.pn(P.bn, xp));
    };
    cplx total = integrate_breaks(growing_breaks(eps, F.lm, eps, hmax), [&](double x) {
        return integrate_breaks(scaled_breaks(F.ln, x, hmax), [&](double xp) { return f(x, xp); });
    });
    if (!strip_only) {
        total += integrate_breaks(growing_breaks(eps, F.ln, eps, hmax), [&](double xp) {
            std::vector<double> br = scaled_breaks(eps, xp, hmax);
            return integrate_breaks(br, [&](double x) { return f(x, xp); });
        });
    }
    return total;
}

inline cplx disjoint_composite(const PairSetup& P, int panels) {
    std::vector<double> br;
    for (int i = 0; i <= panels; ++i) br.push_back(static_cast<double>(i) / panels);
    const PointRule r = composite_rule(gl_rule(kNodes), br);
    const double jac = P.sm.length * P.sn.length;
    return integrate_tensor(r, r, [&](double t, double tp) {
        return integrand(P, P.sm.point(t), P.sn.point(tp), basis_value(P.bm, t), basis_value(P.bn, tp)) * jac;
    });
}

}  // namespace oracle_detail

// Brute-force reference for one basis combination of one segment pair. Singular pairs are
// integrated with an eps-neighbourhood removed and extrapolated to eps -> 0; for the
// log-divergent hypersingular cases the counterterm -/+ (1/2pi) log eps is applied first, so
// the result is comparable to the regularized closed forms.
inline OracleResult oracle_pair_integral(Operator op, Method method, const KernelContext& ctx_in,
                                         const SegmentGeom& sm, const SegmentGeom& sn, NodeAt bm, NodeAt bn,
                                         std::vector<double> eps_levels = {}) {
    using namespace oracle_detail;
    detail::check_method(op, method);
    ctx_in.validate();
    KernelContext ctx = ctx_in;
    ctx.scale = std::max(sm.length, sn.length) * 1e-6;
    const PairSetup P{op, method, ctx, sm, sn, bm, bn};
    const bool hyper_direct = op == Operator::N && method == Method::Direct;
    const double c = kind_sign(ctx.kind) / (2.0 * kPi);

    const bool coincident = sm.a == sn.a && sm.b == sn.b;
    int shared = 0;
    VertexFrame F{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Vec2& pm = i == 0 ? sm.a : sm.b;
            const Vec2& pn = j == 0 ? sn.a : sn.b;
            if (pm == pn) {
                ++shared;
                F.V = pm;
                F.m_vertex_is_a = i == 0;
                F.n_vertex_is_a = j == 0;
            }
        }
    OracleResult res;
    if (!coincident && shared == 0) {
        res.value = disjoint_composite(P, 4);
        res.est_error = std::abs(res.value - disjoint_composite(P, 2));
        res.flagged = res.est_error > 1e-6 * std::max(1.0, std::abs(res.value));
        return res;
    }
    if (!coincident && shared != 1) throw ArgumentError("oracle: segments overlap");
    if (!coincident) {
        F.lm = sm.length;
        F.ln = sn.length;
        F.em = ((F.m_vertex_is_a ? sm.b : sm.a) - F.V) / F.lm;
        F.en = ((F.n_vertex_is_a ? sn.b : sn.a) - F.V) / F.ln;
    }
    const bool both_one = !coincident && (bm == NodeAt::A) == F.m_vertex_is_a && (bn == NodeAt::A) == F.n_vertex_is_a;

    if (eps_levels.empty()) {
        const double lmin = std::min(sm.length, sn.length);
        for (int i = 0; i < 5; ++i) eps_levels.push_back(lmin * 1e-3 * std::pow(0.25, i));
    }
    if (eps_levels.size() < 3) throw ArgumentError("oracle: need at least 3 eps levels");
    for (std::size_t i = 1; i < eps_levels.size(); ++i)
        if (!(eps_levels[i] < eps_levels[i - 1]) || !(eps_levels[i] > 0))
            throw ArgumentError("oracle: eps levels must be positive and decreasing");

    std::vector<cplx> vals;
    for (double eps : eps_levels) {
        cplx v;
        if (coincident) {
            // the endpoint log only appears when both basis functions equal 1 at the same end
            v = hyper_direct ? coincident_hyper(P, eps) - (bm == bn ? c * std::log(eps) : 0.0)
                             : coincident_band(P, eps);
        } else if (hyper_direct && both_one) {
            v = adjacent_excluded(P, F, eps, true) + c * std::log(eps);
        } else {
            v = adjacent_excluded(P, F, eps, false);
        }
        vals.push_back(v);
    }
    const int m = static_cast<int>(eps_levels.size());
    const int nterms = std::min(5, m);
    res.value = extrapolate(eps_levels, vals, nterms);
    // error estimate: drop the largest eps and one basis term
    const std::vector<double> e2(eps_levels.begin() + 1, eps_levels.end());
    const std::vector<cplx> v2(vals.begin() + 1, vals.end());
    res.est_error = std::abs(res.value - extrapolate(e2, v2, std::min(nterms, m - 1)));
    res.epsilons_used = eps_levels;
    res.flagged = res.est_error > 1e-6 * std::max(1.0, std::abs(res.value));
    return res;
}

// Full node-indexed matrix built from oracle pair integrals. Slow; tests only.
inline Eigen::MatrixXcd oracle_matrix(const Mesh& mesh, Operator op, Method method, const KernelContext& ctx) {
    const int N = mesh.size();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
    for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n)
            for (NodeAt a : {NodeAt::A, NodeAt::B})
                for (NodeAt b : {NodeAt::A, NodeAt::B})
                    M(mesh.node_of(m, a), mesh.node_of(n, b)) +=
                        oracle_pair_integral(op, method, ctx, mesh.segment(m), mesh.segment(n), a, b).value;
    return M;
}

}  // namespace helmbem
