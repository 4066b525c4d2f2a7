#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "geometry.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "singular.hpp"

namespace helmbem {

enum class Operator { S, D, Dadj, N };
enum class Method { Direct, Variational, NotApplicable };

inline std::string to_string(Operator op) {
    switch (op) {
        case Operator::S: return "S";
        case Operator::D: return "D";
        case Operator::Dadj: return "Dadj";
        case Operator::N: return "N";
    }
    return "?";
}

inline std::string to_string(Method m) {
    switch (m) {
        case Method::Direct: return "direct";
        case Method::Variational: return "variational";
        case Method::NotApplicable: return "none";
    }
    return "?";
}

inline Operator parse_operator(const std::string& s) {
    if (s == "S") return Operator::S;
    if (s == "D") return Operator::D;
    if (s == "Dadj") return Operator::Dadj;
    if (s == "N") return Operator::N;
    throw ArgumentError("unknown operator '" + s + "' (expected S, D, Dadj or N)");
}

inline Method parse_method(const std::string& s) {
    if (s == "direct") return Method::Direct;
    if (s == "variational") return Method::Variational;
    if (s == "none") return Method::NotApplicable;
    throw ArgumentError("unknown method '" + s + "' (expected direct or variational)");
}

struct OperatorMatrix {
    Operator op = Operator::S;
    Method method = Method::NotApplicable;
    double k = 1.0;
    HankelKind kind = HankelKind::First;
    int nq = 20;
    Eigen::MatrixXcd entries;

    int size() const { return static_cast<int>(entries.rows()); }
};

struct AssemblyOptions {
    int nq = 20;
    int levels = 8;
    // single-threaded, pairs in lexicographic order
    bool deterministic = false;
    int threads = 0;
};

namespace detail {

inline void check_method(Operator op, Method method) {
    if (op == Operator::N) {
        if (method != Method::Direct && method != Method::Variational)
            throw ArgumentError("operator N needs method direct or variational");
    } else if (method != Method::NotApplicable) {
        throw ArgumentError("a method can only be given for operator N");
    }
}

// Regular pair: plain tensor rule, local basis order (A,A), (A,B), (B,A), (B,B).
inline PairBlock disjoint_block(const Mesh& mesh, int m, int n, Operator op, Method method,
                                const KernelContext& ctx, int nq) {
    const SegmentGeom sm = mesh.segment(m), sn = mesh.segment(n);
    const double jac = sm.length * sn.length;
    const double k2nn = ctx.k * ctx.k * sm.normal.dot(sn.normal);
    const double cm[2] = {basis_curl(sm, NodeAt::A), basis_curl(sm, NodeAt::B)};
    const double cn[2] = {basis_curl(sn, NodeAt::A), basis_curl(sn, NodeAt::B)};
    auto f = [&](double t, double tp) -> Eigen::Vector4cd {
        const Vec2 r = sm.point(t), rp = sn.point(tp);
        const double p[2] = {1 - t, t}, q[2] = {1 - tp, tp};
        Eigen::Vector4cd v;
        if (op == Operator::N && method == Method::Variational) {
            const cplx G = green(ctx, r, rp) * jac;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) v(2 * i + j) = G * (k2nn * p[i] * q[j] - cm[i] * cn[j]);
            return v;
        }
        cplx K;
        switch (op) {
            case Operator::S: K = green(ctx, r, rp); break;
            case Operator::D: K = dg_dnp(ctx, r, rp, sn.normal); break;
            case Operator::Dadj: K = dg_dn(ctx, r, rp, sm.normal); break;
            default: K = d2g_dndnp(ctx, r, rp, sm.normal, sn.normal); break;
        }
        K *= jac;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) v(2 * i + j) = K * p[i] * q[j];
        return v;
    };
    return to_block(integrate_2d(gl_rule(nq), f));
}

inline PairBlock coincident_block(const Mesh& mesh, int m, Operator op, Method method, const KernelContext& ctx,
                                  int nq) {
    const double l = mesh.segment(m).length;
    cplx d, o;
    switch (op) {
        case Operator::D:
        case Operator::Dadj: return PairBlock::Constant(double_coincident());
        case Operator::S: {
            const CoincidentSingleLayer c = single_coincident(ctx, l, nq);
            d = c.i11;
            o = c.i12;
            break;
        }
        case Operator::N:
            if (method == Method::Direct) {
                const HypersingularCoincident c = hyper_direct_coincident(ctx, l, nq);
                d = c.u11_reg;
                o = c.u12;
            } else {
                const VariationalCoincident c = hyper_variational_coincident(ctx, l, nq);
                d = c.u11;
                o = c.u12;
            }
            break;
    }
    PairBlock b;
    b << d, o, o, d;
    return b;
}

inline PairBlock adjacent_block(const Mesh& mesh, int m, int n, Operator op, Method method,
                                const KernelContext& ctx, int nq, int levels) {
    const AdjacentGeom g = AdjacentGeom::from_mesh(mesh, m, n);
    PairBlock vb;
    switch (op) {
        case Operator::S: vb = single_adjacent_block(ctx, g, nq, levels); break;
        case Operator::D: vb = double_adjacent_block(ctx, g, false, nq); break;
        case Operator::Dadj: vb = double_adjacent_block(ctx, g, true, nq); break;
        case Operator::N:
            vb = method == Method::Direct ? hyper_direct_adjacent_block(ctx, g, nq, levels)
                                          : hyper_variational_adjacent_block(ctx, g, nq, levels);
            break;
    }
    // vertex/far ordering -> local A/B ordering
    const SegmentPairClass c = classify_pair(mesh, m, n);
    PairBlock b;
    for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb) {
            const int im = (a == 0) == (c.vertex_m == NodeAt::A) ? 0 : 1;
            const int in = (bb == 0) == (c.vertex_n == NodeAt::A) ? 0 : 1;
            b(a, bb) = vb(im, in);
        }
    return b;
}

}  // namespace detail

// 2x2 block of segment pair (m, n), indexed by the local (A, B) basis on each segment.
inline PairBlock pair_block(const Mesh& mesh, int m, int n, Operator op, Method method, const KernelContext& ctx,
                            int nq, int levels) {
    switch (classify_pair(mesh, m, n).tag) {
        case PairTag::Coincident: return detail::coincident_block(mesh, m, op, method, ctx, nq);
        case PairTag::Adjacent: return detail::adjacent_block(mesh, m, n, op, method, ctx, nq, levels);
        case PairTag::Disjoint: break;
    }
    return detail::disjoint_block(mesh, m, n, op, method, ctx, nq);
}

inline OperatorMatrix assemble(const Mesh& mesh, Operator op, Method method, const KernelContext& ctx_in,
                               const AssemblyOptions& opt = {}) {
    detail::check_method(op, method);
    ctx_in.validate();
    if (opt.levels < 0) throw ArgumentError("levels must be >= 0");
    gl_rule(opt.nq);
    KernelContext ctx = ctx_in;
    ctx.scale = mesh.diameter();
    const int N = mesh.size();
    std::vector<PairBlock> blocks(static_cast<std::size_t>(N) * N);

    auto work = [&](int idx) {
        blocks[idx] = pair_block(mesh, idx / N, idx % N, op, method, ctx, opt.nq, opt.levels);
    };
    int nthreads = opt.deterministic ? 1 : (opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency()));
    nthreads = std::clamp(nthreads, 1, N * N);
    if (nthreads == 1) {
        for (int idx = 0; idx < N * N; ++idx) work(idx);
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(nthreads);
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (int idx = next++; idx < N * N; idx = next++) work(idx);
                } catch (...) {
                    errors[t] = std::current_exception();
                    next = N * N;
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    OperatorMatrix out;
    out.op = op;
    out.method = method;
    out.k = ctx.k;
    out.kind = ctx.kind;
    out.nq = opt.nq;
    out.entries = Eigen::MatrixXcd::Zero(N, N);
    for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n) {
            const PairBlock& b = blocks[static_cast<std::size_t>(m) * N + n];
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c)
                    out.entries(mesh.node_of(m, a ? NodeAt::B : NodeAt::A), mesh.node_of(n, c ? NodeAt::B : NodeAt::A)) +=
                        b(a, c);
        }
    return out;
}

inline OperatorMatrix assemble(const Mesh& mesh, Operator op, Method method, const KernelContext& ctx, int nq,
                               int levels = 8) {
    AssemblyOptions opt;
    opt.nq = nq;
    opt.levels = levels;
    return assemble(mesh, op, method, ctx, opt);
}

struct ComparisonRow {
    std::string node_class;
    int i = 0, j = 0;
    cplx direct, variational;
    double abs_diff = 0.0, rel_diff = 0.0;
};

struct ComparisonReport {
    double k = 0.0;
    std::vector<ComparisonRow> rows;
    double max_abs_diff = 0.0;   // over the whole matrix
    double max_imag_diff = 0.0;  // over the whole matrix
};

inline ComparisonReport compare_methods(const Mesh& mesh, const KernelContext& ctx, int nq = 20, int levels = 8) {
    AssemblyOptions opt;
    opt.nq = nq;
    opt.levels = levels;
    const OperatorMatrix nd = assemble(mesh, Operator::N, Method::Direct, ctx, opt);
    const OperatorMatrix nv = assemble(mesh, Operator::N, Method::Variational, ctx, opt);
    ComparisonReport rep;
    rep.k = ctx.k;
    const Eigen::MatrixXcd diff = nd.entries - nv.entries;
    rep.max_abs_diff = diff.cwiseAbs().maxCoeff();
    rep.max_imag_diff = diff.imag().cwiseAbs().maxCoeff();
    const char* names[3] = {"coincident", "first-neighbor", "second-neighbor"};
    for (int c = 0; c < 3; ++c) {
        ComparisonRow r;
        r.node_class = names[c];
        r.i = 0;
        r.j = c % mesh.size();
        r.direct = nd.entries(r.i, r.j);
        r.variational = nv.entries(r.i, r.j);
        r.abs_diff = std::abs(r.direct - r.variational);
        r.rel_diff = r.abs_diff / std::max(std::abs(r.direct), 1e-300);
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace helmbem
