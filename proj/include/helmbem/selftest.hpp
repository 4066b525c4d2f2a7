#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "shapes.hpp"
#include "singular.hpp"
#include "specfun.hpp"

namespace helmbem {

struct Check {
    std::string name;
    double tolerance = 0.0;
    double measured = 0.0;
    bool passed = false;
    std::string note;
};

inline Check make_check(std::string name, double tol, double measured, std::string note = {}) {
    return {std::move(name), tol, measured, std::isfinite(measured) && measured <= tol, std::move(note)};
}

namespace checks {

inline double rel_asym(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    return (A - B).cwiseAbs().maxCoeff() / std::max(A.cwiseAbs().maxCoeff(), 1e-300);
}

inline const std::vector<double>& kl_grid() {
    static const std::vector<double> g{0.05, 0.5, 1.0, 2.26, 5.0, 20.0};
    return g;
}

inline std::vector<Mesh> test_meshes() {
    return {shapes::unit_square(), shapes::hexagon(), shapes::irregular_octagon()};
}

// Adjacent grid {1, 2.26}^2 x {pi/3, pi/2, 2pi/3, pi - 0.1}
template <class F>
void for_adjacent_grid(F&& f) {
    for (double lm : {1.0, 2.26})
        for (double ln : {1.0, 2.26})
            for (double th : {kPi / 3, kPi / 2, 2 * kPi / 3, kPi - 0.1}) f(lm, ln, th);
}

inline SegmentGeom canonical_m(double lm, double th) {
    return SegmentGeom(Vec2(lm * std::cos(th), lm * std::sin(th)), Vec2(0.0, 0.0));
}
inline SegmentGeom canonical_n(double ln) { return SegmentGeom(Vec2(0.0, 0.0), Vec2(ln, 0.0)); }

// coincident closed forms over the (k, l) grid, l in {1, 2.26}, both kinds
inline std::vector<Check> coincident_vs_oracle() {
    double es = 0, ed = 0, ev = 0;
    for (double l : {1.0, 2.26})
        for (double kl : kl_grid())
            for (HankelKind kind : {HankelKind::First, HankelKind::Second}) {
                const KernelContext ctx(kl / l, kind);
                const SegmentGeom s(Vec2(0, 0), Vec2(l, 0));
                auto o = [&](Operator op, Method me, NodeAt b) {
                    return oracle_pair_integral(op, me, ctx, s, s, NodeAt::A, b).value;
                };
                const auto I = single_coincident(ctx, l);
                es = std::max({es, std::abs(I.i11 - o(Operator::S, Method::NotApplicable, NodeAt::A)),
                               std::abs(I.i12 - o(Operator::S, Method::NotApplicable, NodeAt::B))});
                const auto U = hyper_direct_coincident(ctx, l);
                ed = std::max({ed, std::abs(U.u11_reg - o(Operator::N, Method::Direct, NodeAt::A)),
                               std::abs(U.u12 - o(Operator::N, Method::Direct, NodeAt::B))});
                const auto V = hyper_variational_coincident(ctx, l);
                ev = std::max({ev, std::abs(V.u11 - o(Operator::N, Method::Variational, NodeAt::A)),
                               std::abs(V.u12 - o(Operator::N, Method::Variational, NodeAt::B))});
            }
    return {make_check("single layer coincident I11/I12 vs oracle", 1e-8, es),
            make_check("hypersingular coincident direct vs oracle", 1e-4, ed),
            make_check("hypersingular coincident variational vs oracle", 1e-7, ev)};
}

// closed-form singular part plus refined regular part against the eps-counterterm oracle
inline Check adjacent_hyper_vs_oracle(double k = 1.0) {
    double err = 0;
    for (HankelKind kind : {HankelKind::First, HankelKind::Second}) {
        const KernelContext ctx(k, kind);
        for_adjacent_grid([&](double lm, double ln, double th) {
            const cplx v = hyper_direct_adjacent(ctx, lm, ln, th, {true, true}).total();
            const cplx o = oracle_pair_integral(Operator::N, Method::Direct, ctx, canonical_m(lm, th),
                                                canonical_n(ln), NodeAt::B, NodeAt::A)
                               .value;
            err = std::max(err, std::abs(v - o));
        });
    }
    return make_check("adjacent hypersingular both-one vs oracle", 1e-6, err);
}

inline std::vector<Check> adjacent_hyper_identities() {
    double sw = 0, jump = 0;
    for_adjacent_grid([&](double lm, double ln, double th) {
        for (HankelKind kind : {HankelKind::First, HankelKind::Second})
            sw = std::max(sw, std::abs(hyper_adjacent_singular_part(kind, lm, ln, th) -
                                       hyper_adjacent_singular_part(kind, ln, lm, th)));
    });
    for (double lm : {1.0, 2.26})
        for (double ln : {1.0, 2.26})
            for (double d : {1e-12, 1e-13, 1e-14}) {
                const cplx lo = hyper_adjacent_singular_part(HankelKind::First, lm, ln, kPi / 2 - d);
                const cplx mid = hyper_adjacent_singular_part(HankelKind::First, lm, ln, kPi / 2);
                const cplx hi = hyper_adjacent_singular_part(HankelKind::First, lm, ln, kPi / 2 + d);
                jump = std::max({jump, std::abs(hi - lo), std::abs(mid - lo), std::abs(hi - mid)});
            }
    return {make_check("adjacent singular part swap symmetry", 1e-13, sw),
            make_check("adjacent singular part continuity at pi/2", 1e-10, jump)};
}

inline std::vector<Check> adjacent_double_vs_oracle(double k = 1.0) {
    double err = 0, conv = 0;
    const KernelContext ctx(k, HankelKind::First);
    for_adjacent_grid([&](double lm, double ln, double th) {
        const cplx v = double_adjacent_singular(ctx, lm, ln, th, 20).value;
        const cplx v40 = double_adjacent_singular(ctx, lm, ln, th, 40).value;
        const cplx o = oracle_pair_integral(Operator::D, Method::NotApplicable, ctx, canonical_m(lm, th),
                                            canonical_n(ln), NodeAt::B, NodeAt::A)
                           .value;
        err = std::max(err, std::abs(v - o));
        conv = std::max(conv, std::abs(v - v40));
    });
    return {make_check("adjacent double layer both-one vs oracle", 1e-7, err),
            make_check("adjacent double layer nq 20 vs 40", 1e-9, conv)};
}

inline std::vector<Check> matrix_identities(double k = 1.0) {
    const KernelContext ctx(k, HankelKind::First);
    double dzero = 0, ii = 0, sum = 0, sym = 0, dt = 0;
    for (const Mesh& mesh : test_meshes()) {
        for (int m = 0; m < mesh.size(); ++m) {
            dzero = std::max({dzero,
                              detail::coincident_block(mesh, m, Operator::D, Method::NotApplicable, ctx, 20)
                                  .cwiseAbs()
                                  .maxCoeff(),
                              detail::coincident_block(mesh, m, Operator::Dadj, Method::NotApplicable, ctx, 20)
                                  .cwiseAbs()
                                  .maxCoeff()});
            const PairBlock s = detail::coincident_block(mesh, m, Operator::S, Method::NotApplicable, ctx, 20);
            ii = std::max({ii, std::abs(s(0, 0) - s(1, 1)), std::abs(s(0, 1) - s(1, 0))});
            const double l = mesh.segment(m).length;
            const auto I = single_coincident(ctx, l);
            const auto V = hyper_variational_coincident(ctx, l);
            sum = std::max(sum, std::abs(V.u11 + V.u12 - k * k * (I.i11 + I.i12)));
        }
        for (auto [op, me] : {std::pair{Operator::S, Method::NotApplicable}, std::pair{Operator::N, Method::Direct},
                              std::pair{Operator::N, Method::Variational}}) {
            const Eigen::MatrixXcd A = assemble(mesh, op, me, ctx).entries;
            sym = std::max(sym, rel_asym(A, A.transpose()));
        }
        const Eigen::MatrixXcd D = assemble(mesh, Operator::D, Method::NotApplicable, ctx).entries;
        const Eigen::MatrixXcd Da = assemble(mesh, Operator::Dadj, Method::NotApplicable, ctx).entries;
        dt = std::max(dt, rel_asym(D.transpose(), Da));
    }
    return {make_check("D/Dadj coincident blocks vanish", 0.0, dzero),
            make_check("I11 = I22 and I12 = I21", 0.0, ii),
            make_check("variational U11 + U12 = k^2 (I11 + I12)", 1e-13, sum),
            make_check("S and N symmetric (relative)", 1e-12, sym),
            make_check("Dadj = D^T (relative)", 1e-12, dt)};
}

inline std::vector<Check> specfun_limits() {
    double lim = 0, rec = 0, conj = 0, kconj = 0;
    for (HankelKind kind : {HankelKind::First, HankelKind::Second})
        lim = std::max({lim, std::abs(calI0(kind, 1e-12)), std::abs(calI1(kind, 1e-12))});
    for (int i = 0; i <= 200; ++i) {
        const double z = 0.01 * std::pow(1e4, i / 200.0);
        for (HankelKind kind : {HankelKind::First, HankelKind::Second}) {
            const cplx h0 = hankel(kind, 0, z), h1 = hankel(kind, 1, z), h2 = hankel(kind, 2, z);
            const double scale = std::max({std::abs(h0), std::abs(h2), std::abs(2.0 / z * h1)});
            rec = std::max(rec, std::abs(h0 + h2 - 2.0 / z * h1) / scale);
        }
        const double s0 = struve_h(0, z), s1 = struve_h(1, z), s2 = struve_h(2, z);
        const double extra = 2.0 * z / (3.0 * kPi);
        const double scale = std::max({std::abs(s0), std::abs(s2), std::abs(2.0 / z * s1), extra});
        rec = std::max(rec, std::abs(s0 + s2 - 2.0 / z * s1 - extra) / scale);

        auto pc = [&](cplx a, cplx b) { return std::abs(a - std::conj(b)) / std::max(std::abs(b), 1e-300); };
        conj = std::max({conj, pc(hankel(HankelKind::Second, 0, z), hankel(HankelKind::First, 0, z)),
                         pc(hankel(HankelKind::Second, 1, z), hankel(HankelKind::First, 1, z)),
                         pc(calI0(HankelKind::Second, z), calI0(HankelKind::First, z)),
                         pc(calI1(HankelKind::Second, z), calI1(HankelKind::First, z))});
        if (i % 20 == 0) {
            conj = std::max({conj, pc(gamma0(HankelKind::Second, z, 20), gamma0(HankelKind::First, z, 20)),
                             pc(gamma2(HankelKind::Second, z, 20), gamma2(HankelKind::First, z, 20))});
            const auto a = single_coincident(KernelContext(z, HankelKind::First), 1.0);
            const auto b = single_coincident(KernelContext(z, HankelKind::Second), 1.0);
            kconj = std::max({kconj, std::abs(b.i11 + std::conj(a.i11)) / std::abs(a.i11),
                              std::abs(b.i12 + std::conj(a.i12)) / std::abs(a.i12)});
        }
    }
    const Mesh sq = shapes::unit_square();
    for (auto [op, me] : {std::pair{Operator::S, Method::NotApplicable}, std::pair{Operator::N, Method::Direct}}) {
        const auto a = assemble(sq, op, me, KernelContext(1.0, HankelKind::First)).entries;
        const auto b = assemble(sq, op, me, KernelContext(1.0, HankelKind::Second)).entries;
        kconj = std::max(kconj, rel_asym(b, (-a.conjugate()).eval()));
    }
    return {make_check("calI0/calI1 at sigma = 1e-12", 1e-10, lim),
            make_check("Hankel and Struve recurrences on [0.01, 100] (relative)", 1e-10, rec),
            make_check("kind 2 = conj(kind 1) for H, calI0, calI1, gamma0, gamma2", 1e-14, conj),
            make_check("kind 2 = -conj(kind 1) for kernel integrals and matrices", 1e-12, kconj)};
}

inline std::vector<Check> method_agreement(const Mesh& mesh, std::vector<double> ks = {0.1, 1.0, 10.0}) {
    double re = 0, im = 0;
    for (double k : ks) {
        const ComparisonReport r = compare_methods(mesh, KernelContext(k, HankelKind::First));
        re = std::max(re, r.max_abs_diff);
        im = std::max(im, r.max_imag_diff);
    }
    return {make_check("N direct vs variational, max entry difference", 2e-4, re),
            make_check("N direct vs variational, imaginary parts", 1e-6, im)};
}

// S ~ s^2, D ~ s, N ~ s^0 under (mesh, k) -> (s mesh, k / s)
inline std::vector<Check> scaling() {
    const Mesh base = shapes::irregular_octagon();
    double es = 0, ed = 0, en = 0;
    for (double s : {0.1, 10.0}) {
        const Mesh scaled = base.scaled(s);
        auto run = [&](const Mesh& m, double k, Operator op, Method me) {
            return assemble(m, op, me, KernelContext(k, HankelKind::First)).entries;
        };
        es = std::max(es, rel_asym(s * s * run(base, 1.0, Operator::S, Method::NotApplicable),
                                   run(scaled, 1.0 / s, Operator::S, Method::NotApplicable)));
        ed = std::max(ed, rel_asym(s * run(base, 1.0, Operator::D, Method::NotApplicable),
                                   run(scaled, 1.0 / s, Operator::D, Method::NotApplicable)));
        for (Method me : {Method::Direct, Method::Variational})
            en = std::max(en, rel_asym(run(base, 1.0, Operator::N, me), run(scaled, 1.0 / s, Operator::N, me)));
    }
    return {make_check("scaling S(s mesh, k/s) = s^2 S", 1e-10, es),
            make_check("scaling D(s mesh, k/s) = s D", 1e-10, ed),
            make_check("scaling N(s mesh, k/s) = N", 1e-10, en)};
}

inline Check determinism() {
    const Mesh mesh = shapes::irregular_octagon();
    AssemblyOptions det;
    det.deterministic = true;
    AssemblyOptions par;
    par.threads = 4;
    const KernelContext ctx(2.0, HankelKind::First);
    const std::string a = matrix_to_csv(assemble(mesh, Operator::N, Method::Direct, ctx, det));
    const std::string b = matrix_to_csv(assemble(mesh, Operator::N, Method::Direct, ctx, det));
    const std::string c = matrix_to_csv(assemble(mesh, Operator::N, Method::Direct, ctx, par));
    return make_check("deterministic assembly is byte-identical", 0.0, (a == b && a == c) ? 0.0 : 1.0);
}

inline std::vector<Check> square_vs_oracle() {
    const Mesh sq = shapes::unit_square();
    const KernelContext ctx(1.0, HankelKind::First);
    std::vector<Check> out;
    struct Case {
        Operator op;
        Method me;
        double tol;
    };
    for (Case c : {Case{Operator::S, Method::NotApplicable, 1e-6}, Case{Operator::D, Method::NotApplicable, 1e-6},
                   Case{Operator::Dadj, Method::NotApplicable, 1e-6}, Case{Operator::N, Method::Direct, 1e-4},
                   Case{Operator::N, Method::Variational, 1e-6}}) {
        const double err = (assemble(sq, c.op, c.me, ctx).entries - oracle_matrix(sq, c.op, c.me, ctx))
                               .cwiseAbs()
                               .maxCoeff();
        std::string name = "unit square " + to_string(c.op);
        if (c.op == Operator::N) name += " " + to_string(c.me);
        out.push_back(make_check(name + " vs oracle", c.tol, err));
    }
    return out;
}

}  // namespace checks

struct SelftestReport {
    std::vector<Check> checks;
    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }
};

// fast: identities, symmetries, limits and method agreement; full adds the oracle comparisons
inline SelftestReport run_selftest(bool full, const std::function<void(const Check&)>& on_check = {}) {
    SelftestReport rep;
    auto add = [&](std::vector<Check> cs) {
        for (auto& c : cs) {
            if (on_check) on_check(c);
            rep.checks.push_back(std::move(c));
        }
    };
    add(checks::specfun_limits());
    add(checks::matrix_identities());
    add(checks::adjacent_hyper_identities());
    add(checks::method_agreement(shapes::hexagon()));
    add({checks::determinism()});
    add(checks::scaling());
    if (full) {
        add(checks::coincident_vs_oracle());
        add({checks::adjacent_hyper_vs_oracle()});
        add(checks::adjacent_double_vs_oracle());
        add(checks::square_vs_oracle());
    }
    return rep;
}

}  // namespace helmbem
