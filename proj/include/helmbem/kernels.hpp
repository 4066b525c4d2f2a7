#pragma once

#include <cmath>

#include "geometry.hpp"
#include "specfun.hpp"

namespace helmbem {

struct KernelContext {
    double k = 1.0;
    HankelKind kind = HankelKind::First;
    // length scale for the coincident-point guard (mesh diameter during assembly)
    double scale = 1.0;

    KernelContext() = default;
    KernelContext(double k_, HankelKind kind_, double scale_ = 1.0) : k(k_), kind(kind_), scale(scale_) {
        validate();
    }
    void validate() const {
        if (!std::isfinite(k) || !(k > 0)) throw ArgumentError("wavenumber k must be finite and > 0");
    }
};

namespace detail {

inline double separation(const KernelContext& ctx, const Vec2& R) {
    const double r = R.norm();
    if (!(r > 1e-14 * ctx.scale)) throw DomainError("kernel evaluated at coincident points");
    return r;
}

}  // namespace detail

inline cplx green(const KernelContext& ctx, const Vec2& r, const Vec2& rp) {
    const double R = detail::separation(ctx, r - rp);
    return cplx(0.0, 0.25) * hankel(ctx.kind, 0, ctx.k * R);
}

inline cplx dg_dnp(const KernelContext& ctx, const Vec2& r, const Vec2& rp, const Vec2& np) {
    const Vec2 Rv = r - rp;
    const double R = detail::separation(ctx, Rv);
    return cplx(0.0, 0.25 * ctx.k / R) * hankel(ctx.kind, 1, ctx.k * R) * Rv.dot(np);
}

inline cplx dg_dn(const KernelContext& ctx, const Vec2& r, const Vec2& rp, const Vec2& n) {
    const Vec2 Rv = r - rp;
    const double R = detail::separation(ctx, Rv);
    return -cplx(0.0, 0.25 * ctx.k / R) * hankel(ctx.kind, 1, ctx.k * R) * Rv.dot(n);
}

inline cplx d2g_dndnp(const KernelContext& ctx, const Vec2& r, const Vec2& rp, const Vec2& n, const Vec2& np) {
    const Vec2 Rv = r - rp;
    const double R = detail::separation(ctx, Rv);
    const double z = ctx.k * R;
    const cplx h1 = hankel(ctx.kind, 1, z), h2 = hankel(ctx.kind, 2, z);
    return cplx(0.0, 0.25 * ctx.k / (R * R)) * (R * h1 * n.dot(np) - ctx.k * h2 * Rv.dot(n) * Rv.dot(np));
}

// Regular part: d2g_dndnp minus d2g_singular, built from the regularized Hankel functions.
inline cplx d2g_dndnp_reg(const KernelContext& ctx, const Vec2& r, const Vec2& rp, const Vec2& n,
                          const Vec2& np) {
    const Vec2 Rv = r - rp;
    const double R = detail::separation(ctx, Rv);
    const double z = ctx.k * R;
    const cplx h1 = hankel_reg(ctx.kind, 1, z), h2 = hankel_reg(ctx.kind, 2, z);
    return cplx(0.0, 0.25 * ctx.k * ctx.k) * (h1 / z * n.dot(np) - h2 * Rv.dot(n) * Rv.dot(np) / (R * R));
}

// ±(1/2pi)[(n.n')/R^2 - 2 (R.n)(R.n')/R^4]
inline double d2g_singular(const KernelContext& ctx, const Vec2& r, const Vec2& rp, const Vec2& n,
                           const Vec2& np) {
    const Vec2 Rv = r - rp;
    const double R = detail::separation(ctx, Rv);
    const double R2 = R * R;
    return kind_sign(ctx.kind) / (2.0 * kPi) * (n.dot(np) / R2 - 2.0 * Rv.dot(n) * Rv.dot(np) / (R2 * R2));
}

}  // namespace helmbem
