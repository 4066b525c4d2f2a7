#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "quadrature.hpp"
#include "types.hpp"

namespace helmbem {

enum class BesselFamily { J, Y, StruveH };

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

inline double bessel_j(int n, double x) { return boost::math::cyl_bessel_j(n, x); }
inline double bessel_y(int n, double x) { return boost::math::cyl_neumann(n, x); }

// Y1(z) + 2/(pi z), finite as z -> 0
inline double y1_reg(double z) {
    if (z >= 2.0) return bessel_y(1, z) + 2.0 / (kPi * z);
    const double h = 0.5 * z, q = -h * h;
    double term = h, psum = 0.0;  // term = (z/2)^(2k+1) (-1)^k / (k!(k+1)!)
    double pa = -kEuler, pb = 1.0 - kEuler;
    for (int k = 0; k < 40; ++k) {
        const double add = (pa + pb) * term;
        psum += add;
        if (std::abs(add) < 1e-18 * std::abs(psum)) break;
        term *= q / ((k + 1.0) * (k + 2.0));
        pa += 1.0 / (k + 1);
        pb += 1.0 / (k + 2);
    }
    return (2.0 / kPi) * bessel_j(1, z) * std::log(h) - psum / kPi;
}

// Y2(z) + 4/(pi z^2), tends to -1/pi as z -> 0
inline double y2_reg(double z) {
    if (z >= 2.0) return bessel_y(2, z) + 4.0 / (kPi * z * z);
    const double h = 0.5 * z, q = -h * h;
    double term = 0.5 * h * h, psum = 0.0;  // (-z^2/4)^k (z/2)^2 / (k!(k+2)!)
    double pa = -kEuler, pb = 1.5 - kEuler;
    for (int k = 0; k < 40; ++k) {
        const double add = (pa + pb) * term;
        psum += add;
        if (std::abs(add) < 1e-18 * std::abs(psum)) break;
        term *= q / ((k + 1.0) * (k + 3.0));
        pa += 1.0 / (k + 1);
        pb += 1.0 / (k + 3);
    }
    return -1.0 / kPi + (2.0 / kPi) * std::log(h) * bessel_j(2, z) - psum / kPi;
}

inline double struve_series(int nu, double x) {
    const double h = 0.5 * x, q = -h * h;
    // Gamma(3/2) Gamma(nu + 3/2)
    const double g0 = nu == 0 ? kPi / 4.0 : nu == 1 ? 3.0 * kPi / 8.0 : 15.0 * kPi / 16.0;
    double term = std::pow(h, nu + 1) / g0, sum = 0.0;
    for (int k = 0; k < 200; ++k) {
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        term *= q / ((k + 1.5) * (k + nu + 1.5));
    }
    return sum;
}

// Neumann series in J_n; J_n by Miller's backward recurrence normalized with J0 + 2 sum J_2k = 1
inline double struve_neumann(int nu, double x) {
    int top = static_cast<int>(x) + 60;
    if (top % 2) ++top;
    std::vector<double> j(top + 2, 0.0);
    j[top + 1] = 0.0;
    j[top] = 1e-30;
    for (int n = top; n >= 1; --n) {
        j[n - 1] = (2.0 * n / x) * j[n] - j[n + 1];
        if (std::abs(j[n - 1]) > 1e250) {
            for (int m = n - 1; m <= top; ++m) j[m] *= 1e-250;
        }
    }
    double norm = j[0];
    for (int n = 2; n <= top; n += 2) norm += 2.0 * j[n];
    for (double& v : j) v /= norm;
    double s = 0.0;
    if (nu == 0) {
        for (int n = top - 1; n >= 1; n -= 2) s += j[n] / n;
        return 4.0 / kPi * s;
    }
    for (int kk = top / 2; kk >= 1; --kk) s += j[2 * kk] / (4.0 * kk * kk - 1.0);
    return 2.0 / kPi - 2.0 / kPi * j[0] + 4.0 / kPi * s;
}

// H_nu - Y_nu for large x
inline double struve_minus_y_asym(int nu, double x) {
    const double x2 = x * x;
    double sum, term;
    if (nu == 0) {
        sum = 0.0;
        term = 1.0 / x;
    } else {
        sum = 1.0;
        term = 1.0 / x2;
    }
    for (int k = 0; k < 60; ++k) {
        sum += term;
        const double f = nu == 0 ? (2.0 * k + 1) * (2.0 * k + 1) / x2 : (2.0 * k + 1) * (2.0 * k + 3) / x2;
        if (f >= 1.0 || std::abs(term) < 1e-18 * std::abs(sum)) break;
        term *= -f;
    }
    return 2.0 / kPi * sum;
}

inline double struve(int nu, double x) {
    if (x == 0.0) return 0.0;
    const double ax = std::abs(x);
    double v;
    if (ax <= 4.0)
        v = struve_series(nu, ax);
    else if (ax < 30.0)
        v = struve_neumann(nu, ax);
    else
        v = bessel_y(nu, ax) + struve_minus_y_asym(nu, ax);
    // H0 is odd, H1 is even
    return (nu == 0 && x < 0) ? -v : v;
}

}  // namespace detail

inline double bessel(BesselFamily family, int order, double x) {
    detail::require_finite(x, "bessel");
    switch (family) {
        case BesselFamily::J:
            if (order < 0 || order > 2) throw ArgumentError("bessel: J order must be 0, 1 or 2");
            if (x < 0) throw DomainError("bessel: J needs x >= 0");
            return detail::bessel_j(order, x);
        case BesselFamily::Y:
            if (order < 0 || order > 2) throw ArgumentError("bessel: Y order must be 0, 1 or 2");
            if (x < 0) throw DomainError("bessel: Y needs x > 0");
            return detail::bessel_y(order, x);
        case BesselFamily::StruveH:
            if (order < -1 || order > 2) throw ArgumentError("bessel: Struve order must be -1..2");
            if (x < 0) throw DomainError("bessel: Struve needs x >= 0");
            if (order == -1) return 2.0 / kPi - detail::struve(1, x);
            if (order == 2) {
                if (x == 0.0) return 0.0;
                if (x <= 4.0) return detail::struve_series(2, x);
                return 2.0 / x * detail::struve(1, x) - detail::struve(0, x) + 2.0 * x / (3.0 * kPi);
            }
            return detail::struve(order, x);
    }
    throw ArgumentError("bessel: unknown family");
}

inline double struve_h(int order, double x) { return bessel(BesselFamily::StruveH, order, x); }

inline cplx hankel(HankelKind kind, int order, double x) {
    detail::require_finite(x, "hankel");
    if (!(x > 0)) throw DomainError("hankel: argument must be > 0");
    if (order < 0 || order > 2) throw ArgumentError("hankel: order must be 0, 1 or 2");
    return with_kind(kind, {detail::bessel_j(order, x), detail::bessel_y(order, x)});
}

inline cplx hankel_reg(HankelKind kind, int order, double x) {
    detail::require_finite(x, "hankel_reg");
    if (!(x > 0)) throw DomainError("hankel_reg: argument must be > 0");
    if (order == 1) return with_kind(kind, {detail::bessel_j(1, x), detail::y1_reg(x)});
    if (order == 2) return with_kind(kind, {detail::bessel_j(2, x), detail::y2_reg(x)});
    throw ArgumentError("hankel_reg: order must be 1 or 2");
}

// Integral of H0 over [0, sigma].
inline cplx calI0(HankelKind kind, double sigma) {
    detail::require_finite(sigma, "calI0");
    if (sigma < 0) throw DomainError("calI0: sigma must be >= 0");
    if (sigma == 0) return {0.0, 0.0};
    if (sigma < 1e-8) {
        const double im = 2.0 / kPi * sigma * (std::log(0.5 * sigma) + kEuler - 1.0);
        return with_kind(kind, {sigma, im});
    }
    const cplx h0 = hankel(HankelKind::First, 0, sigma), h1 = hankel(HankelKind::First, 1, sigma);
    const double s0 = detail::struve(0, sigma), s1 = detail::struve(1, sigma);
    const double sm1 = 2.0 / kPi - s1;
    return with_kind(kind, 0.5 * kPi * sigma * (h0 * sm1 + h1 * s0));
}

// Integral of x H0(x) over [0, sigma].
inline cplx calI1(HankelKind kind, double sigma) {
    detail::require_finite(sigma, "calI1");
    if (sigma < 0) throw DomainError("calI1: sigma must be >= 0");
    if (sigma == 0) return {0.0, 0.0};
    return with_kind(kind, {sigma * detail::bessel_j(1, sigma), sigma * detail::y1_reg(sigma)});
}

namespace detail {

// Composite rule on [0, sigma]: panels of width <= 3, the first one graded x = h u^3
// to absorb the x log x behaviour of calI0 at the origin.
template <class Weight>
cplx gamma_quad(double sigma, int nq, Weight&& weight) {
    const QuadRule& rule = gl_rule(nq);
    const int panels = std::max(1, static_cast<int>(std::ceil(sigma / 3.0)));
    const double h = sigma / panels;
    cplx total = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double u = 0.5 * (rule.nodes[i] + 1.0);
        const double x = h * u * u * u;
        total += 0.5 * rule.weights[i] * 3.0 * h * u * u * calI0(HankelKind::First, x) * weight(x);
    }
    for (int p = 1; p < panels; ++p) {
        const double a = p * h;
        total += integrate_1d(rule, a, a + h, [&](double x) { return calI0(HankelKind::First, x) * weight(x); });
    }
    return total;
}

}  // namespace detail

inline cplx gamma0(HankelKind kind, double sigma, int nq) {
    detail::require_finite(sigma, "gamma0");
    if (sigma < 0) throw DomainError("gamma0: sigma must be >= 0");
    if (nq < 2) throw ArgumentError("gamma0: nq must be >= 2");
    if (sigma == 0) return {0.0, 0.0};
    return with_kind(kind, detail::gamma_quad(sigma, nq, [](double) { return 1.0; }));
}

inline cplx gamma2(HankelKind kind, double sigma, int nq) {
    detail::require_finite(sigma, "gamma2");
    if (sigma < 0) throw DomainError("gamma2: sigma must be >= 0");
    if (nq < 2) throw ArgumentError("gamma2: nq must be >= 2");
    if (sigma == 0) return {0.0, 0.0};
    return with_kind(kind, detail::gamma_quad(sigma, nq, [sigma](double x) { return x * (x - sigma); }));
}

}  // namespace helmbem
