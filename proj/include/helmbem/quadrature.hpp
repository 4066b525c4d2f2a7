#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "types.hpp"

namespace helmbem {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
};

inline constexpr int kMaxRuleOrder = 128;

namespace detail {

inline void legendre(int n, double x, double& pn, double& dpn) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    pn = p1;
    dpn = n * (x * p1 - p0) / (x * x - 1.0);
}

inline QuadRule build_gl_rule(int n) {
    QuadRule r;
    r.order = n;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pn, dp;
        for (int it = 0; it < 100; ++it) {
            legendre(n, x, pn, dp);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(n, x, pn, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[n - 1 - i] = x;
        r.nodes[i] = -x;
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

inline const std::array<QuadRule, kMaxRuleOrder + 1>& rule_table() {
    static const std::array<QuadRule, kMaxRuleOrder + 1> table = [] {
        std::array<QuadRule, kMaxRuleOrder + 1> t;
        for (int n = 1; n <= kMaxRuleOrder; ++n) t[n] = build_gl_rule(n);
        return t;
    }();
    return table;
}

inline bool all_finite(double v) { return std::isfinite(v); }
inline bool all_finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
    return v.allFinite();
}

template <class R>
R zero() {
    if constexpr (std::is_arithmetic_v<R> || std::is_same_v<R, cplx>)
        return R(0);
    else
        return R::Zero();
}

[[noreturn]] inline void non_finite(int node, double x) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite integrand at quadrature node " << node << " (x = " << x << ")";
    throw DomainError(os.str());
}

}  // namespace detail

inline const QuadRule& gl_rule(int n) {
    if (n < 1 || n > kMaxRuleOrder) throw ArgumentError("gl_rule: order must be in 1..128");
    return detail::rule_table()[n];
}

template <class F>
auto integrate_1d(const QuadRule& rule, double a, double b, F&& f) {
    using R = std::decay_t<decltype(f(a))>;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    R sum = f(mid + half * rule.nodes[0]) * rule.weights[0];
    if (!detail::all_finite(sum)) detail::non_finite(0, mid + half * rule.nodes[0]);
    for (int i = 1; i < rule.order; ++i) {
        const double x = mid + half * rule.nodes[i];
        const R v = f(x);
        if (!detail::all_finite(v)) detail::non_finite(i, x);
        sum += v * rule.weights[i];
    }
    return R(sum * half);
}

// Breakpoints a, a + (b-a) 2^-levels, ..., a + (b-a)/2, b.
inline std::vector<double> dyadic_breaks(double a, double b, int levels) {
    if (levels < 0) throw ArgumentError("refinement levels must be >= 0");
    std::vector<double> br{a};
    for (int j = levels; j >= 1; --j) br.push_back(a + (b - a) * std::ldexp(1.0, -j));
    br.push_back(b);
    return br;
}

template <class F>
auto integrate_1d_refined(const QuadRule& rule, double a, double b, F&& f, int levels) {
    const std::vector<double> br = dyadic_breaks(a, b, levels);
    if (levels == 0) return integrate_1d(rule, a, b, f);
    // innermost panel graded as x = a + w u^3 so log-type endpoint behaviour converges fast
    const double w = br[1] - br[0];
    auto sum = integrate_1d(rule, 0.0, 1.0, [&](double u) { return f(a + w * u * u * u) * (3.0 * w * u * u); });
    for (std::size_t p = 1; p + 1 < br.size(); ++p) sum += integrate_1d(rule, br[p], br[p + 1], f);
    return sum;
}

// Flattened composite rule on [a,b] (nodes and weights already mapped).
struct PointRule {
    std::vector<double> x;
    std::vector<double> w;
};

inline PointRule composite_rule(const QuadRule& rule, const std::vector<double>& breaks) {
    PointRule pr;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double half = 0.5 * (breaks[p + 1] - breaks[p]), mid = 0.5 * (breaks[p + 1] + breaks[p]);
        for (int i = 0; i < rule.order; ++i) {
            pr.x.push_back(mid + half * rule.nodes[i]);
            pr.w.push_back(half * rule.weights[i]);
        }
    }
    return pr;
}

template <class F>
auto integrate_tensor(const PointRule& ru, const PointRule& rv, F&& f) {
    using R = std::decay_t<decltype(f(0.0, 0.0))>;
    R total = detail::zero<R>();
    for (std::size_t i = 0; i < ru.x.size(); ++i) {
        R row = detail::zero<R>();
        for (std::size_t j = 0; j < rv.x.size(); ++j) {
            const R v = f(ru.x[i], rv.x[j]);
            if (!detail::all_finite(v)) detail::non_finite(static_cast<int>(j), rv.x[j]);
            row += v * rv.w[j];
        }
        total += row * ru.w[i];
    }
    return total;
}

// Tensor rule on [0,1]^2.
template <class F>
auto integrate_2d(const QuadRule& rule, F&& f) {
    const PointRule r = composite_rule(rule, {0.0, 1.0});
    return integrate_tensor(r, r, f);
}

// Tensor rule on [0,1]^2 refined dyadically toward the corner (0,0).
template <class F>
auto integrate_2d_refined(const QuadRule& rule, F&& f, int levels) {
    const PointRule r = composite_rule(rule, dyadic_breaks(0.0, 1.0, levels));
    return integrate_tensor(r, r, f);
}

}  // namespace helmbem
