#pragma once

// Adaptive Gauss-Kronrod (21 point, Boost) on [0,1] and [0,1]^2.
//
// An endpoint exponent p declares that the integrand behaves like t^p near 0
// (or (1-t)^p near 1) with a smooth cofactor. The half interval next to that
// endpoint is mapped by t = v^k / 2 (or 1 - t = w^k / 2) with an integer k
// chosen so that k(1+p) >= 5, which turns the singular factor into a
// polynomial-like power of v the Kronrod rule integrates well.
//
// Integrands on [0,1] may take (t) or (t, 1-t). The second form receives
// 1-t computed without cancellation next to t = 1, which matters for factors
// such as (1-t)^p with p < 0.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>

namespace vlambda {

struct EndpointExponents {
    std::optional<double> at_zero;
    std::optional<double> at_one;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

inline constexpr double default_tol_1d = 1e-10;
inline constexpr double default_tol_2d = 1e-9;

namespace detail {

inline constexpr unsigned quad_max_depth = 18;

/// 0 means "leave the half interval as is".
inline int substitution_power(const std::optional<double>& p)
{
    if (!p)
        return 0;
    const double e = *p;
    if (e >= 0.0 && e == std::floor(e))
        return 0;
    const double k = std::ceil(5.0 / (1.0 + e));
    return static_cast<int>(std::clamp(k, 1.0, 64.0));
}

template <class F>
double call_with_complement(F& f, double t, double omt)
{
    if constexpr (std::is_invocable_v<F&, double, double>)
        return f(t, omt);
    else
        return f(t);
}

struct Piece {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

/// Kronrod pass on [a,b] of g with a tolerance relative to its own L1 norm.
template <class G>
Piece kronrod(G&& g, double a, double b, double tol, unsigned depth = quad_max_depth)
{
    Piece p;
    p.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(g, a, b, depth, tol, &p.error, &p.l1);
    p.error = std::max(p.error, 4.0 * std::numeric_limits<double>::epsilon() * p.l1);
    return p;
}

/// Integrates two pieces to a tolerance relative to their combined L1 norm.
/// A piece carrying a negligible share of the mass would otherwise be pushed
/// to full relative accuracy on its own (tiny) scale.
template <class G0, class G1>
QuadResult two_pieces(G0&& g0, double a0, double b0, G1&& g1, double a1, double b1, double tol)
{
    const Piece coarse0 = kronrod(g0, a0, b0, tol, 0);
    const Piece coarse1 = kronrod(g1, a1, b1, tol, 0);
    const double total = coarse0.l1 + coarse1.l1;
    auto piece_tol = [&](double l1) {
        if (!(l1 > 0.0))
            return 1e-2;
        return std::clamp(tol * total / l1, tol, 1e-2);
    };
    const Piece p0 = kronrod(g0, a0, b0, piece_tol(coarse0.l1));
    const Piece p1 = kronrod(g1, a1, b1, piece_tol(coarse1.l1));
    QuadResult out;
    out.value = p0.value + p1.value;
    out.error_estimate = p0.error + p1.error;
    const double l1 = p0.l1 + p1.l1;
    out.converged = std::isfinite(out.value) && out.error_estimate <= 4.0 * tol * l1;
    return out;
}

} // namespace detail

/// Integral over [a,b] with no endpoint handling.
template <class F>
QuadResult integrate_interval(F&& f, double a, double b, double tol = default_tol_1d)
{
    const detail::Piece p = detail::kronrod([&](double t) { return f(t); }, a, b, tol);
    return QuadResult{p.value, p.error, std::isfinite(p.value) && p.error <= 4.0 * tol * p.l1};
}

/// int_0^1 f(t) dt. error_estimate is conservative on smooth-after-substitution
/// integrands; converged is false when the subdivision budget ran out.
template <class F>
QuadResult integrate_1d(F&& f, double tol = default_tol_1d, EndpointExponents ends = {})
{
    if (!ends.at_zero && !ends.at_one)
        return integrate_interval([&](double t) { return detail::call_with_complement(f, t, 1.0 - t); }, 0.0,
                                  1.0, tol);

    const double k0 = detail::substitution_power(ends.at_zero);
    const double k1 = detail::substitution_power(ends.at_one);
    auto left = [&](double v) {
        if (k0 == 0.0)
            return detail::call_with_complement(f, v, 1.0 - v);
        const double vk1 = std::pow(v, k0 - 1.0);
        const double t = 0.5 * vk1 * v;
        if (t <= 0.0)
            return 0.0;
        return detail::call_with_complement(f, t, 1.0 - t) * 0.5 * k0 * vk1;
    };
    auto right = [&](double w) {
        if (k1 == 0.0)
            return detail::call_with_complement(f, w, 1.0 - w);
        const double wk1 = std::pow(w, k1 - 1.0);
        const double omt = 0.5 * wk1 * w;
        if (omt <= 0.0)
            return 0.0;
        return detail::call_with_complement(f, 1.0 - omt, omt) * 0.5 * k1 * wk1;
    };
    return detail::two_pieces(left, 0.0, k0 == 0.0 ? 0.5 : 1.0, right, k1 == 0.0 ? 0.5 : 0.0, 1.0, tol);
}

/// int_0^1 int_0^1 f(r, s) ds dr as nested 1D passes; the inner tolerance is tol/10.
template <class F>
QuadResult integrate_2d(F&& f, double tol = default_tol_2d, EndpointExponents r_ends = {},
                        EndpointExponents s_ends = {})
{
    bool inner_ok = true;
    double inner_err = 0.0;
    auto outer = integrate_1d(
        [&](double r) {
            const QuadResult in = integrate_1d([&](double s) { return f(r, s); }, tol / 10.0, s_ends);
            inner_ok = inner_ok && in.converged;
            inner_err = std::max(inner_err, in.error_estimate);
            return in.value;
        },
        tol, r_ends);
    outer.error_estimate += inner_err;
    outer.converged = outer.converged && inner_ok;
    return outer;
}

} // namespace vlambda
