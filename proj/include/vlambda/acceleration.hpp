#pragma once

// Euler transformation for power series evaluated on the boundary of the
// unit disk. The tail sum_{n>=M} a_n z^n is rewritten as
//
//     z^M * sum_k (Delta^k a)_M * z^k / (1 - z)^(k+1)
//
// with forward differences (Delta a)_n = a_{n+1} - a_n. At z = -1 the
// geometric factor is 1/2 per order, which is what makes conditionally
// convergent (and Abel-summable) alternating series usable.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace vlambda {

template <class T>
struct AcceleratedSum {
    T value{};
    double tail_estimate = 0.0;
    bool converged = false;
    std::size_t orders_used = 0;
};

struct EulerOptions {
    double tolerance = 1e-15;     ///< stop once two successive terms fall below tolerance * |sum|
    std::size_t direct_terms = 16;  ///< leading terms summed directly (van Wijngaarden split)
    std::size_t max_order = 120;
};

/// Accelerated value of sum_n coeffs[n] * z^n. Requires |z/(1-z)| < 1.
template <class T>
AcceleratedSum<T> euler_transform_sum(std::span<const T> coeffs, T z, const EulerOptions& opt = {})
{
    AcceleratedSum<T> out;
    const std::size_t n = coeffs.size();
    const std::size_t direct = std::min(opt.direct_terms, n);

    T partial{};
    T zpow = T(1);
    for (std::size_t i = 0; i < direct; ++i) {
        partial += coeffs[i] * zpow;
        zpow *= z;
    }
    if (direct == n) {
        out.value = partial;
        out.converged = false;
        out.tail_estimate = std::numeric_limits<double>::infinity();
        return out;
    }

    const T one_minus_z = T(1) - z;
    const T ratio = z / one_minus_z;
    if (std::abs(ratio) >= 1.0) {
        out.value = partial;
        out.tail_estimate = std::numeric_limits<double>::infinity();
        return out;
    }

    // Difference table over a_M, a_{M+1}, ...; diff[j] holds (Delta^k a)_{M+j}.
    std::vector<T> diff(coeffs.begin() + static_cast<std::ptrdiff_t>(direct), coeffs.end());
    const std::size_t available = diff.size();
    const std::size_t max_order = std::min(opt.max_order, available);

    double scale = 0.0;
    for (const T& v : diff)
        scale = std::max(scale, static_cast<double>(std::abs(v)));
    // rounding floor of a k-th difference, after the 2^-k damping, is about eps * max|a|
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() * scale;

    T tail{};
    T factor = zpow / one_minus_z; // z^M / (1 - z)
    double last = std::numeric_limits<double>::infinity();
    int quiet = 0;
    std::size_t k = 0;
    for (; k < max_order; ++k) {
        const T term = diff[0] * factor;
        tail += term;
        const double mag = std::abs(term);
        const double target = std::max(opt.tolerance * std::abs(partial + tail), noise);
        last = mag;
        if (mag <= target) {
            if (++quiet >= 2) {
                ++k;
                break;
            }
        } else {
            quiet = 0;
        }
        for (std::size_t j = 0; j + 1 < available - k; ++j)
            diff[j] = diff[j + 1] - diff[j];
        factor *= ratio;
    }

    out.value = partial + tail;
    out.orders_used = k;
    out.tail_estimate = last;
    out.converged = quiet >= 2;
    return out;
}

/// Abel value at z = -1 from two van Wijngaarden splits (16 and 40 direct
/// terms). The reported tail is the larger of the two Euler estimates and
/// their disagreement. Needs at least 161 coefficients for full depth.
inline AcceleratedSum<double> euler_sum_at_minus_one(std::span<const double> coeffs)
{
    EulerOptions first;
    first.direct_terms = 16;
    EulerOptions second;
    second.direct_terms = 40;
    const auto r1 = euler_transform_sum<double>(coeffs, -1.0, first);
    const auto r2 = euler_transform_sum<double>(coeffs, -1.0, second);
    AcceleratedSum<double> out = r2;
    out.tail_estimate = std::max({r1.tail_estimate, r2.tail_estimate, std::abs(r1.value - r2.value)});
    out.converged = r1.converged && r2.converged;
    return out;
}

inline constexpr std::size_t euler_minus_one_terms = 161;

} // namespace vlambda
