#include "vlambda/hypergeom.hpp"

#include "vlambda/acceleration.hpp"
#include "vlambda/errors.hpp"
#include "vlambda/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vlambda {

namespace {

constexpr std::size_t direct_budget = 10'000'000;
constexpr double stop_ratio = 1e-16;
constexpr double accept_tail = 1e-10;

bool is_nonpositive_integer(double v)
{
    return v <= 0.0 && v == std::floor(v);
}

/// Number of terms of a terminating series, or 0 if it does not terminate.
std::size_t terminating_length(const std::vector<double>& upper)
{
    std::size_t len = 0;
    for (double c : upper) {
        if (is_nonpositive_integer(c)) {
            const auto n = static_cast<std::size_t>(-c) + 1;
            len = (len == 0) ? n : std::min(len, n);
        }
    }
    return len;
}

double term_ratio(const std::vector<double>& upper, const std::vector<double>& lower, double n)
{
    double r = 1.0;
    for (double c : upper)
        r *= (c + n);
    for (double d : lower)
        r /= (d + n);
    return r / (n + 1.0);
}

PfqResult sum_direct(const HypergeomSpec& s, std::size_t max_terms)
{
    PfqResult out;
    const double x = s.argument;
    const double contract = 0.5 * (1.0 + std::min(std::abs(x), 1.0));
    double term = 1.0;
    double sum = 1.0;
    double comp = 0.0; // Kahan compensation
    std::size_t n = 0;
    for (; n + 1 < max_terms; ++n) {
        const double ratio = term_ratio(s.upper, s.lower, static_cast<double>(n)) * x;
        term *= ratio;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (term == 0.0) {
            out.value = sum;
            out.terms = n + 2;
            out.tail_estimate = 0.0;
            return out;
        }
        const double next_ratio = std::abs(term_ratio(s.upper, s.lower, static_cast<double>(n + 1)) * x);
        if (std::abs(term) < stop_ratio * std::abs(sum) && next_ratio < contract) {
            out.value = sum;
            out.terms = n + 2;
            out.tail_estimate = std::abs(term) * next_ratio / (1.0 - next_ratio);
            return out;
        }
    }
    out.value = sum;
    out.terms = n + 1;
    out.tail_estimate = std::abs(term);
    out.converged = false;
    return out;
}

PfqResult sum_terminating(const HypergeomSpec& s, std::size_t len)
{
    PfqResult out;
    double term = 1.0;
    double sum = 1.0;
    for (std::size_t n = 0; n + 1 < len; ++n) {
        term *= term_ratio(s.upper, s.lower, static_cast<double>(n)) * s.argument;
        sum += term;
    }
    out.value = sum;
    out.terms = len;
    return out;
}

PfqResult sum_at_minus_one(const HypergeomSpec& s)
{
    const std::vector<double> a = pfq_coefficients(s.upper, s.lower, euler_minus_one_terms);
    const auto r = euler_sum_at_minus_one(a);
    return PfqResult{r.value, r.tail_estimate, a.size(), r.converged};
}

} // namespace

void HypergeomSpec::validate() const
{
    for (double d : lower) {
        if (!std::isfinite(d) || is_nonpositive_integer(d))
            throw Error(ErrorCode::invalid_argument, "pFq lower parameter in {0,-1,-2,...}");
    }
    for (double c : upper) {
        if (!std::isfinite(c))
            throw Error(ErrorCode::invalid_argument, "pFq upper parameter is not finite");
    }
    if (!std::isfinite(argument))
        throw Error(ErrorCode::invalid_argument, "pFq argument is not finite");
    if (terminating_length(upper) > 0)
        return;
    if (upper.size() > lower.size() + 1)
        throw Error(ErrorCode::invalid_argument, "pFq with p > q+1 diverges for x != 0");
    if (upper.size() == lower.size() + 1) {
        if (argument == 1.0)
            throw Error(ErrorCode::invalid_argument, "pFq with p = q+1 at x = 1 is not supported");
        if (std::abs(argument) > 1.0)
            throw Error(ErrorCode::invalid_argument, "pFq with p = q+1 needs |x| <= 1");
    }
}

PfqResult pfq_eval_detailed(const HypergeomSpec& spec)
{
    spec.validate();
    if (spec.argument == 0.0)
        return PfqResult{1.0, 0.0, 1, true};
    if (const std::size_t len = terminating_length(spec.upper); len > 0)
        return sum_terminating(spec, len);
    if (spec.upper.size() == spec.lower.size() + 1 && spec.argument == -1.0)
        return sum_at_minus_one(spec);
    return sum_direct(spec, direct_budget);
}

double pfq_eval(const HypergeomSpec& spec)
{
    const PfqResult r = pfq_eval_detailed(spec);
    if (!r.converged || !(r.tail_estimate <= accept_tail * std::max(1.0, std::abs(r.value)))) {
        std::ostringstream msg;
        msg << "pFq summation did not converge (tail estimate " << r.tail_estimate << ")";
        throw Error(ErrorCode::non_convergence, msg.str());
    }
    return r.value;
}

double hyp2f1(double a, double b, double c, double x)
{
    return pfq_eval(HypergeomSpec{{a, b}, {c}, x});
}

double pochhammer(double a, std::size_t n)
{
    double p = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        p *= a + static_cast<double>(k);
    return p;
}

std::vector<double> pfq_coefficients(const std::vector<double>& upper,
                                     const std::vector<double>& lower, std::size_t count)
{
    std::vector<double> a(count);
    if (count == 0)
        return a;
    a[0] = 1.0;
    for (std::size_t n = 1; n < count; ++n)
        a[n] = a[n - 1] * term_ratio(upper, lower, static_cast<double>(n - 1));
    return a;
}

double kernel_2f1_integral(double m, double x, double tol)
{
    if (!(m > 0.0))
        throw Error(ErrorCode::invalid_argument, "kernel exponent must be positive");
    if (!(x >= -1.0 && x < 1.0))
        throw Error(ErrorCode::invalid_argument, "kernel argument must lie in [-1, 1)");
    if (x == 0.0)
        return 1.0;
    const QuadResult q = integrate_1d([=](double s) { return 1.0 / (1.0 - x * std::pow(s, m)); },
                                      tol, EndpointExponents{m, std::nullopt});
    if (!q.converged)
        throw Error(ErrorCode::non_convergence, "kernel quadrature did not converge");
    return q.value;
}

double kernel_3f2_integral(double n, double m, double x, double tol)
{
    if (!(n > 0.0) || !(m > 0.0))
        throw Error(ErrorCode::invalid_argument, "kernel exponents must be positive");
    if (!(x >= -1.0 && x < 1.0))
        throw Error(ErrorCode::invalid_argument, "kernel argument must lie in [-1, 1)");
    if (x == 0.0)
        return 1.0;
    const QuadResult q = integrate_2d(
        [=](double r, double s) { return 1.0 / (1.0 - x * std::pow(r, n) * std::pow(s, m)); }, tol,
        EndpointExponents{n, std::nullopt}, EndpointExponents{m, std::nullopt});
    if (!q.converged)
        throw Error(ErrorCode::non_convergence, "kernel quadrature did not converge");
    return q.value;
}

std::pair<double, double> contiguous_reduce_3f2(double a, double b, double c, double d, double z)
{
    const double lhs = pfq_eval(HypergeomSpec{{2.0, a, b}, {c, d}, z});
    const double r1 = pfq_eval(HypergeomSpec{{1.0, a, b}, {c - 1.0, d}, z});
    const double r2 = pfq_eval(HypergeomSpec{{1.0, a, b}, {c, d}, z});
    return {lhs, (c - 1.0) * r1 - (c - 2.0) * r2};
}

std::pair<double, double> gauss_contiguous(double a, double b, double c, double z)
{
    const double lhs = b * z * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z);
    const double rhs = c * (hyp2f1(a + 1.0, b, c, z) - hyp2f1(a, b, c, z));
    return {lhs, rhs};
}

} // namespace vlambda
