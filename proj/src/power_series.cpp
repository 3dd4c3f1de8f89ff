#include "vlambda/power_series.hpp"

#include "vlambda/class_params.hpp"
#include "vlambda/errors.hpp"
#include "vlambda/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vlambda {

namespace {

// sum_{k=lo}^{hi} a[k] * b[n-k] with real arithmetic (std::complex operator*
// goes through the NaN-aware library call otherwise).
Complex convolve_at(const Complex* a, const Complex* b, std::size_t n, std::size_t lo, std::size_t hi)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
        const double ar = a[k].real();
        const double ai = a[k].imag();
        const double br = b[n - k].real();
        const double bi = b[n - k].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

void require_finite(const std::vector<Complex>& c)
{
    for (const auto& v : c) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorCode::invalid_argument, "power series coefficient is not finite");
    }
}

void require_unit_type(const PowerSeries& p, const char* where)
{
    if (!p.is_unit_type())
        throw Error(ErrorCode::invalid_argument,
                    std::string(where) + ": series must have constant term exactly 1");
}

void require_function_type(const PowerSeries& f, const char* where)
{
    if (!f.is_function_type())
        throw Error(ErrorCode::invalid_argument,
                    std::string(where) + ": series must be normalized as z + a_2 z^2 + ...");
}

} // namespace

PowerSeries::PowerSeries(std::size_t order)
    : coeffs_(order + 1)
{
    if (order < 1)
        throw Error(ErrorCode::invalid_argument, "power series order must be at least 1");
}

PowerSeries::PowerSeries(std::vector<Complex> coeffs)
    : coeffs_(std::move(coeffs))
{
    if (coeffs_.size() < 2)
        throw Error(ErrorCode::invalid_argument, "power series needs at least two coefficients");
    require_finite(coeffs_);
}

PowerSeries PowerSeries::constant(Complex value, std::size_t order)
{
    PowerSeries p(order);
    p[0] = value;
    return p;
}

PowerSeries PowerSeries::identity(std::size_t order)
{
    PowerSeries p(order);
    p[1] = 1.0;
    return p;
}

PowerSeries PowerSeries::geometric(std::size_t order)
{
    PowerSeries p(order);
    std::fill(p.coeffs_.begin(), p.coeffs_.end(), Complex(1.0));
    return p;
}

PowerSeries PowerSeries::truncated(std::size_t order) const
{
    if (order > this->order())
        throw Error(ErrorCode::invalid_argument, "cannot truncate a series to a higher order");
    return PowerSeries(std::vector<Complex>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order + 1)));
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& rhs)
{
    coeffs_.resize(std::min(coeffs_.size(), rhs.coeffs_.size()));
    for (std::size_t n = 0; n < coeffs_.size(); ++n)
        coeffs_[n] += rhs.coeffs_[n];
    return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& rhs)
{
    coeffs_.resize(std::min(coeffs_.size(), rhs.coeffs_.size()));
    for (std::size_t n = 0; n < coeffs_.size(); ++n)
        coeffs_[n] -= rhs.coeffs_[n];
    return *this;
}

PowerSeries& PowerSeries::operator*=(Complex scale)
{
    for (auto& c : coeffs_)
        c *= scale;
    return *this;
}

PowerSeries operator+(PowerSeries lhs, const PowerSeries& rhs) { return lhs += rhs; }
PowerSeries operator-(PowerSeries lhs, const PowerSeries& rhs) { return lhs -= rhs; }
PowerSeries operator*(Complex scale, PowerSeries rhs) { return rhs *= scale; }

PowerSeries operator*(const PowerSeries& lhs, const PowerSeries& rhs)
{
    const std::size_t order = std::min(lhs.order(), rhs.order());
    PowerSeries out(order);
    const Complex* a = lhs.coeffs().data();
    const Complex* b = rhs.coeffs().data();
    for (std::size_t n = 0; n <= order; ++n)
        out[n] = convolve_at(a, b, n, 0, n);
    return out;
}

PowerSeries hadamard(const PowerSeries& a, const PowerSeries& b)
{
    const std::size_t order = std::min(a.order(), b.order());
    PowerSeries out(order);
    for (std::size_t n = 0; n <= order; ++n)
        out[n] = a[n] * b[n];
    return out;
}

PowerSeries divide(const PowerSeries& num, const PowerSeries& den)
{
    if (den[0] == Complex(0.0))
        throw Error(ErrorCode::invalid_argument, "series division by a series vanishing at 0");
    const std::size_t order = std::min(num.order(), den.order());
    PowerSeries q(order);
    const Complex inv0 = 1.0 / den[0];
    const Complex* d = den.coeffs().data();
    const Complex* qc = q.coeffs().data();
    for (std::size_t n = 0; n <= order; ++n) {
        Complex acc = num[n];
        if (n > 0)
            acc -= convolve_at(d, qc, n, 1, n);
        q[n] = acc * inv0;
    }
    return q;
}

PowerSeries z_derivative(const PowerSeries& p)
{
    PowerSeries out = p;
    for (std::size_t n = 0; n <= out.order(); ++n)
        out[n] *= static_cast<double>(n);
    return out;
}

PowerSeries derivative(const PowerSeries& p)
{
    if (p.order() < 2)
        throw Error(ErrorCode::invalid_argument, "derivative needs order >= 2");
    PowerSeries out(p.order() - 1);
    for (std::size_t n = 0; n <= out.order(); ++n)
        out[n] = static_cast<double>(n + 1) * p[n + 1];
    return out;
}

PowerSeries divide_by_z(const PowerSeries& f)
{
    if (f[0] != Complex(0.0))
        throw Error(ErrorCode::invalid_argument, "divide_by_z needs f(0) = 0");
    if (f.order() < 2)
        throw Error(ErrorCode::invalid_argument, "divide_by_z needs order >= 2");
    std::vector<Complex> c(f.coeffs().begin() + 1, f.coeffs().end());
    return PowerSeries(std::move(c));
}

PowerSeries multiply_by_z(const PowerSeries& p)
{
    std::vector<Complex> c(p.size() + 1);
    std::copy(p.coeffs().begin(), p.coeffs().end(), c.begin() + 1);
    return PowerSeries(std::move(c));
}

PowerSeries log_series(const PowerSeries& p)
{
    require_unit_type(p, "log_series");
    const std::size_t order = p.order();
    PowerSeries l(order);
    // weighted[k] = k * l_k; n l_n = n p_n - sum_{k=1}^{n-1} k l_k p_{n-k}
    std::vector<Complex> weighted(order + 1);
    const Complex* pc = p.coeffs().data();
    for (std::size_t n = 1; n <= order; ++n) {
        Complex acc = static_cast<double>(n) * p[n];
        if (n > 1)
            acc -= convolve_at(weighted.data(), pc, n, 1, n - 1);
        weighted[n] = acc;
        l[n] = acc / static_cast<double>(n);
    }
    return l;
}

PowerSeries exp_series(const PowerSeries& l)
{
    if (l[0] != Complex(0.0))
        throw Error(ErrorCode::invalid_argument, "exp_series needs a zero constant term");
    const std::size_t order = l.order();
    PowerSeries e(order);
    e[0] = 1.0;
    std::vector<Complex> weighted(order + 1);
    for (std::size_t k = 1; k <= order; ++k)
        weighted[k] = static_cast<double>(k) * l[k];
    const Complex* ec = e.coeffs().data();
    for (std::size_t n = 1; n <= order; ++n)
        e[n] = convolve_at(weighted.data(), ec, n, 1, n) / static_cast<double>(n);
    return e;
}

PowerSeries principal_power(const PowerSeries& p, double delta)
{
    require_unit_type(p, "principal_power");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw Error(ErrorCode::invalid_argument, "principal_power needs a positive exponent");
    if (delta == 1.0)
        return p;
    PowerSeries l = log_series(p);
    l *= delta;
    return exp_series(l);
}

PowerSeries functional_H(const PowerSeries& f, double alpha, double gamma, double delta)
{
    require_function_type(f, "functional_H");
    derive_mu_nu(alpha, gamma);
    if (!(delta > 0.0))
        throw Error(ErrorCode::inadmissible_parameters, "functional_H needs delta > 0");
    if (f.order() < 3)
        throw Error(ErrorCode::invalid_argument, "functional_H needs order >= 3");

    const PowerSeries g = divide_by_z(f);             // f/z
    const PowerSeries p = principal_power(g, delta);  // (f/z)^delta
    const PowerSeries fp = derivative(f);             // f'
    const PowerSeries q = divide(fp, g);              // z f'/f
    const PowerSeries zfpp = multiply_by_z(derivative(fp)); // z f''
    PowerSeries r = divide(zfpp, fp);                 // z f''/f'
    r[0] += 1.0;                                      // 1 + z f''/f'

    PowerSeries bracket = (1.0 - 1.0 / delta) * q + (1.0 / delta) * r;
    bracket *= gamma;
    bracket[0] += alpha - 3.0 * gamma;

    PowerSeries h = (1.0 - alpha + 2.0 * gamma) * p;
    h += bracket * (p * q);
    return h;
}

PowerSeries functional_H_from_power_form(const PowerSeries& power_form, double alpha,
                                         double gamma, double delta)
{
    require_unit_type(power_form, "functional_H_from_power_form");
    derive_mu_nu(alpha, gamma);
    if (!(delta > 0.0))
        throw Error(ErrorCode::inadmissible_parameters, "functional_H needs delta > 0");
    // (delta + n mu)(delta + n nu) = delta^2 + n delta (mu + nu) + n^2 mu nu
    PowerSeries h = power_form;
    const double d2 = delta * delta;
    for (std::size_t n = 1; n <= h.order(); ++n) {
        const double nn = static_cast<double>(n);
        h[n] *= (d2 + nn * delta * (alpha - gamma) + nn * nn * gamma) / d2;
    }
    return h;
}

PowerSeries extremal_power_form(double beta, double delta, double mu, double nu, std::size_t order)
{
    if (!(delta > 0.0) || mu < 0.0 || nu < 0.0)
        throw Error(ErrorCode::inadmissible_parameters, "extremal needs delta > 0 and mu, nu >= 0");
    PowerSeries p(order);
    p[0] = 1.0;
    const double d2 = delta * delta;
    for (std::size_t n = 1; n <= order; ++n) {
        const double nn = static_cast<double>(n);
        p[n] = 2.0 * (1.0 - beta) * d2 / ((delta + nn * mu) * (delta + nn * nu));
    }
    return p;
}

PowerSeries extremal_series(double beta, double delta, double mu, double nu, std::size_t order)
{
    if (order < 2)
        throw Error(ErrorCode::invalid_argument, "extremal_series needs order >= 2");
    const PowerSeries p = extremal_power_form(beta, delta, mu, nu, order - 1);
    return multiply_by_z(principal_power(p, 1.0 / delta));
}

PowerSeries log_derivative_form(const PowerSeries& power_form, double delta)
{
    PowerSeries out = power_form;
    for (std::size_t n = 0; n <= out.order(); ++n)
        out[n] *= (static_cast<double>(n) + delta) / delta;
    return out;
}

PowerSeries log_derivative_form_of(const PowerSeries& f, double delta)
{
    require_function_type(f, "log_derivative_form_of");
    const PowerSeries g = divide_by_z(f);
    return principal_power(g, delta) * divide(derivative(f), g);
}

PowerSeries transform_power_form(const PowerSeries& power_form, const MomentSequence& tau)
{
    if (tau.size() < power_form.size())
        throw Error(ErrorCode::invalid_argument,
                    "moment sequence shorter than the series it acts on");
    if (std::abs(tau[0] - 1.0) > 1e-10)
        throw Error(ErrorCode::invalid_weight, "moment sequence is not normalized (tau_0 != 1)");
    PowerSeries out = power_form;
    for (std::size_t n = 0; n <= out.order(); ++n)
        out[n] *= tau[n];
    return out;
}

PowerSeries apply_transform(const PowerSeries& f, const MomentSequence& tau, double delta)
{
    require_function_type(f, "apply_transform");
    const PowerSeries p = principal_power(divide_by_z(f), delta);
    PowerSeries q = transform_power_form(p, tau);
    q[0] = 1.0; // tau_0 is 1 only to within 1e-10
    return multiply_by_z(principal_power(q, 1.0 / delta));
}

SeriesValue eval_at(const PowerSeries& p, Complex z, bool accelerated, double tolerance)
{
    const double r = std::abs(z);
    constexpr double boundary_slack = 1e-14;
    if (r > 1.0 + boundary_slack)
        throw Error(ErrorCode::invalid_argument, "eval_at: |z| > 1 is outside the closed disk");

    if (r >= 1.0 - boundary_slack) {
        if (!accelerated)
            throw Error(ErrorCode::invalid_argument,
                        "eval_at: boundary evaluation requires acceleration");
        const auto acc = euler_transform_sum<Complex>(p.coeffs(), z);
        SeriesValue out{acc.value, acc.tail_estimate, acc.converged};
        out.converged = acc.tail_estimate <= tolerance * std::max(1.0, std::abs(acc.value));
        return out;
    }

    SeriesEvaluator eval(p, tolerance);
    return eval(z);
}

SeriesEvaluator::SeriesEvaluator(const PowerSeries& p, double tolerance)
    : coeffs_(p.coeffs().begin(), p.coeffs().end())
    , suffix_max_(p.size() + 1)
    , tolerance_(tolerance)
{
    // Beyond the truncation the coefficients are unknown; the largest modulus
    // among the last few stands in for them.
    const std::size_t n = coeffs_.size();
    const std::size_t window = std::min<std::size_t>(8, n);
    double beyond = 0.0;
    for (std::size_t k = n - window; k < n; ++k)
        beyond = std::max(beyond, std::abs(coeffs_[k]));
    suffix_max_[n] = beyond;
    for (std::size_t k = n; k-- > 0;)
        suffix_max_[k] = std::max(suffix_max_[k + 1], std::abs(coeffs_[k]));
}

SeriesValue SeriesEvaluator::operator()(Complex z) const
{
    const double r = std::abs(z);
    if (r >= 1.0)
        throw Error(ErrorCode::invalid_argument, "SeriesEvaluator works strictly inside the disk");
    const double inv_gap = 1.0 / (1.0 - r);
    const std::size_t n = coeffs_.size();

    double sre = 0.0;
    double sim = 0.0;
    double wre = 1.0;
    double wim = 0.0;
    double rpow = 1.0;
    const double zr = z.real();
    const double zi = z.imag();
    std::size_t k = 0;
    for (; k < n; ++k) {
        if ((k & 7) == 0 && suffix_max_[k] * rpow * inv_gap < 0.25 * tolerance_)
            break;
        const double cr = coeffs_[k].real();
        const double ci = coeffs_[k].imag();
        sre += cr * wre - ci * wim;
        sim += cr * wim + ci * wre;
        const double nre = wre * zr - wim * zi;
        wim = wre * zi + wim * zr;
        wre = nre;
        rpow *= r;
    }
    const double tail = suffix_max_[k] * rpow * inv_gap;
    return {Complex(sre, sim), tail, tail <= tolerance_};
}

} // namespace vlambda
