#pragma once

// Truncated complex Taylor series about the origin and the differential
// functionals used by the W-classes. A series of order N stores c_0..c_N;
// every operation here is exact in the truncated algebra, so rounding is the
// only source of error.
//
// Two normalizations recur:
//   function-type  f = z + a_2 z^2 + ...   (c_0 = 0, c_1 = 1)
//   unit-type      P = 1 + b_1 z + ...     (c_0 = 1)
// A function-type series of order N pairs with unit-type series of order N-1
// (f/z, (f/z)^delta, H, ...).

#include "vlambda/acceleration.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vlambda {

using Complex = std::complex<double>;

inline constexpr std::size_t default_series_order = 256;

class PowerSeries {
public:
    /// Zero series of the given order (order >= 1).
    explicit PowerSeries(std::size_t order);
    /// Takes c_0..c_N; needs at least two entries, all finite.
    explicit PowerSeries(std::vector<Complex> coeffs);

    static PowerSeries constant(Complex value, std::size_t order);
    /// The identity function z (function-type).
    static PowerSeries identity(std::size_t order);
    /// 1 + z + z^2 + ..., the unit of the Hadamard product.
    static PowerSeries geometric(std::size_t order);

    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    const Complex& operator[](std::size_t n) const { return coeffs_[n]; }
    Complex& operator[](std::size_t n) { return coeffs_[n]; }

    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }

    PowerSeries truncated(std::size_t order) const;

    bool is_unit_type() const noexcept { return coeffs_[0] == Complex(1.0); }
    bool is_function_type() const noexcept
    {
        return coeffs_[0] == Complex(0.0) && coeffs_[1] == Complex(1.0);
    }

    PowerSeries& operator+=(const PowerSeries& rhs);
    PowerSeries& operator-=(const PowerSeries& rhs);
    PowerSeries& operator*=(Complex scale);

private:
    std::vector<Complex> coeffs_;
};

PowerSeries operator+(PowerSeries lhs, const PowerSeries& rhs);
PowerSeries operator-(PowerSeries lhs, const PowerSeries& rhs);
PowerSeries operator*(Complex scale, PowerSeries rhs);
/// Cauchy product truncated to the smaller order.
PowerSeries operator*(const PowerSeries& lhs, const PowerSeries& rhs);

/// Termwise product a_n b_n, truncated to the smaller order.
PowerSeries hadamard(const PowerSeries& a, const PowerSeries& b);

/// num / den; den must have a nonzero constant term.
PowerSeries divide(const PowerSeries& num, const PowerSeries& den);

/// z p'(z): coefficient n becomes n c_n.
PowerSeries z_derivative(const PowerSeries& p);

/// p'(z), one order lower.
PowerSeries derivative(const PowerSeries& p);

/// f(z)/z for f(0) = 0, one order lower.
PowerSeries divide_by_z(const PowerSeries& f);

/// z p(z), one order higher.
PowerSeries multiply_by_z(const PowerSeries& p);

/// Formal logarithm of a unit-type series.
PowerSeries log_series(const PowerSeries& p);

/// Formal exponential of a series with zero constant term.
PowerSeries exp_series(const PowerSeries& l);

/// p^delta = exp(delta log p) for unit-type p; the principal branch.
PowerSeries principal_power(const PowerSeries& p, double delta);

/// H of the class W^delta(alpha, gamma) computed from the defining
/// differential expression in f, f', f''. Result is unit-type of order N-1.
PowerSeries functional_H(const PowerSeries& f, double alpha, double gamma, double delta);

/// H from P = (f/z)^delta through H_n = (delta + n mu)(delta + n nu) b_n / delta^2.
PowerSeries functional_H_from_power_form(const PowerSeries& power_form, double alpha,
                                         double gamma, double delta);

/// (f/z)^delta of the extremal function: b_n = 2(1-beta) delta^2 / ((delta+n mu)(delta+n nu)).
PowerSeries extremal_power_form(double beta, double delta, double mu, double nu, std::size_t order);

/// The extremal function itself, z * (P)^(1/delta), as a function-type series of order N.
PowerSeries extremal_series(double beta, double delta, double mu, double nu, std::size_t order);

/// Given Q = (F/z)^delta, returns (F/z)^delta * (zF'/F) = (1 - 1/delta) Q + (1/delta)(zQ)'.
PowerSeries log_derivative_form(const PowerSeries& power_form, double delta);

/// Same quantity computed from a function-type series through series division.
PowerSeries log_derivative_form_of(const PowerSeries& f, double delta);

class MomentSequence;

/// Moment action on the power form: coefficient n of (f/z)^delta times tau_n.
PowerSeries transform_power_form(const PowerSeries& power_form, const MomentSequence& tau);

/// V_lambda^delta(f) as a function-type series of the same order as f.
PowerSeries apply_transform(const PowerSeries& f, const MomentSequence& tau, double delta);

struct SeriesValue {
    Complex value;
    double tail_estimate = 0.0;
    bool converged = true;
};

/// Value of p at |z| <= 1. Inside the disk a partial sum with a geometric tail
/// bound; on the circle (accelerated must be set) an Euler-transformed Abel value.
SeriesValue eval_at(const PowerSeries& p, Complex z, bool accelerated = false,
                    double tolerance = 1e-8);

/// Repeated evaluation of one series inside the disk. Precomputes suffix maxima
/// of |c_n| so each point sums only as many terms as its radius needs.
class SeriesEvaluator {
public:
    explicit SeriesEvaluator(const PowerSeries& p, double tolerance = 1e-12);

    SeriesValue operator()(Complex z) const;

private:
    std::vector<Complex> coeffs_;
    std::vector<double> suffix_max_;
    double tolerance_;
};

} // namespace vlambda
