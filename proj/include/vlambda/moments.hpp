#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vlambda {

class PowerSeries;

/// tau_n = int_0^1 t^n lambda(t) dt for a normalized non-negative weight.
class MomentSequence {
public:
    MomentSequence() = default;
    /// Validates tau_0 = 1 within 1e-10 and finiteness; monotonicity is
    /// checked separately because quadrature noise can break it at the 1e-15 level.
    explicit MomentSequence(std::vector<double> tau);

    std::size_t size() const noexcept { return tau_.size(); }
    double operator[](std::size_t n) const { return tau_[n]; }
    std::span<const double> values() const noexcept { return tau_; }

    /// First n with tau_{n+1} > tau_n + slack (or tau_n <= 0), -1 if none.
    long first_monotonicity_violation(double slack = 0.0) const;

    /// sum_n tau_n z^n truncated at the given order.
    PowerSeries as_series(std::size_t order) const;

private:
    std::vector<double> tau_;
};

} // namespace vlambda
