#include "vlambda/moments.hpp"

#include "vlambda/errors.hpp"
#include "vlambda/power_series.hpp"

#include <cmath>

namespace vlambda {

MomentSequence::MomentSequence(std::vector<double> tau)
    : tau_(std::move(tau))
{
    if (tau_.empty())
        throw Error(ErrorCode::invalid_weight, "empty moment sequence");
    for (double v : tau_) {
        if (!std::isfinite(v))
            throw Error(ErrorCode::invalid_weight, "moment is not finite");
    }
    if (std::abs(tau_[0] - 1.0) > 1e-10)
        throw Error(ErrorCode::invalid_weight, "weight is not normalized: tau_0 = " + std::to_string(tau_[0]));
}

long MomentSequence::first_monotonicity_violation(double slack) const
{
    for (std::size_t n = 0; n < tau_.size(); ++n) {
        if (tau_[n] <= 0.0)
            return static_cast<long>(n);
        if (n + 1 < tau_.size() && tau_[n + 1] > tau_[n] + slack)
            return static_cast<long>(n);
    }
    return -1;
}

PowerSeries MomentSequence::as_series(std::size_t order) const
{
    if (order + 1 > tau_.size())
        throw Error(ErrorCode::invalid_argument, "moment sequence shorter than requested order");
    PowerSeries p(order);
    for (std::size_t n = 0; n <= order; ++n)
        p[n] = tau_[n];
    return p;
}

} // namespace vlambda
