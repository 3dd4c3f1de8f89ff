#pragma once

#include <optional>

namespace vlambda {

/// Roots of x^2 - (alpha - gamma) x + gamma with nu >= mu >= 0.
struct MuNu {
    double mu = 0.0;
    double nu = 0.0;
};

/// Throws Error(complex_mu_nu) when (alpha-gamma)^2 < 4 gamma and
/// Error(inadmissible_parameters) for negative inputs or alpha < gamma.
MuNu derive_mu_nu(double alpha, double gamma);

/// (alpha, gamma, delta) of W_beta^delta(alpha, gamma) plus beta once known.
/// mu and nu are derived on demand so that parameter sets used only by the
/// Hohlov bound (which never needs them) stay representable.
struct ClassParams {
    double alpha = 1.0;
    double gamma = 0.0;
    double delta = 1.0;
    std::optional<double> beta;

    MuNu mu_nu() const { return derive_mu_nu(alpha, gamma); }
    /// Checks alpha >= 0, gamma >= 0, delta > 0 and beta < 1 when set.
    void validate() const;
};

struct TargetParams {
    double xi = 0.0;

    void validate() const;
};

} // namespace vlambda
