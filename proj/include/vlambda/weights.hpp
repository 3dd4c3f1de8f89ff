#pragma once

// Admissible weights lambda(t) on (0,1) and their moments.

#include "vlambda/moments.hpp"
#include "vlambda/quadrature.hpp"

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace vlambda {

/// lambda(t) = (1+c) t^c, c > -1.
struct Bernardi {
    double c = 0.0;
};

/// lambda(t) = G t^(b-1) (1-t)^(c-a-b) 2F1(c-a, 1-a; c-a-b+1; 1-t) with
/// G = Gamma(c) / (Gamma(a) Gamma(b) Gamma(c-a-b+1)). Needs a, b, c > 0 and
/// c - a - b > -1 for integrability.
struct Hohlov {
    double a = 1.0;
    double b = 1.0;
    double c = 2.0;
};

/// Hohlov with a = 1.
struct CarlsonShaffer {
    double b = 1.0;
    double c = 2.0;
};

/// A user-supplied weight. The function must already be normalized; when it
/// was built from tabulated data, renormalization records the factor applied.
struct Custom {
    std::function<double(double)> function;
    EndpointExponents ends;
    /// Interior points where the weight is not smooth (table nodes).
    std::vector<double> breakpoints;
    std::string label = "custom";
    double renormalization = 1.0;
};

class WeightSpec {
public:
    using Variant = std::variant<Bernardi, Hohlov, CarlsonShaffer, Custom>;

    /// Validates the parameter domain; throws Error(invalid_weight).
    WeightSpec(Variant v);

    const Variant& variant() const noexcept { return v_; }
    /// Short description such as "bernardi:c=0".
    std::string describe() const;

    /// Endpoint behaviour of lambda itself.
    EndpointExponents endpoint_exponents() const;

    /// tau_0..tau_order, computed once per index and shared by copies of this spec.
    MomentSequence moments(std::size_t order) const;

private:
    struct Cache;
    Variant v_;
    std::shared_ptr<Cache> cache_;
};

/// Pointwise lambda(t) for t in (0,1).
double lambda_eval(const WeightSpec& w, double t);

/// lambda at t with 1-t supplied separately (exact near t = 1).
double lambda_eval(const WeightSpec& w, double t, double one_minus_t);

/// tau_n; analytic for Bernardi, quadrature otherwise.
double moment(const WeightSpec& w, std::size_t n);

inline MomentSequence moments(const WeightSpec& w, std::size_t order) { return w.moments(order); }

struct NormalizationReport {
    double mass = 0.0;
    double mass_error = 0.0;
    double min_value = 0.0;
    double argmin = 0.0;
    bool nonnegative = true;
};

/// Quadrature mass plus the minimum over a 10^4-point interior grid.
NormalizationReport normalize_check(const WeightSpec& w);

/// Reads "t lambda" rows (whitespace or comma separated, '#' comments).
/// t must increase strictly from 0 to 1 and lambda must be >= 0. The table
/// is interpolated linearly and rescaled to unit mass.
WeightSpec load_custom_weight(const std::string& path);

/// Same as load_custom_weight on already parsed columns.
WeightSpec make_tabulated_weight(std::vector<double> t, std::vector<double> values, std::string label);

} // namespace vlambda
