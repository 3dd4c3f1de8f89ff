#include "vlambda/bounds.hpp"

#include "vlambda/errors.hpp"
#include "vlambda/hypergeom.hpp"
#include "vlambda/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vlambda {

namespace {

void require(bool ok, ErrorCode code, const std::string& msg)
{
    if (!ok)
        throw Error(code, msg);
}

std::string num(double v)
{
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

double beta_from_one_minus_I(double one_minus_I, double xi)
{
    require(one_minus_I > 0.0, ErrorCode::degenerate_bound,
            "bracket integral I >= 1, the bound denominator is not positive (1 - I = " +
                num(one_minus_I) + ")");
    return 1.0 - 0.5 * (1.0 - xi) / one_minus_I;
}

struct Bracket {
    double value = 0.0;
    double error = 0.0;
};

/// I = int lambda(t) [ (1/nu) K2(mu/delta, -t) + (1 - 1/nu) K3(nu/delta, mu/delta, -t) ] dt
/// (gamma > 0), or with 1/(alpha(1+t)) and K2(alpha/delta, -t) (gamma = 0).
Bracket thm1_bracket(double mu, double nu, double delta, bool gamma_zero, double alpha,
                     const WeightSpec& w, double tol)
{
    const double inner_tol = tol / 10.0;
    double inner_err = 0.0;
    bool inner_ok = true;

    auto k2 = [&](double m, double x) {
        const QuadResult q = integrate_1d([=](double s) { return 1.0 / (1.0 - x * std::pow(s, m)); },
                                          inner_tol, EndpointExponents{m, std::nullopt});
        inner_ok = inner_ok && q.converged;
        inner_err = std::max(inner_err, q.error_estimate);
        return q.value;
    };
    auto k3 = [&](double n, double m, double x) {
        const QuadResult q = integrate_2d(
            [=](double r, double s) { return 1.0 / (1.0 - x * std::pow(r, n) * std::pow(s, m)); },
            inner_tol, EndpointExponents{n, std::nullopt}, EndpointExponents{m, std::nullopt});
        inner_ok = inner_ok && q.converged;
        inner_err = std::max(inner_err, q.error_estimate);
        return q.value;
    };

    std::function<double(double)> bracket;
    if (gamma_zero) {
        const double c2 = 1.0 - 1.0 / alpha;
        bracket = [&, c2](double t) {
            double v = 1.0 / (alpha * (1.0 + t));
            if (c2 != 0.0)
                v += c2 * k2(alpha / delta, -t);
            return v;
        };
    } else {
        const double c2 = 1.0 - 1.0 / nu;
        bracket = [&, c2](double t) {
            double v = k2(mu / delta, -t) / nu;
            if (c2 != 0.0)
                v += c2 * k3(nu / delta, mu / delta, -t);
            return v;
        };
    }

    const QuadResult outer = integrate_1d(
        [&](double t, double omt) { return lambda_eval(w, t, omt) * bracket(t); }, tol,
        w.endpoint_exponents());
    if (!outer.converged || !inner_ok)
        throw Error(ErrorCode::non_convergence, "Theorem 1 bracket quadrature did not converge");
    // The weight has unit mass, so inner errors enter at most once more.
    return {outer.value, outer.error_estimate + 2.0 * inner_err};
}

} // namespace

MuNu derive_mu_nu(double alpha, double gamma)
{
    require(std::isfinite(alpha) && std::isfinite(gamma), ErrorCode::invalid_argument,
            "alpha and gamma must be finite");
    require(alpha >= 0.0 && gamma >= 0.0, ErrorCode::inadmissible_parameters,
            "alpha and gamma must be non-negative");
    const double s = alpha - gamma;
    require(s >= 0.0, ErrorCode::inadmissible_parameters, "mu + nu = alpha - gamma must be non-negative");
    if (gamma == 0.0)
        return {0.0, s};
    double disc = s * s - 4.0 * gamma;
    if (disc < 0.0) {
        // Rounding in alpha = gamma + 2 sqrt(gamma) style inputs lands just below 0.
        if (disc >= -1e-12 * std::max(1.0, s * s))
            disc = 0.0;
        else
            throw Error(ErrorCode::complex_mu_nu,
                        "complex mu,nu: (alpha - gamma)^2 < 4 gamma for alpha = " + num(alpha) +
                            ", gamma = " + num(gamma));
    }
    const double nu = 0.5 * (s + std::sqrt(disc));
    return {gamma / nu, nu};
}

void ClassParams::validate() const
{
    require(std::isfinite(alpha) && std::isfinite(gamma) && std::isfinite(delta),
            ErrorCode::invalid_argument, "class parameters must be finite");
    require(alpha >= 0.0, ErrorCode::inadmissible_parameters, "alpha must be >= 0");
    require(gamma >= 0.0, ErrorCode::inadmissible_parameters, "gamma must be >= 0");
    require(delta > 0.0, ErrorCode::inadmissible_parameters, "delta must be > 0");
    if (beta)
        require(*beta < 1.0, ErrorCode::inadmissible_parameters, "beta must be < 1");
}

void TargetParams::validate() const
{
    require(std::isfinite(xi) && xi < 1.0, ErrorCode::inadmissible_parameters, "xi must be < 1");
}

double BoundResult::diagnostic(const std::string& name) const
{
    for (const auto& [k, v] : diagnostics)
        if (k == name)
            return v;
    return std::numeric_limits<double>::quiet_NaN();
}

BoundResult beta_thm1(const ClassParams& p, const WeightSpec& w, const TargetParams& t,
                      const Thm1Options& opt)
{
    p.validate();
    t.validate();
    const MuNu mn = p.mu_nu();
    const bool gamma_zero = p.gamma == 0.0;
    if (gamma_zero)
        require(p.alpha > 0.0, ErrorCode::inadmissible_parameters, "gamma = 0 branch needs alpha > 0");

    const Bracket br = thm1_bracket(mn.mu, mn.nu, p.delta, gamma_zero, p.alpha, w, opt.tolerance);
    const double one_minus_I = 1.0 - br.value;

    BoundResult out;
    out.method = "quadrature";
    out.beta = beta_from_one_minus_I(one_minus_I, t.xi);
    out.error_estimate = 0.5 * (1.0 - t.xi) * br.error / (one_minus_I * one_minus_I);
    out.diagnostics = {{"I", br.value}, {"I_error", br.error}, {"mu", mn.mu}, {"nu", mn.nu}};

    if (!gamma_zero && opt.swapped_diagnostic) {
        double swapped = out.beta;
        if (mn.mu != mn.nu) {
            const Bracket sw = thm1_bracket(mn.nu, mn.mu, p.delta, false, p.alpha, w, opt.tolerance);
            swapped = 1.0 - sw.value > 0.0 ? beta_from_one_minus_I(1.0 - sw.value, t.xi)
                                            : std::numeric_limits<double>::quiet_NaN();
        }
        const double diff = std::abs(swapped - out.beta);
        out.diagnostics.emplace_back("beta_swapped", swapped);
        out.diagnostics.emplace_back("swap_discrepancy", diff);
        out.diagnostics.emplace_back("swap_flag", diff > 1e-8 ? 1.0 : 0.0);
    }
    return out;
}

BoundResult beta_thm1_bernardi_closed(const ClassParams& p, double c, const TargetParams& t)
{
    p.validate();
    t.validate();
    require(c > -1.0, ErrorCode::invalid_weight, "Bernardi weight needs c > -1");
    const MuNu mn = p.mu_nu();
    const double d = p.delta;

    double bracket = 0.0;
    double prefactor = 0.0;
    if (p.gamma == 0.0) {
        require(p.alpha > 0.0, ErrorCode::inadmissible_parameters, "gamma = 0 branch needs alpha > 0");
        const double a = p.alpha;
        const double f21 = pfq_eval({{1.0, 2.0 + c}, {3.0 + c}, -1.0});
        const double f32 = pfq_eval({{1.0, 2.0 + c, 1.0 + d / a}, {3.0 + c, 2.0 + d / a}, -1.0});
        bracket = f21 / a + d / (d + a) * (1.0 - 1.0 / a) * f32;
        prefactor = (2.0 + c) / (1.0 + c);
    } else {
        const double mu = mn.mu;
        const double nu = mn.nu;
        const double f32 = pfq_eval({{1.0, 2.0 + c, 1.0 + d / mu}, {3.0 + c, 2.0 + d / mu}, -1.0});
        const double f43 = pfq_eval(
            {{1.0, 2.0 + c, 1.0 + d / mu, 1.0 + d / nu}, {3.0 + c, 2.0 + d / mu, 2.0 + d / nu}, -1.0});
        bracket = f32 / nu + d / (d + nu) * (1.0 - 1.0 / nu) * f43;
        prefactor = (2.0 + c) * (d + mu) / (d * (1.0 + c));
    }
    require(bracket > 0.0, ErrorCode::degenerate_bound,
            "hypergeometric bracket is not positive, the bound is degenerate");

    BoundResult out;
    out.method = "closed-form";
    out.beta = 1.0 - 0.5 * (1.0 - t.xi) * prefactor / bracket;
    out.error_estimate = 1e-10 * std::abs(1.0 - out.beta);
    out.diagnostics = {{"I", 1.0 - bracket / prefactor}, {"mu", mn.mu}, {"nu", mn.nu}};
    return out;
}

BoundResult beta_thm2(const WeightSpec& w, const TargetParams& t, double tol)
{
    t.validate();
    const double k = (1.0 + t.xi) / (1.0 - t.xi);
    const QuadResult q = integrate_1d(
        [&](double s, double oms) { return lambda_eval(w, s, oms) * (1.0 - k * s) / (1.0 + s); }, tol,
        w.endpoint_exponents());
    if (!q.converged)
        throw Error(ErrorCode::non_convergence, "Theorem 2 quadrature did not converge");
    const double r = -q.value;
    require(std::abs(1.0 + r) > 1e-14, ErrorCode::degenerate_bound,
            "r = -1 makes beta/(1-beta) = r singular");

    BoundResult out;
    out.method = "quadrature";
    out.beta = r / (1.0 + r);
    out.error_estimate = q.error_estimate / ((1.0 + r) * (1.0 + r));
    out.diagnostics = {{"r", r}, {"k", k}};
    return out;
}

BoundResult beta_thm2_bernardi_closed(double c, const TargetParams& t)
{
    t.validate();
    require(c > -1.0, ErrorCode::invalid_weight, "Bernardi weight needs c > -1");
    const double f = pfq_eval({{1.0, 2.0 + c}, {3.0 + c}, -1.0});
    const double denom = 2.0 * (1.0 + c) * f;
    BoundResult out;
    out.method = "closed-form";
    out.beta = (denom - (2.0 + c) * (1.0 - t.xi)) / denom;
    out.error_estimate = 1e-10 * std::abs(1.0 - out.beta);
    out.diagnostics = {{"2F1(1,2+c;3+c;-1)", f}};
    return out;
}

HohlovWeights hohlov_weights(const HohlovParams& h, const ClassParams& p)
{
    const double ad = h.a / p.delta;
    HohlovWeights w;
    w.w1 = ad * (p.alpha - p.gamma * (1.0 + (2.0 * h.a + 1.0) / p.delta));
    w.w2 = h.a * (h.a + 1.0) * p.gamma / (p.delta * p.delta);
    w.w0 = 1.0 - ad * (p.alpha - p.gamma * (1.0 + ad));
    return w;
}

double beta2_hohlov(const HohlovParams& h, const ClassParams& p)
{
    p.validate();
    const HohlovWeights w = hohlov_weights(h, p);
    double beta2 = w.w0 * hyp2f1(h.a, h.b, h.c, -1.0);
    if (w.w1 != 0.0)
        beta2 += w.w1 * hyp2f1(h.a + 1.0, h.b, h.c, -1.0);
    if (w.w2 != 0.0)
        beta2 += w.w2 * hyp2f1(h.a + 2.0, h.b, h.c, -1.0);
    return beta2;
}

double beta2_carlson_shaffer(double b, double c, const ClassParams& p)
{
    p.validate();
    const double d = p.delta;
    const double al = p.alpha;
    const double g = p.gamma;
    return (1.0 - (al - g * (1.0 + 1.0 / d)) / d) * hyp2f1(1.0, b, c, -1.0) +
           (al - g * (1.0 + 3.0 / d)) / d * hyp2f1(2.0, b, c, -1.0) +
           2.0 * g / (d * d) * hyp2f1(3.0, b, c, -1.0);
}

double hohlov_e3(const HohlovParams& h, const ClassParams& p, double n)
{
    const double a = h.a;
    const double al = p.alpha;
    const double g = p.gamma;
    const double d = p.delta;
    const double cab = h.c - a - h.b;
    const double D = d * d - a * al * d + a * g * d + a * a * g;
    const double E = al * d - g * (d + 2.0 * a + 1.0);
    const double cam1 = h.c - a - 1.0;
    const double num_ = n * n * D + n * (3.0 * D - a * E * cam1) + 2.0 * D -
                        a * cam1 * (2.0 * E - g * (a + 1.0) * (h.c - a - 2.0));
    return num_ / (2.0 * d * d * cab * (cab - 1.0));
}

HohlovValidation validate_hohlov(const HohlovParams& h, const ClassParams& p)
{
    HohlovValidation rep;
    auto fail = [&](const std::string& why) {
        if (rep.valid) {
            rep.valid = false;
            rep.first_violation = why;
        }
    };
    const double a = h.a;
    const double b = h.b;
    const double c = h.c;
    const double al = p.alpha;
    const double g = p.gamma;
    const double d = p.delta;

    if (!(d > 0.0))
        fail("delta > 0 violated");
    if (!(h.beta1 < 1.0))
        fail("beta1 < 1 violated");
    if (!(0.0 < 1.0 + b && 1.0 + b < c - a && c - a < 2.0))
        fail("0 < 1+b < c-a < 2 violated (1+b = " + num(1.0 + b) + ", c-a = " + num(c - a) + ")");
    const double rhs = g * (1.0 + (2.0 * a + 1.0) / d);
    if (!(g >= 0.0 && al > rhs))
        fail("alpha > gamma(1 + (2a+1)/delta) >= 0 violated (alpha = " + num(al) +
             ", gamma(1 + (2a+1)/delta) = " + num(rhs) + ")");
    double a_cap = 1.0;
    if (al - g > 0.0)
        a_cap = std::min(1.0, d / (2.0 * (al - g)));
    if (!(a > 0.0 && a <= a_cap))
        fail("0 < a <= min{1, delta/(2(alpha-gamma))} violated (a = " + num(a) + ", cap = " + num(a_cap) + ")");

    const double cab = c - a - b;
    if (!rep.valid || !(cab > 1.0)) {
        if (rep.valid)
            fail("c - a - b > 1 needed for the N_4 expansion");
        return rep;
    }

    rep.e1 = g / (d * d);
    const double E = al * d - g * (d + 2.0 * a + 1.0);
    rep.e2 = (E - g * (a + 1.0) * (c - a - 2.0)) / (d * d * (cab - 1.0));
    if (rep.e1 < 0.0)
        fail("e1 < 0");
    if (rep.e2 < 0.0)
        fail("e2 < 0 (e2 = " + num(rep.e2) + ")");

    rep.min_e3 = std::numeric_limits<double>::infinity();
    for (long n = 0; n <= 200; ++n) {
        const double e3 = hohlov_e3(h, p, static_cast<double>(n));
        if (e3 < rep.min_e3) {
            rep.min_e3 = e3;
            rep.min_e3_index = n;
        }
    }
    if (rep.min_e3 < 0.0)
        fail("e3(n) < 0 at n = " + std::to_string(rep.min_e3_index) + " (e3 = " + num(rep.min_e3) + ")");

    // N_4(t) = e1 + e2 x + sum_n e3(n) (c-a)_n (1-a)_n / ((c-a-b)_{n+1} (3)_n) x^(n+2), x = 1 - t.
    rep.min_n4 = std::numeric_limits<double>::infinity();
    constexpr int points = 1000;
    for (int i = 0; i < points; ++i) {
        const double t = (i + 0.5) / points;
        const double x = 1.0 - t;
        double coef = 1.0 / cab; // n = 0 ratio of Pochhammers
        double xp = x * x;
        double sum = rep.e1 + rep.e2 * x;
        for (long n = 0; n < 2'000'000; ++n) {
            const double term = hohlov_e3(h, p, static_cast<double>(n)) * coef * xp;
            sum += term;
            if (coef == 0.0 || (n > 8 && std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))))
                break;
            const double nd = static_cast<double>(n);
            coef *= (c - a + nd) * (1.0 - a + nd) / ((cab + 1.0 + nd) * (3.0 + nd));
            xp *= x;
        }
        if (sum < rep.min_n4) {
            rep.min_n4 = sum;
            rep.min_n4_t = t;
        }
    }
    if (rep.min_n4 < 0.0)
        fail("N_4 expansion negative at t = " + num(rep.min_n4_t));
    return rep;
}

double combine_duality(double beta1, double beta2)
{
    require(beta1 < 1.0 && beta2 < 1.0, ErrorCode::invalid_argument,
            "duality combiner needs beta1 < 1 and beta2 < 1");
    return 1.0 - 2.0 * (1.0 - beta1) * (1.0 - beta2);
}

BoundResult beta_thm3(const HohlovParams& h, const ClassParams& p)
{
    const HohlovValidation v = validate_hohlov(h, p);
    require(v.valid, ErrorCode::inadmissible_parameters, "Hohlov hypotheses: " + v.first_violation);
    const HohlovWeights w = hohlov_weights(h, p);
    const double beta2 = beta2_hohlov(h, p);
    BoundResult out;
    out.method = "closed-form";
    out.beta = combine_duality(h.beta1, beta2);
    out.error_estimate = 1e-10 * std::abs(1.0 - out.beta);
    out.diagnostics = {{"beta2", beta2}, {"w0", w.w0}, {"w1", w.w1}, {"w2", w.w2},
                       {"e2", v.e2},     {"min_e3", v.min_e3}, {"min_n4", v.min_n4}};
    return out;
}

} // namespace vlambda
