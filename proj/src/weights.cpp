#include "vlambda/weights.hpp"

#include "vlambda/errors.hpp"
#include "vlambda/hypergeom.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

namespace vlambda {

namespace {

constexpr double moment_tol = 1e-11;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_nonpositive_integer(double v)
{
    return v <= 0.0 && v == std::floor(v);
}

double rgamma(double x)
{
    if (is_nonpositive_integer(x))
        return 0.0;
    return 1.0 / std::tgamma(x);
}

Hohlov as_hohlov(const CarlsonShaffer& cs) { return Hohlov{1.0, cs.b, cs.c}; }

/// 2F1 summed directly; only called with |x| <= 1/2 or a terminating series.
double series_2f1(double a, double b, double c, double x)
{
    return pfq_eval(HypergeomSpec{{a, b}, {c}, x});
}

/// The Hohlov factor 2F1(c-a, 1-a; c-a-b+1; 1-t) terminates for these parameters.
bool hohlov_terminates(const Hohlov& h)
{
    return is_nonpositive_integer(1.0 - h.a) || is_nonpositive_integer(h.c - h.a);
}

// Small-t form from the 1-x connection formula (the t^(b-1) and t^(a-1) branches).
double hohlov_small_t(double a, double b, double c, double t, double omt)
{
    const double common = std::tgamma(c) * rgamma(a) * rgamma(b) * std::pow(omt, c - a - b);
    const double first = std::tgamma(a - b) * rgamma(1.0 - b) * rgamma(c - b);
    const double second = std::tgamma(b - a) * rgamma(c - a) * rgamma(1.0 - a);
    double value = 0.0;
    if (first != 0.0)
        value += first * std::pow(t, b - 1.0) * series_2f1(c - a, 1.0 - a, 1.0 - a + b, t);
    if (second != 0.0)
        value += second * std::pow(t, a - 1.0) * series_2f1(1.0 - b, c - b, 1.0 + a - b, t);
    return common * value;
}

double hohlov_lambda(const Hohlov& h, double t, double omt)
{
    const double a = h.a;
    const double b = h.b;
    const double c = h.c;
    if (omt <= 0.5 || hohlov_terminates(h)) {
        const double prefix = std::tgamma(c) * rgamma(a) * rgamma(b) * rgamma(c - a - b + 1.0);
        return prefix * std::pow(t, b - 1.0) * std::pow(omt, c - a - b) *
               series_2f1(c - a, 1.0 - a, c - a - b + 1.0, omt);
    }
    const double gap = a - b - std::round(a - b);
    if (std::abs(gap) > 1e-3)
        return hohlov_small_t(a, b, c, t, omt);
    // a - b near an integer puts Gamma(a-b) on (or next to) a pole. Average
    // symmetric shifts of b at h, 2h, 4h and extrapolate away the even powers of h.
    const double step = 2e-3;
    auto avg = [&](double s) {
        return 0.5 * (hohlov_small_t(a, b + s, c, t, omt) + hohlov_small_t(a, b - s, c, t, omt));
    };
    const double a1 = avg(step);
    const double a2 = avg(2.0 * step);
    const double a4 = avg(4.0 * step);
    const double r1 = (4.0 * a1 - a2) / 3.0;
    const double r2 = (4.0 * a2 - a4) / 3.0;
    return (16.0 * r1 - r2) / 15.0;
}

EndpointExponents hohlov_ends(const Hohlov& h)
{
    double p0 = h.b - 1.0;
    if (!hohlov_terminates(h))
        p0 = std::min(p0, h.a - 1.0);
    return EndpointExponents{p0, h.c - h.a - h.b};
}

void validate_hohlov_weight(const Hohlov& h)
{
    if (!(h.a > 0.0 && h.b > 0.0 && h.c > 0.0) || !std::isfinite(h.a + h.b + h.c))
        throw Error(ErrorCode::invalid_weight, "Hohlov weight needs a, b, c > 0");
    if (!(h.c - h.a - h.b > -1.0))
        throw Error(ErrorCode::invalid_weight,
                    "Hohlov weight needs c - a - b > -1 for integrability at t = 1");
}

// Shortest text that reads back to the same double.
std::string fmt(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

struct WeightSpec::Cache {
    std::mutex mutex;
    std::vector<double> tau;
};

WeightSpec::WeightSpec(Variant v)
    : v_(std::move(v))
    , cache_(std::make_shared<Cache>())
{
    std::visit(overloaded{
                   [](const Bernardi& b) {
                       if (!(b.c > -1.0) || !std::isfinite(b.c))
                           throw Error(ErrorCode::invalid_weight, "Bernardi weight needs c > -1");
                   },
                   [](const Hohlov& h) { validate_hohlov_weight(h); },
                   [](const CarlsonShaffer& cs) { validate_hohlov_weight(as_hohlov(cs)); },
                   [](const Custom& c) {
                       if (!c.function)
                           throw Error(ErrorCode::invalid_weight, "custom weight has no function");
                   },
               },
               v_);
}

std::string WeightSpec::describe() const
{
    return std::visit(overloaded{
                          [](const Bernardi& b) { return "bernardi:c=" + fmt(b.c); },
                          [](const Hohlov& h) {
                              return "hohlov:a=" + fmt(h.a) + ",b=" + fmt(h.b) + ",c=" + fmt(h.c);
                          },
                          [](const CarlsonShaffer& cs) {
                              return "carlson-shaffer:b=" + fmt(cs.b) + ",c=" + fmt(cs.c);
                          },
                          [](const Custom& c) { return c.label; },
                      },
                      v_);
}

EndpointExponents WeightSpec::endpoint_exponents() const
{
    return std::visit(overloaded{
                          [](const Bernardi& b) { return EndpointExponents{b.c, std::nullopt}; },
                          [](const Hohlov& h) { return hohlov_ends(h); },
                          [](const CarlsonShaffer& cs) { return hohlov_ends(as_hohlov(cs)); },
                          [](const Custom& c) { return c.ends; },
                      },
                      v_);
}

double lambda_eval(const WeightSpec& w, double t, double omt)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw Error(ErrorCode::invalid_argument, "weight evaluated outside [0, 1]");
    return std::visit(overloaded{
                          [&](const Bernardi& b) { return (1.0 + b.c) * std::pow(t, b.c); },
                          [&](const Hohlov& h) { return hohlov_lambda(h, t, omt); },
                          [&](const CarlsonShaffer& cs) { return hohlov_lambda(as_hohlov(cs), t, omt); },
                          [&](const Custom& c) { return c.function(t); },
                      },
                      w.variant());
}

double lambda_eval(const WeightSpec& w, double t)
{
    return lambda_eval(w, t, 1.0 - t);
}

namespace {

QuadResult weighted_integral(const WeightSpec& w, std::size_t n, double tol)
{
    const double nd = static_cast<double>(n);
    auto power = [nd](double t) { return nd == 0.0 ? 1.0 : std::pow(t, nd); };
    if (const auto* custom = std::get_if<Custom>(&w.variant()); custom && !custom->breakpoints.empty()) {
        std::vector<double> nodes{0.0};
        nodes.insert(nodes.end(), custom->breakpoints.begin(), custom->breakpoints.end());
        nodes.push_back(1.0);
        QuadResult total;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            if (!(nodes[i + 1] > nodes[i]))
                continue;
            const QuadResult part = integrate_interval(
                [&](double t) { return power(t) * custom->function(t); }, nodes[i], nodes[i + 1], tol);
            total.value += part.value;
            total.error_estimate += part.error_estimate;
            total.converged = total.converged && part.converged;
        }
        return total;
    }
    return integrate_1d([&](double t, double omt) { return power(t) * lambda_eval(w, t, omt); }, tol,
                        w.endpoint_exponents());
}

} // namespace

MomentSequence WeightSpec::moments(std::size_t order) const
{
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& tau = cache_->tau;
    while (tau.size() <= order) {
        const std::size_t n = tau.size();
        if (const auto* b = std::get_if<Bernardi>(&v_)) {
            tau.push_back((1.0 + b->c) / (static_cast<double>(n) + b->c + 1.0));
            continue;
        }
        const QuadResult q = weighted_integral(*this, n, moment_tol);
        if (!q.converged || !std::isfinite(q.value))
            throw Error(ErrorCode::non_convergence,
                        "moment quadrature did not converge at n = " + std::to_string(n));
        tau.push_back(q.value);
    }
    return MomentSequence(std::vector<double>(tau.begin(), tau.begin() + static_cast<std::ptrdiff_t>(order + 1)));
}

double moment(const WeightSpec& w, std::size_t n)
{
    return w.moments(n)[n];
}

NormalizationReport normalize_check(const WeightSpec& w)
{
    NormalizationReport rep;
    const QuadResult q = weighted_integral(w, 0, default_tol_1d);
    rep.mass = q.value;
    rep.mass_error = q.error_estimate;

    constexpr int points = 10000;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        const double omt = static_cast<double>(points - 1 - i) / (points - 1);
        double v = 0.0;
        try {
            v = lambda_eval(w, t, omt);
        } catch (const Error&) {
            continue;
        }
        // Singular endpoints (t^p with p < 0) evaluate to inf or nan; they are
        // not minima of an integrable non-negative weight.
        if (!std::isfinite(v))
            continue;
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.argmin = t;
        }
    }
    rep.nonnegative = rep.min_value >= 0.0;
    return rep;
}

WeightSpec make_tabulated_weight(std::vector<double> t, std::vector<double> values, std::string label)
{
    if (t.size() != values.size() || t.size() < 2)
        throw Error(ErrorCode::invalid_weight, "custom weight table needs at least two rows");
    if (t.front() != 0.0 || t.back() != 1.0)
        throw Error(ErrorCode::invalid_weight, "custom weight table must span t = 0 to t = 1");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(values[i]))
            throw Error(ErrorCode::invalid_weight, "custom weight table has a non-finite entry");
        if (values[i] < 0.0)
            throw Error(ErrorCode::invalid_weight, "custom weight table has a negative value");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw Error(ErrorCode::invalid_weight, "custom weight table t column must increase");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        mass += 0.5 * (values[i] + values[i + 1]) * (t[i + 1] - t[i]);
    if (!(mass > 0.0))
        throw Error(ErrorCode::invalid_weight, "custom weight table has zero mass");
    const double scale = 1.0 / mass;
    for (double& v : values)
        v *= scale;

    auto nodes = std::make_shared<const std::vector<double>>(t);
    auto vals = std::make_shared<const std::vector<double>>(std::move(values));
    Custom c;
    c.function = [nodes, vals](double x) {
        const auto& tn = *nodes;
        const auto& vn = *vals;
        if (x <= 0.0)
            return vn.front();
        if (x >= 1.0)
            return vn.back();
        const auto it = std::upper_bound(tn.begin(), tn.end(), x);
        const std::size_t hi = static_cast<std::size_t>(it - tn.begin());
        const std::size_t lo = hi - 1;
        const double s = (x - tn[lo]) / (tn[hi] - tn[lo]);
        return vn[lo] + s * (vn[hi] - vn[lo]);
    };
    c.breakpoints.assign(t.begin() + 1, t.end() - 1);
    c.label = std::move(label);
    c.renormalization = scale;
    return WeightSpec(std::move(c));
}

WeightSpec load_custom_weight(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io_error, "cannot open weight file " + path);
    std::vector<double> t;
    std::vector<double> v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0.0;
        double b = 0.0;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::string extra;
        if (!(row >> a >> b) || (row >> extra))
            throw Error(ErrorCode::invalid_weight,
                        path + ":" + std::to_string(lineno) + ": expected two numeric columns");
        t.push_back(a);
        v.push_back(b);
    }
    return make_tabulated_weight(std::move(t), std::move(v), "custom:file=" + path);
}

} // namespace vlambda
