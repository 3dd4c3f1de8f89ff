#include "vlambda/verify.hpp"

#include "vlambda/errors.hpp"
#include "vlambda/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace vlambda {

namespace {

constexpr double pi = std::numbers::pi;

double cross(const Complex& o, const Complex& a, const Complex& b)
{
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

/// Convex hull (monotone chain). A linear functional attains its minimum over
/// the samples at a hull vertex, so margins only need these.
std::vector<Complex> convex_hull(std::vector<Complex> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Complex& a, const Complex& b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        return pts;
    std::vector<Complex> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0)
            --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double min_rotated(const std::vector<Complex>& hull, double beta, double phi)
{
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& w : hull)
        m = std::min(m, c * (w.real() - beta) - s * w.imag());
    return m;
}

double wrap_angle(double phi)
{
    while (phi <= -pi)
        phi += 2.0 * pi;
    while (phi > pi)
        phi -= 2.0 * pi;
    return phi;
}

std::vector<double> real_coefficients(const PowerSeries& p, std::size_t count)
{
    const std::size_t n = std::min(count, p.size());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = p[i].real();
    return out;
}

constexpr std::size_t sharpness_order = 256;

} // namespace

MembershipGrid MembershipGrid::standard()
{
    MembershipGrid g;
    constexpr int steps = 20;
    for (int i = 0; i < steps; ++i)
        g.radii.push_back(0.1 + (0.995 - 0.1) * i / (steps - 1));
    return g;
}

std::string MembershipGrid::describe() const
{
    std::ostringstream s;
    s << "r in [" << (radii.empty() ? 0.0 : radii.front()) << ", " << (radii.empty() ? 0.0 : radii.back())
      << "] (" << radii.size() << " radii) x " << theta_points << " angles x " << phi_points
      << " rotations (approximate)";
    return s.str();
}

SampledFunctional::SampledFunctional(const PowerSeries& h, const MembershipGrid& grid)
    : phi_points_(grid.phi_points)
    , grid_(grid.describe())
{
    if (grid.theta_points == 0 || grid.phi_points == 0 || grid.radii.empty())
        throw Error(ErrorCode::invalid_argument, "membership grid is empty");
    const SeriesEvaluator eval(h, grid.eval_tolerance);
    samples_.reserve(grid.radii.size() * grid.theta_points + 1);
    samples_.push_back(h[0]);
    for (double r : grid.radii) {
        if (!(r > 0.0 && r < 1.0))
            throw Error(ErrorCode::invalid_argument, "membership radii must lie in (0, 1)");
        for (std::size_t j = 0; j < grid.theta_points; ++j) {
            const double theta = -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(grid.theta_points);
            const SeriesValue v = eval(std::polar(r, theta));
            if (!v.converged) {
                ++excluded_;
                continue;
            }
            samples_.push_back(v.value);
        }
    }
    hull_ = convex_hull(samples_);
}

MembershipReport SampledFunctional::margin(double beta) const
{
    MembershipReport rep;
    rep.grid = grid_;
    rep.evaluated_points = samples_.size() - 1;
    rep.excluded_points = excluded_;

    const double step = 2.0 * pi / static_cast<double>(phi_points_);
    double best = -std::numeric_limits<double>::infinity();
    double best_phi = 0.0;
    for (std::size_t j = 0; j < phi_points_; ++j) {
        const double phi = -pi + step * static_cast<double>(j + 1);
        const double m = min_rotated(hull_, beta, phi);
        if (m > best) {
            best = m;
            best_phi = phi;
        }
    }
    // Local refinement of the existential rotation around the best grid angle.
    double lo = best_phi - step;
    double hi = best_phi + step;
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (min_rotated(hull_, beta, m1) < min_rotated(hull_, beta, m2))
            lo = m1;
        else
            hi = m2;
    }
    const double refined_phi = 0.5 * (lo + hi);
    const double refined = min_rotated(hull_, beta, refined_phi);
    if (refined > best) {
        best = refined;
        best_phi = refined_phi;
    }
    rep.margin = best;
    rep.best_phi = wrap_angle(best_phi);
    rep.is_member = best > 0.0;
    return rep;
}

MembershipReport membership_test(const PowerSeries& f, const ClassParams& p, const MembershipGrid& grid)
{
    p.validate();
    if (!p.beta)
        throw Error(ErrorCode::invalid_argument, "membership_test needs the class level beta");
    const PowerSeries h = functional_H(f, p.alpha, p.gamma, p.delta);
    return SampledFunctional(h, grid).margin(*p.beta);
}

MembershipReport membership_test_functional(const PowerSeries& h, double beta, const MembershipGrid& grid)
{
    return SampledFunctional(h, grid).margin(beta);
}

PowerSeries thm1_transformed_extremal_functional(const ClassParams& source, const MomentSequence& tau,
                                                 std::size_t order)
{
    source.validate();
    if (!source.beta)
        throw Error(ErrorCode::invalid_argument, "extremal function needs beta");
    const MuNu mn = source.mu_nu();
    const PowerSeries p = extremal_power_form(*source.beta, source.delta, mn.mu, mn.nu, order);
    PowerSeries q = transform_power_form(p, tau);
    q[0] = 1.0;
    return functional_H_from_power_form(q, 1.0, 0.0, source.delta);
}

PowerSeries thm2_transformed_extremal_functional(const ClassParams& source, const MomentSequence& tau,
                                                 std::size_t order)
{
    source.validate();
    if (!source.beta)
        throw Error(ErrorCode::invalid_argument, "extremal function needs beta");
    const MuNu mn = source.mu_nu();
    const PowerSeries p = extremal_power_form(*source.beta, source.delta, mn.mu, mn.nu, order);
    PowerSeries q = transform_power_form(p, tau);
    q[0] = 1.0;
    return functional_H_from_power_form(q, source.alpha, source.gamma, source.delta);
}

IdentityReport transform_identity_check(const PowerSeries& f, const WeightSpec& w, double delta)
{
    const MomentSequence tau = w.moments(f.order());
    const PowerSeries big_f = apply_transform(f, tau, delta);
    const PowerSeries lhs = log_derivative_form_of(big_f, delta);
    const PowerSeries rhs0 = log_derivative_form_of(f, delta);

    double scale = 0.0;
    for (std::size_t n = 0; n <= rhs0.order(); ++n)
        scale = std::max(scale, std::abs(rhs0[n] * tau[n]));
    IdentityReport rep;
    for (std::size_t n = 0; n <= lhs.order(); ++n) {
        const double dev = std::abs(lhs[n] - tau[n] * rhs0[n]) / scale;
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.worst_index = n;
        }
    }
    return rep;
}

SharpnessReport sharpness_thm1(const ClassParams& p, const WeightSpec& w, const TargetParams& t, double beta)
{
    t.validate();
    ClassParams src = p;
    src.beta = beta;
    const MomentSequence tau = w.moments(sharpness_order);
    const PowerSeries h = thm1_transformed_extremal_functional(src, tau, sharpness_order);
    const auto coeffs = real_coefficients(h, h.size());
    const auto sum = euler_sum_at_minus_one(coeffs);

    SharpnessReport rep;
    rep.target = t.xi;
    rep.achieved = sum.value;
    rep.tail_estimate = sum.tail_estimate;
    rep.beta = beta;
    rep.pass = std::abs(rep.achieved - rep.target) <= std::max(1e-4, 10.0 * rep.tail_estimate);
    return rep;
}

SharpnessReport sharpness_thm1(const ClassParams& p, const WeightSpec& w, const TargetParams& t)
{
    return sharpness_thm1(p, w, t, beta_thm1(p, w, t).beta);
}

SharpnessReport sharpness_thm2(const WeightSpec& w, const TargetParams& t, double beta)
{
    t.validate();
    const MomentSequence tau = w.moments(sharpness_order);
    // H_0 = 1 + 2(1-beta) sum tau_n z^n; the class parameters cancel.
    std::vector<double> coeffs(sharpness_order + 1);
    coeffs[0] = 1.0;
    for (std::size_t n = 1; n <= sharpness_order; ++n)
        coeffs[n] = 2.0 * (1.0 - beta) * tau[n];
    const auto sum = euler_sum_at_minus_one(coeffs);

    SharpnessReport rep;
    rep.target = t.xi;
    rep.achieved = sum.value;
    rep.tail_estimate = sum.tail_estimate;
    rep.beta = beta;
    rep.pass = std::abs(rep.achieved - rep.target) <= std::max(1e-4, 10.0 * rep.tail_estimate);
    return rep;
}

SharpnessReport sharpness_thm2(const WeightSpec& w, const TargetParams& t)
{
    return sharpness_thm2(w, t, beta_thm2(w, t).beta);
}

PowerSeries hohlov_n3_series(const HohlovParams& h, const ClassParams& p, std::size_t order)
{
    const HohlovWeights w = hohlov_weights(h, p);
    const auto f0 = pfq_coefficients({h.a, h.b}, {h.c}, order + 1);
    const auto f1 = pfq_coefficients({h.a + 1.0, h.b}, {h.c}, order + 1);
    const auto f2 = pfq_coefficients({h.a + 2.0, h.b}, {h.c}, order + 1);
    PowerSeries n3(order);
    for (std::size_t n = 0; n <= order; ++n)
        n3[n] = w.w0 * f0[n] + w.w1 * f1[n] + w.w2 * f2[n];
    return n3;
}

HohlovKernelReport hohlov_kernel_check(const HohlovParams& h, const ClassParams& p,
                                       const MembershipGrid& grid, std::size_t order)
{
    HohlovKernelReport rep;
    rep.n3_at_minus_one = beta2_hohlov(h, p);
    const PowerSeries n3 = hohlov_n3_series(h, p, order);
    rep.n3_at_zero = n3[0].real();
    rep.n3_series_at_minus_one = euler_sum_at_minus_one(real_coefficients(n3, euler_minus_one_terms)).value;
    rep.beta = combine_duality(h.beta1, rep.n3_at_minus_one);
    rep.beta_check = 1.0 - 2.0 * (1.0 - h.beta1) * (1.0 - rep.n3_at_minus_one);

    const SampledFunctional sampled(n3, grid);
    rep.excluded_points = grid.radii.size() * grid.theta_points + 1 - sampled.samples().size();
    rep.evaluated_points = sampled.samples().size() - 1;
    rep.min_re_n3 = std::numeric_limits<double>::infinity();
    for (const auto& v : sampled.samples()) {
        if (v.real() < rep.min_re_n3) {
            rep.min_re_n3 = v.real();
            rep.value_at_min = v;
        }
    }
    rep.pass = rep.excluded_points == 0 && rep.min_re_n3 > rep.n3_at_minus_one - 1e-8 &&
               std::abs(rep.n3_series_at_minus_one - rep.n3_at_minus_one) <= 1e-8;
    return rep;
}

} // namespace vlambda
