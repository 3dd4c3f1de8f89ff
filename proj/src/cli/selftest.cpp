#include "selftest.hpp"

#include "vlambda/errors.hpp"
#include "vlambda/hypergeom.hpp"
#include "vlambda/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace vlambda::cli {

namespace {

constexpr double ln2 = std::numbers::ln2;
constexpr double pi = std::numbers::pi;

struct Golden {
    std::string group;
    std::string name;
    std::function<double()> compute;
    double expected;
    double tolerance;
};

double max_deviation(const PowerSeries& a, const PowerSeries& b, std::size_t upto)
{
    double d = 0.0;
    for (std::size_t n = 0; n <= upto; ++n)
        d = std::max(d, std::abs(a[n] - b[n]));
    return d;
}

PowerSeries poly(std::vector<Complex> c, std::size_t order)
{
    c.resize(order + 1, Complex(0.0));
    return PowerSeries(std::move(c));
}

double flag(bool b)
{
    return b ? 1.0 : 0.0;
}

std::vector<Golden> goldens(const SelftestOptions& opt)
{
    const WeightSpec bern0(Bernardi{0.0});
    const WeightSpec bern1(Bernardi{1.0});
    const WeightSpec bern2(Bernardi{2.0});
    const WeightSpec hoh112(Hohlov{1.0, 1.0, 2.0});
    const HohlovParams example{1.0, 0.5, 2.7, 0.0};
    const ClassParams example_class{0.5, 0.0, 1.0};
    const double beta_a = 1.0 - 0.5 / (1.0 - ln2);
    const double beta_b = 1.0 - 0.5 / (1.0 - pi * pi / 12.0);
    const double beta_c1 = (4.0 * ln2 - 3.0) / (4.0 * ln2 - 2.0);
    const double xi_zero = 2.0 * ln2 - 1.0;

    std::vector<Golden> g;
    auto add = [&](std::string group, std::string name, std::function<double()> f, double expected, double tol) {
        g.push_back({std::move(group), std::move(name), std::move(f), expected, tol});
    };

    // series
    add("series", "hadamard(1+2z,1+3z)[1]", [] {
        return hadamard(poly({1, 2}, 4), poly({1, 3}, 4))[1].real();
    }, 6.0, 0.0);
    add("series", "hadamard(f, geometric) == f", [] {
        PowerSeries f = PowerSeries::identity(32);
        for (std::size_t n = 2; n <= 32; ++n)
            f[n] = Complex(1.0 / static_cast<double>(n * n), 0.5 / static_cast<double>(n));
        return max_deviation(hadamard(f, PowerSeries::geometric(32)), f, 32);
    }, 0.0, 0.0);
    add("series", "hadamard(2^-n, 3^-n)[7]", [] {
        PowerSeries a(16), b(16);
        for (std::size_t n = 0; n <= 16; ++n) {
            a[n] = std::pow(0.5, static_cast<double>(n));
            b[n] = std::pow(1.0 / 3.0, static_cast<double>(n));
        }
        return hadamard(a, b)[7].real();
    }, std::pow(1.0 / 6.0, 7.0), 1e-15);
    add("series", "principal_power(1+z, 2)[2]", [] { return principal_power(poly({1, 1}, 8), 2.0)[2].real(); }, 1.0,
        1e-14);
    add("series", "principal_power(principal_power(1+z,1/2),2) round trip", [] {
        const PowerSeries p = poly({1, 1}, 64);
        return max_deviation(principal_power(principal_power(p, 0.5), 2.0), p, 64);
    }, 0.0, 1e-12);
    add("series", "functional_H(z) == 1", [] {
        return max_deviation(functional_H(PowerSeries::identity(32), 2.0, 0.5, 1.5), PowerSeries::constant(1.0, 31), 31);
    }, 0.0, 1e-14);
    add("series", "functional_H(z+0.1z^2; 1,0,1)[1]", [] {
        return functional_H(poly({0, 1, 0.1}, 16), 1.0, 0.0, 1.0)[1].real();
    }, 0.2, 1e-14);
    add("series", "functional_H(extremal(0.3; 3,1,1.5))[n] == 1.4", [] {
        const MuNu mn = derive_mu_nu(3.0, 1.0);
        const PowerSeries h = functional_H(extremal_series(0.3, 1.5, mn.mu, mn.nu, 64), 3.0, 1.0, 1.5);
        double d = 0.0;
        for (std::size_t n = 1; n <= h.order(); ++n)
            d = std::max(d, std::abs(h[n] - Complex(1.4)));
        return d;
    }, 0.0, 1e-10);
    add("series", "extremal power form b_5 (delta=1, mu=0, nu=1, beta=0)", [] {
        return extremal_power_form(0.0, 1.0, 0.0, 1.0, 16)[5].real();
    }, 2.0 / 6.0, 1e-15);
    add("series", "apply_transform(z+z^2, Bernardi c=0)[2]", [bern0, opt] {
        PowerSeries f = apply_transform(poly({0, 1, 1}, 16), bern0.moments(16), 1.0);
        if (opt.inject_fault)
            f[2] += 0.5;
        return f[2].real();
    }, 0.5, 1e-15);
    add("series", "eval_at(1+z+z^2+..., -1)", [] {
        return eval_at(PowerSeries::geometric(256), -1.0, true).value.real();
    }, 0.5, 1e-8);
    add("series", "eval_at(sum z^n/(n+1), -1)", [] {
        PowerSeries p(256);
        for (std::size_t n = 0; n <= 256; ++n)
            p[n] = 1.0 / static_cast<double>(n + 1);
        return eval_at(p, -1.0, true).value.real();
    }, ln2, 1e-8);

    // hypergeometric
    add("hypergeom", "2F1(1,2;3;-1)", [] { return hyp2f1(1, 2, 3, -1); }, 2.0 * (1.0 - ln2), 1e-12);
    add("hypergeom", "2F1(1,1;2;1/2)", [] { return hyp2f1(1, 1, 2, 0.5); }, 2.0 * ln2, 1e-12);
    add("hypergeom", "3F2(1,2,3;4,5;0)", [] { return pfq_eval({{1, 2, 3}, {4, 5}, 0.0}); }, 1.0, 0.0);
    add("hypergeom", "kernel_2f1_integral(1,-1)", [] { return kernel_2f1_integral(1, -1); }, ln2, 1e-10);
    add("hypergeom", "kernel_2f1_integral(1,1/2)", [] { return kernel_2f1_integral(1, 0.5); }, 2.0 * ln2, 1e-10);
    add("hypergeom", "kernel_2f1_integral(3,0)", [] { return kernel_2f1_integral(3, 0); }, 1.0, 1e-14);
    add("hypergeom", "kernel_3f2_integral(1,1,-1)", [] { return kernel_3f2_integral(1, 1, -1); }, pi * pi / 12.0,
        1e-9);
    add("hypergeom", "contiguous 3F2 (1,1,3,2; -1)", [] {
        const auto [l, r] = contiguous_reduce_3f2(1, 1, 3, 2, -1);
        return l - r;
    }, 0.0, 1e-10);
    add("hypergeom", "contiguous 3F2 (1/2,2,5/2,3/2; -1/2)", [] {
        const auto [l, r] = contiguous_reduce_3f2(0.5, 2, 2.5, 1.5, -0.5);
        return l - r;
    }, 0.0, 1e-10);
    add("hypergeom", "Gauss contiguous (0.7,1.3,2.9; -1)", [] {
        const auto [l, r] = gauss_contiguous(0.7, 1.3, 2.9, -1.0);
        return l - r;
    }, 0.0, 1e-10);

    // quadrature
    add("quadrature", "int t", [] { return integrate_1d([](double t) { return t; }).value; }, 0.5, 1e-14);
    add("quadrature", "int 1/(1+t)", [] { return integrate_1d([](double t) { return 1.0 / (1.0 + t); }).value; }, ln2,
        1e-12);
    add("quadrature", "int t^-1/2 (1-t)^-1/2", [] {
        return integrate_1d([](double t, double omt) { return 1.0 / std::sqrt(t * omt); }, 1e-10,
                            EndpointExponents{-0.5, -0.5})
            .value;
    }, pi, 1e-9);
    add("quadrature", "int int 1", [] { return integrate_2d([](double, double) { return 1.0; }).value; }, 1.0, 1e-14);
    add("quadrature", "int int 1/(1+rs)", [] {
        return integrate_2d([](double r, double s) { return 1.0 / (1.0 + r * s); }).value;
    }, pi * pi / 12.0, 1e-9);

    // weights
    add("weights", "lambda Bernardi c=1 at 1/2", [bern1] { return lambda_eval(bern1, 0.5); }, 1.0, 1e-15);
    add("weights", "lambda Hohlov(1,1,2) at 0.3", [hoh112] { return lambda_eval(hoh112, 0.3); }, 1.0, 1e-12);
    add("weights", "tau_1 Bernardi c=0", [bern0] { return moment(bern0, 1); }, 0.5, 1e-15);
    add("weights", "tau_3 Hohlov(1,1,2)", [hoh112] { return moment(hoh112, 3); }, 0.25, 1e-10);
    add("weights", "tau_0 Hohlov(1,0.5,2.7)", [] { return moment(WeightSpec(Hohlov{1, 0.5, 2.7}), 0); }, 1.0, 1e-10);
    add("weights", "mass Bernardi c=2", [bern2] { return normalize_check(bern2).mass; }, 1.0, 1e-10);
    add("weights", "mass Hohlov(1,0.5,2.7)", [] { return normalize_check(WeightSpec(Hohlov{1, 0.5, 2.7})).mass; }, 1.0,
        1e-8);
    add("weights", "mass custom 2(1-t)", [] {
        Custom c;
        c.function = [](double t) { return 2.0 * (1.0 - t); };
        c.label = "2(1-t)";
        return normalize_check(WeightSpec(c)).mass;
    }, 1.0, 1e-10);

    // bounds
    add("bounds", "mu,nu for (3,1): nu", [] { return derive_mu_nu(3, 1).nu; }, 1.0, 1e-7);
    add("bounds", "mu,nu for (2,0): nu", [] { return derive_mu_nu(2, 0).nu; }, 2.0, 0.0);
    add("bounds", "mu,nu for (1,1) rejected", [] {
        try {
            derive_mu_nu(1, 1);
        } catch (const Error& e) {
            return flag(e.code() == ErrorCode::complex_mu_nu);
        }
        return 0.0;
    }, 1.0, 0.0);
    add("bounds", "thm1 (1,0,1) Bernardi c=0 xi=0", [bern0] {
        return beta_thm1(ClassParams{1, 0, 1}, bern0, TargetParams{0}).beta;
    }, beta_a, 1e-8);
    add("bounds", "thm1 (3,1,1) Bernardi c=0 xi=0", [bern0] {
        return beta_thm1(ClassParams{3, 1, 1}, bern0, TargetParams{0}).beta;
    }, beta_b, 1e-8);
    add("bounds", "thm1 closed (1,0,1) c=0 xi=0", [] {
        return beta_thm1_bernardi_closed(ClassParams{1, 0, 1}, 0, TargetParams{0}).beta;
    }, beta_a, 1e-10);
    add("bounds", "thm1 closed (3,1,1) c=0 xi=0", [] {
        return beta_thm1_bernardi_closed(ClassParams{3, 1, 1}, 0, TargetParams{0}).beta;
    }, beta_b, 1e-6);
    add("bounds", "thm1 closed xi=1/2 halves 1-beta", [] {
        const ClassParams p{2, 0.25, 0.5};
        const double b0 = beta_thm1_bernardi_closed(p, 1, TargetParams{0}).beta;
        const double b5 = beta_thm1_bernardi_closed(p, 1, TargetParams{0.5}).beta;
        return (1.0 - b5) / (1.0 - b0);
    }, 0.5, 1e-14);
    add("bounds", "thm2 Bernardi c=0 xi=0", [bern0] { return beta_thm2(bern0, TargetParams{0}).beta; }, beta_a, 1e-8);
    add("bounds", "thm2 Bernardi c=0 xi=2ln2-1", [bern0, xi_zero] {
        return beta_thm2(bern0, TargetParams{xi_zero}).beta;
    }, 0.0, 1e-8);
    add("bounds", "thm2 Bernardi c=1 xi=0", [bern1] { return beta_thm2(bern1, TargetParams{0}).beta; }, beta_c1, 1e-8);
    add("bounds", "thm2 closed c=0 xi=0", [] { return beta_thm2_bernardi_closed(0, TargetParams{0}).beta; }, beta_a,
        1e-10);
    add("bounds", "thm2 closed c=1 xi=0", [] { return beta_thm2_bernardi_closed(1, TargetParams{0}).beta; }, beta_c1,
        1e-10);
    add("bounds", "thm2 closed c=0 xi=2ln2-1", [xi_zero] {
        return beta_thm2_bernardi_closed(0, TargetParams{xi_zero}).beta;
    }, 0.0, 1e-10);
    add("bounds", "Hohlov weights sum", [] {
        const HohlovWeights w = hohlov_weights(HohlovParams{0.6, 0.3, 2.4, 0}, ClassParams{1.7, 0.2, 1.3});
        return w.w0 + w.w1 + w.w2;
    }, 1.0, 1e-15);
    add("bounds", "beta2 worked example", [example, example_class] { return beta2_hohlov(example, example_class); },
        0.5 * hyp2f1(1, 0.5, 2.7, -1) + 0.5 * hyp2f1(2, 0.5, 2.7, -1), 1e-12);
    add("bounds", "beta2 Hohlov a=1 vs Carlson-Shaffer", [] {
        const ClassParams p{0.8, 0.1, 1.2};
        return beta2_hohlov(HohlovParams{1, 0.4, 2.6, 0}, p) - beta2_carlson_shaffer(0.4, 2.6, p);
    }, 0.0, 1e-14);
    add("bounds", "validate worked example", [example, example_class] {
        return flag(validate_hohlov(example, example_class).valid);
    }, 1.0, 0.0);
    add("bounds", "validate c-a=2.5 rejected", [example_class] {
        return flag(validate_hohlov(HohlovParams{1, 0.5, 3.5, 0}, example_class).valid);
    }, 0.0, 0.0);
    add("bounds", "validate alpha <= gamma(1+(2a+1)/delta) rejected", [] {
        return flag(validate_hohlov(HohlovParams{0.005, 0.5, 1.7, 0}, ClassParams{10.0, 1.0, 0.1}).valid);
    }, 0.0, 0.0);
    add("bounds", "combine_duality(1/2,1/2)", [] { return combine_duality(0.5, 0.5); }, 0.5, 0.0);
    add("bounds", "combine_duality(0,0)", [] { return combine_duality(0, 0); }, -1.0, 0.0);

    // verify
    add("verify", "sharpness thm1 (1,0,1) c=0 xi=0", [bern0] {
        return sharpness_thm1(ClassParams{1, 0, 1}, bern0, TargetParams{0}).achieved;
    }, 0.0, 1e-6);
    add("verify", "sharpness thm1 (3,1,1) c=0 xi=0", [bern0] {
        return sharpness_thm1(ClassParams{3, 1, 1}, bern0, TargetParams{0}).achieved;
    }, 0.0, 1e-4);
    add("verify", "sharpness thm1 (1,0,2) c=1 xi=1/2", [bern1] {
        return sharpness_thm1(ClassParams{1, 0, 2}, bern1, TargetParams{0.5}).achieved;
    }, 0.5, 1e-4);
    add("verify", "sharpness thm2 c=0 xi=0", [bern0] { return sharpness_thm2(bern0, TargetParams{0}).achieved; }, 0.0,
        1e-6);
    add("verify", "sharpness thm2 c=0 xi=2ln2-1", [bern0, xi_zero] {
        return sharpness_thm2(bern0, TargetParams{xi_zero}).achieved;
    }, xi_zero, 1e-6);
    add("verify", "sharpness thm2 c=1 xi=0", [bern1] { return sharpness_thm2(bern1, TargetParams{0}).achieved; }, 0.0,
        1e-6);
    add("verify", "identity check f=z", [bern2] {
        return transform_identity_check(PowerSeries::identity(32), bern2, 1.0).max_deviation;
    }, 0.0, 0.0);
    add("verify", "identity check degree-10 polynomial, Bernardi c=2", [bern2] {
        PowerSeries f = PowerSeries::identity(10);
        for (std::size_t n = 2; n <= 10; ++n)
            f[n] = Complex(std::cos(1.7 * static_cast<double>(n)), std::sin(0.9 * static_cast<double>(n))) *
                   std::ldexp(0.35, -static_cast<int>(n - 1));
        return transform_identity_check(f, bern2, 0.7).max_deviation;
    }, 0.0, 1e-10);
    add("verify", "identity check extremal, Hohlov(1,1,2)", [hoh112] {
        return transform_identity_check(extremal_series(0.5, 1.0, 0.0, 1.0, 64), hoh112, 1.0).max_deviation;
    }, 0.0, 1e-10);
    add("verify", "membership f=z margin at beta=0.3", [] {
        return membership_test(PowerSeries::identity(16), ClassParams{2, 0.5, 1, 0.3}).margin;
    }, 0.7, 1e-12);
    add("verify", "Hohlov kernel check, worked example", [example, example_class] {
        return flag(hohlov_kernel_check(example, example_class).pass);
    }, 1.0, 0.0);
    add("verify", "Hohlov N3(0)", [example, example_class] {
        return hohlov_n3_series(example, example_class, 16)[0].real();
    }, 1.0, 1e-15);
    return g;
}

} // namespace

Report run_selftest(const SelftestOptions& opt, bool& all_pass)
{
    Report report;
    report.config = json{{"command", "selftest"}, {"min_tolerance", opt.min_tolerance}, {"inject_fault", opt.inject_fault}};
    const auto list = goldens(opt);
    std::size_t passed = 0;
    for (const Golden& gold : list) {
        Row row;
        row.inputs = json{{"group", gold.group}, {"check", gold.name}};
        const double tol = std::max(gold.tolerance, opt.min_tolerance);
        try {
            const double v = gold.compute();
            const double dev = std::abs(v - gold.expected);
            const bool ok = std::isfinite(v) && dev <= tol;
            row.outputs = json{{"value", v}, {"expected", gold.expected}, {"deviation", dev}, {"tolerance", tol},
                               {"pass", ok}};
            passed += ok ? 1 : 0;
        } catch (const Error& e) {
            row.outputs = json{{"pass", false}};
            row.error_code = std::string(to_string(e.code()));
            row.error_message = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    report.summary = json{{"checks", list.size()}, {"passed", passed}, {"failed", list.size() - passed}};
    all_pass = passed == list.size();
    return report;
}

} // namespace vlambda::cli
