#include "doctest.h"
#include "oracles.hpp"

#include "vlambda/errors.hpp"
#include "vlambda/power_series.hpp"
#include "vlambda/weights.hpp"

#include <random>

using namespace vlambda;

namespace {

PowerSeries poly(std::vector<Complex> c, std::size_t order)
{
    c.resize(order + 1, Complex(0.0));
    return PowerSeries(std::move(c));
}

double max_diff(const PowerSeries& a, const PowerSeries& b, std::size_t upto)
{
    double d = 0.0;
    for (std::size_t n = 0; n <= upto; ++n)
        d = std::max(d, std::abs(a[n] - b[n]));
    return d;
}

PowerSeries random_function(std::mt19937_64& rng, std::size_t order, double scale)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PowerSeries f = PowerSeries::identity(order);
    for (std::size_t n = 2; n <= order; ++n)
        f[n] = scale * std::ldexp(1.0, -static_cast<int>(n - 1)) * Complex(u(rng), u(rng));
    return f;
}

} // namespace

TEST_CASE("hadamard product")
{
    const PowerSeries r = hadamard(poly({1, 2}, 3), poly({1, 3}, 3));
    CHECK(r[0] == Complex(1.0));
    CHECK(r[1] == Complex(6.0));
    CHECK(r[2] == Complex(0.0));

    PowerSeries a(20), b(20);
    for (std::size_t n = 0; n <= 20; ++n) {
        a[n] = std::pow(0.5, n);
        b[n] = std::pow(1.0 / 3.0, n);
    }
    const PowerSeries ab = hadamard(a, b);
    for (std::size_t n = 0; n <= 20; ++n)
        CHECK(ab[n].real() == doctest::Approx(std::pow(1.0 / 6.0, n)).epsilon(1e-14));

    std::mt19937_64 rng(3);
    const PowerSeries f = random_function(rng, 40, 1.0);
    CHECK(max_diff(hadamard(f, PowerSeries::geometric(40)), f, 40) == 0.0);

    SUBCASE("mismatched orders truncate to the shorter")
    {
        CHECK(hadamard(PowerSeries::geometric(5), PowerSeries::geometric(9)).order() == 5);
    }
}

TEST_CASE("principal power")
{
    const PowerSeries p = poly({1, 1}, 64);
    CHECK(max_diff(principal_power(p, 1.0), p, 64) < 1e-15);

    const PowerSeries sq = principal_power(p, 2.0);
    CHECK(sq[1].real() == doctest::Approx(2.0));
    CHECK(sq[2].real() == doctest::Approx(1.0));
    CHECK(std::abs(sq[3]) < 1e-15);

    CHECK(max_diff(principal_power(principal_power(p, 0.5), 2.0), p, 64) < 1e-12);

    // Binomial series for (1+z)^(1/3) from the oracle's Pochhammer.
    const PowerSeries cube_root = principal_power(p, 1.0 / 3.0);
    for (std::size_t n = 0; n <= 20; ++n) {
        const double binom = static_cast<double>(oracle::pochhammer(-1.0L / 3.0L, n) / oracle::pochhammer(1.0L, n)) *
                             ((n % 2) ? -1.0 : 1.0);
        CHECK(cube_root[n].real() == doctest::Approx(binom).epsilon(1e-12));
    }

    SUBCASE("exponents add")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        PowerSeries q(48);
        q[0] = 1.0;
        for (std::size_t n = 1; n <= 48; ++n)
            q[n] = 0.4 * std::pow(0.7, n) * Complex(u(rng), u(rng));
        const PowerSeries lhs = principal_power(q, 0.3 + 1.9);
        const PowerSeries rhs = principal_power(q, 0.3) * principal_power(q, 1.9);
        CHECK(max_diff(lhs, rhs, 48) < 1e-10);
    }

    SUBCASE("rejects a leading coefficient other than one")
    {
        CHECK_THROWS_AS(principal_power(poly({2, 1}, 4), 0.5), Error);
        CHECK_THROWS_AS(principal_power(p, -1.0), Error);
    }
}

TEST_CASE("log and exp are inverse")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PowerSeries q(32);
    q[0] = 1.0;
    for (std::size_t n = 1; n <= 32; ++n)
        q[n] = 0.3 * Complex(u(rng), u(rng)) / static_cast<double>(n);
    CHECK(max_diff(exp_series(log_series(q)), q, 32) < 1e-13);
    const PowerSeries r = divide(q * q, q);
    CHECK(max_diff(r, q, 32) < 1e-13);
}

TEST_CASE("functional H")
{
    SUBCASE("identity gives H = 1")
    {
        const PowerSeries h = functional_H(PowerSeries::identity(32), 2.0, 0.5, 1.5);
        CHECK(h[0] == Complex(1.0));
        for (std::size_t n = 1; n <= h.order(); ++n)
            CHECK(std::abs(h[n]) < 1e-15);
    }
    SUBCASE("first coefficient of z + eps z^2")
    {
        const double eps = 0.125;
        const PowerSeries h = functional_H(poly({0, 1, eps}, 8), 1.0, 0.0, 1.0);
        CHECK(h[1].real() == doctest::Approx(2.0 * eps).epsilon(1e-15));
    }
    SUBCASE("direct and coefficient paths agree on random series")
    {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const double alpha = 0.5 + 3.0 * u(rng);
            const double gmax = alpha + 2.0 - 2.0 * std::sqrt(alpha + 1.0);
            const double gamma = gmax * u(rng);
            const double delta = 0.25 + 2.0 * u(rng);
            const PowerSeries f = random_function(rng, 40, 0.45);
            const PowerSeries direct = functional_H(f, alpha, gamma, delta);
            const PowerSeries p = principal_power(divide_by_z(f), delta);
            const PowerSeries via = functional_H_from_power_form(p, alpha, gamma, delta);
            double scale = 0.0, dev = 0.0;
            for (std::size_t n = 0; n <= direct.order(); ++n) {
                scale = std::max(scale, std::abs(via[n]));
                dev = std::max(dev, std::abs(direct[n] - via[n]));
            }
            worst = std::max(worst, dev / scale);
        }
        CHECK(worst < 1e-10);
    }
    SUBCASE("complex mu, nu rejected")
    {
        CHECK_THROWS_AS(functional_H(PowerSeries::identity(8), 1.0, 1.0, 1.0), Error);
    }
}

TEST_CASE("extremal function")
{
    CHECK(max_diff(extremal_series(1.0, 1.0, 0.0, 1.0, 16), PowerSeries::identity(16), 16) == 0.0);

    const PowerSeries p = extremal_power_form(0.0, 1.0, 0.0, 1.0, 30);
    for (std::size_t n = 1; n <= 30; ++n)
        CHECK(p[n].real() == doctest::Approx(2.0 / static_cast<double>(n + 1)).epsilon(1e-15));

    // H of the extremal function is the half-plane map: all coefficients 2(1 - beta).
    for (const auto& [alpha, gamma, delta, beta] :
         std::vector<std::array<double, 4>>{{1, 0, 1, 0.0}, {3, 1, 1, -0.5}, {2, 0.2, 0.5, 0.3}, {0.5, 0, 2, 0.5}}) {
        const auto [mu, nu] = oracle::mu_nu(alpha, gamma);
        const PowerSeries h = functional_H(extremal_series(beta, delta, mu, nu, 64), alpha, gamma, delta);
        for (std::size_t n = 1; n <= h.order(); ++n)
            CHECK(h[n].real() == doctest::Approx(2.0 * (1.0 - beta)).epsilon(1e-10));
    }
}

TEST_CASE("apply transform")
{
    const WeightSpec bern0(Bernardi{0.0});
    CHECK(max_diff(apply_transform(PowerSeries::identity(16), bern0.moments(16), 1.3), PowerSeries::identity(16), 16) ==
          0.0);

    // b_1 = 1 (f = z + z^2, delta = 1) maps to tau_1 = 1/2.
    const PowerSeries F = apply_transform(poly({0, 1, 1}, 16), bern0.moments(16), 1.0);
    CHECK(F[2].real() == doctest::Approx(0.5).epsilon(1e-15));

    SUBCASE("extremal input")
    {
        const double beta = -0.2, delta = 0.7, alpha = 2.5, gamma = 0.3;
        const auto [mu, nu] = oracle::mu_nu(alpha, gamma);
        const WeightSpec w(Bernardi{1.5});
        const MomentSequence tau = w.moments(40);
        const PowerSeries F = apply_transform(extremal_series(beta, delta, mu, nu, 40), tau, delta);
        const PowerSeries P = principal_power(divide_by_z(F), delta);
        for (std::size_t n = 1; n < 40; ++n) {
            const double expected = 2.0 * (1.0 - beta) * delta * delta * (2.5 / (n + 2.5)) /
                                    ((delta + n * nu) * (delta + n * mu));
            CHECK(P[n].real() == doctest::Approx(expected).epsilon(1e-11));
        }
    }

    SUBCASE("moment sequence must be normalized")
    {
        CHECK_THROWS_AS(MomentSequence({0.9, 0.5, 0.3}), Error);
    }
}

TEST_CASE("evaluation")
{
    const PowerSeries q = poly({1, -2, 3}, 2);
    const SeriesValue v = eval_at(q, Complex(0.5, 0.25));
    const Complex z(0.5, 0.25);
    CHECK(std::abs(v.value - (1.0 - 2.0 * z + 3.0 * z * z)) < 1e-15);

    CHECK(eval_at(PowerSeries::geometric(256), -1.0, true).value.real() == doctest::Approx(0.5).epsilon(1e-10));

    PowerSeries h(400);
    for (std::size_t n = 0; n <= 400; ++n)
        h[n] = 1.0 / static_cast<double>(n + 1);
    const SeriesValue l2 = eval_at(h, -1.0, true);
    CHECK(l2.converged);
    CHECK(std::abs(l2.value.real() - oracle::ln2) < 1e-10);
    CHECK(std::abs(l2.value.real() - oracle::ln2) <= std::max(l2.tail_estimate * 10, 1e-14));

    SUBCASE("inside the disk against a closed form")
    {
        const Complex w(0.3, -0.6);
        CHECK(std::abs(eval_at(PowerSeries::geometric(256), w, false, 1e-15).value - 1.0 / (1.0 - w)) < 1e-12);
        const SeriesEvaluator ev(PowerSeries::geometric(2048));
        const Complex w2 = 0.99 * std::polar(1.0, 2.0);
        CHECK(std::abs(ev(w2).value - 1.0 / (1.0 - w2)) < 1e-9);
    }
    SUBCASE("boundary without acceleration is refused")
    {
        CHECK_THROWS_AS(eval_at(PowerSeries::geometric(16), -1.0, false), Error);
    }
}
