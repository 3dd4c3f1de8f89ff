#include "doctest.h"
#include "oracles.hpp"

#include "vlambda/verify.hpp"

#include <random>

using namespace vlambda;

namespace {

MembershipGrid small_grid()
{
    MembershipGrid g = MembershipGrid::standard();
    g.theta_points = 360;
    g.phi_points = 360;
    return g;
}

} // namespace

TEST_CASE("membership of the identity")
{
    for (double beta : {-0.5, 0.0, 0.7}) {
        const MembershipReport r = membership_test(PowerSeries::identity(16), ClassParams{2.0, 0.5, 1.0, beta});
        CHECK(r.is_member);
        CHECK(r.best_phi == 0.0);
        CHECK(r.margin == doctest::Approx(1.0 - beta).epsilon(1e-14));
        CHECK(r.excluded_points == 0);
        CHECK(r.evaluated_points == 20 * 720);
    }
}

TEST_CASE("membership of the extremal function")
{
    const double beta = -0.25, alpha = 2.0, gamma = 0.2, delta = 1.0;
    const auto [mu, nu] = oracle::mu_nu(alpha, gamma);
    const PowerSeries h = functional_H_from_power_form(extremal_power_form(beta, delta, mu, nu, 8192), alpha, gamma, delta);
    const MembershipReport at = membership_test_functional(h, beta, small_grid());
    CHECK(at.is_member);
    CHECK(at.excluded_points == 0);
    // H - beta = (1-beta)(1+z)/(1-z) has real part (1-beta)(1-r^2)/|1-z|^2 >= (1-beta)(1-r)/(1+r).
    CHECK(at.margin == doctest::Approx((1.0 - beta) * 0.005 / 1.995).epsilon(1e-6));
    const MembershipReport above = membership_test_functional(h, beta + 0.1, small_grid());
    CHECK_FALSE(above.is_member);

    SUBCASE("series route agrees on a moderate order")
    {
        const PowerSeries f = extremal_series(beta, delta, mu, nu, 512);
        MembershipGrid g = small_grid();
        g.radii = {0.1, 0.5, 0.8, 0.9};
        const MembershipReport viaf = membership_test(f, ClassParams{alpha, gamma, delta, beta}, g);
        const MembershipReport viah = membership_test_functional(h, beta, g);
        CHECK(viaf.margin == doctest::Approx(viah.margin).epsilon(1e-8));
    }
}

TEST_CASE("margin is stable under rotations")
{
    PowerSeries h(64);
    h[0] = 1.0;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n = 1; n <= 64; ++n)
        h[n] = 0.3 * std::pow(0.6, n) * Complex(u(rng), u(rng));
    const double beta = 0.2;
    const MembershipGrid grid = small_grid();
    const MembershipReport base = membership_test_functional(h, beta, grid);

    // h(e^{i theta} z) with theta on the angular grid samples the same values.
    const double theta = 2.0 * oracle::pi * 37.0 / static_cast<double>(grid.theta_points);
    PowerSeries turned = h;
    for (std::size_t n = 1; n <= 64; ++n)
        turned[n] *= std::polar(1.0, theta * static_cast<double>(n));
    const MembershipReport r = membership_test_functional(turned, beta, grid);
    CHECK(r.margin == doctest::Approx(base.margin).epsilon(1e-8));
    CHECK(r.best_phi == doctest::Approx(base.best_phi).epsilon(1e-6));

    // Conjugating every coefficient mirrors the best rotation.
    PowerSeries mirrored = h;
    for (std::size_t n = 0; n <= 64; ++n)
        mirrored[n] = std::conj(h[n]);
    const MembershipReport c = membership_test_functional(mirrored, beta, grid);
    CHECK(c.margin == doctest::Approx(base.margin).epsilon(1e-8));
    CHECK(c.best_phi == doctest::Approx(-base.best_phi).epsilon(1e-6));
}

TEST_CASE("transform identity")
{
    const WeightSpec b2(Bernardi{2.0});
    CHECK(transform_identity_check(PowerSeries::identity(32), b2, 1.0).max_deviation == 0.0);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PowerSeries f = PowerSeries::identity(10);
    for (std::size_t n = 2; n <= 10; ++n)
        f[n] = std::ldexp(0.35, -static_cast<int>(n - 1)) * Complex(u(rng), u(rng));
    CHECK(transform_identity_check(f, b2, 1.0).max_deviation <= 1e-10);
    CHECK(transform_identity_check(f, b2, 0.3).max_deviation <= 1e-10);

    const WeightSpec h(Hohlov{1.0, 1.0, 2.0});
    CHECK(transform_identity_check(extremal_series(0.5, 1.0, 0.0, 1.0, 64), h, 1.0).max_deviation <= 1e-10);
}

TEST_CASE("sharpness")
{
    const WeightSpec b0(Bernardi{0.0});
    const WeightSpec b1(Bernardi{1.0});

    SharpnessReport s = sharpness_thm1(ClassParams{1, 0, 1}, b0, TargetParams{0});
    CHECK(s.pass);
    CHECK(std::abs(s.achieved) < 1e-6);
    // Direct oracle: 1 + 2(1-beta)(ln2 - 1).
    CHECK(std::abs(1.0 + 2.0 * (1.0 - s.beta) * (oracle::ln2 - 1.0)) < 1e-9);

    s = sharpness_thm1(ClassParams{3, 1, 1}, b0, TargetParams{0});
    CHECK(s.pass);
    CHECK(std::abs(s.achieved) < 1e-4);

    s = sharpness_thm1(ClassParams{1, 0, 2}, b1, TargetParams{0.5});
    CHECK(s.pass);
    CHECK(std::abs(s.achieved - 0.5) < 1e-4);
    // Oracle: averaged sum of 1 + 2(1-beta) sum (-1)^n delta(n+delta) tau_n / ((delta)(delta+n)).
    const double oracle_value = 1.0 + 2.0 * (1.0 - s.beta) * oracle::averaged_sum([](std::size_t n) -> oracle::real {
        if (n == 0)
            return 0;
        const oracle::real d = 2, nn = static_cast<oracle::real>(n);
        const oracle::real tau = 2 / (nn + 2);
        return ((n % 2) ? -1 : 1) * d * (nn + d) * tau / (d * (d + nn));
    });
    CHECK(std::abs(s.achieved - oracle_value) < 1e-8);

    SharpnessReport t = sharpness_thm2(b0, TargetParams{0});
    CHECK(t.pass);
    CHECK(std::abs(t.achieved) < 1e-6);
    const double xi0 = 2.0 * oracle::ln2 - 1.0;
    t = sharpness_thm2(b0, TargetParams{xi0});
    CHECK(std::abs(t.beta) < 1e-10);
    CHECK(std::abs(t.achieved - xi0) < 1e-6);
    t = sharpness_thm2(b1, TargetParams{0});
    CHECK(std::abs(t.achieved) < 1e-6);

    SUBCASE("a wrong beta is caught")
    {
        const SharpnessReport bad = sharpness_thm2(b0, TargetParams{0}, -0.5);
        CHECK_FALSE(bad.pass);
    }
}

TEST_CASE("Hohlov kernel")
{
    const HohlovParams h{1.0, 0.5, 2.7, 0.0};
    const ClassParams p{0.5, 0.0, 1.0};
    const HohlovKernelReport r = hohlov_kernel_check(h, p);
    CHECK(r.pass);
    CHECK(r.excluded_points == 0);
    CHECK(r.n3_at_zero == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.min_re_n3 > r.n3_at_minus_one - 1e-8);
    CHECK(std::abs(r.n3_series_at_minus_one - r.n3_at_minus_one) < 1e-8);
    CHECK(r.beta == doctest::Approx(2.0 * r.n3_at_minus_one - 1.0).epsilon(1e-15));
    const double ref = 0.5 * oracle::hyp2f1(1, 0.5, 2.7, -1) + 0.5 * oracle::hyp2f1(2, 0.5, 2.7, -1);
    CHECK(std::abs(r.n3_at_minus_one - ref) < 1e-10);

    // N3 coefficients: w0 (a)_n(b)_n/((c)_n n!) + ... against the oracle Pochhammer.
    const PowerSeries n3 = hohlov_n3_series(h, p, 12);
    for (std::size_t n = 0; n <= 12; ++n) {
        const double c0 = static_cast<double>(oracle::pochhammer(1.0, n) * oracle::pochhammer(0.5, n) /
                                              (oracle::pochhammer(2.7, n) * oracle::pochhammer(1, n)));
        const double c1 = static_cast<double>(oracle::pochhammer(2.0, n) * oracle::pochhammer(0.5, n) /
                                              (oracle::pochhammer(2.7, n) * oracle::pochhammer(1, n)));
        CHECK(n3[n].real() == doctest::Approx(0.5 * c0 + 0.5 * c1).epsilon(1e-13));
    }
}
