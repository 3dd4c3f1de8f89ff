#include "doctest.h"
#include "oracles.hpp"

#include "vlambda/errors.hpp"
#include "vlambda/hypergeom.hpp"

#include <random>

using namespace vlambda;

TEST_CASE("pFq goldens")
{
    CHECK(pfq_eval({{1.5, 2.0, 0.3}, {4.0, 5.0}, 0.0}) == 1.0);

    const double a = hyp2f1(1, 2, 3, -1);
    CHECK(std::abs(a - 2.0 * (1.0 - oracle::ln2)) < 1e-12);
    CHECK(std::abs(a - oracle::hyp2f1(1, 2, 3, -1)) < 1e-12);

    const double b = hyp2f1(1, 1, 2, 0.5);
    CHECK(std::abs(b - 2.0 * oracle::ln2) < 1e-13);
    CHECK(std::abs(b - oracle::hyp2f1(1, 1, 2, 0.5)) < 1e-13);

    CHECK(std::abs(hyp2f1(1, 3, 4, -1) - (3.0 * oracle::ln2 - 1.5)) < 1e-12);
}

TEST_CASE("pFq against direct series")
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double a1 = 0.2 + 2.0 * u(rng), a2 = 0.2 + 2.0 * u(rng), a3 = 0.2 + u(rng);
        const double b1 = a1 + 0.5 + 2.0 * u(rng), b2 = 0.5 + 3.0 * u(rng);
        const double x = -u(rng);
        const double lib = pfq_eval({{a1, a2, a3}, {b1, b2}, x});
        const double ref = oracle::pfq({a1, a2, a3}, {b1, b2}, x);
        CHECK(std::abs(lib - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("pFq at -1 against a long partial sum")
{
    // Where the series converges absolutely, 10^6 direct terms are a fair reference.
    const std::vector<std::pair<std::vector<double>, std::vector<double>>> cases = {
        {{1.0, 0.5}, {3.5}}, {{0.3, 0.7, 1.0}, {2.2, 1.9}}, {{1.0, 1.0, 1.0}, {2.0, 2.0}}};
    for (const auto& [up, lo] : cases) {
        long double sum = 0, t = 1;
        for (std::size_t n = 0; n < 1000000; ++n) {
            sum += t;
            long double r = -1.0L / static_cast<long double>(n + 1);
            for (double a : up)
                r *= a + static_cast<long double>(n);
            for (double b : lo)
                r /= b + static_cast<long double>(n);
            t *= r;
        }
        CHECK(std::abs(pfq_eval({up, lo, -1.0}) - static_cast<double>(sum)) < 1e-7);
    }
    // Conditionally convergent: the averaged oracle.
    CHECK(std::abs(pfq_eval({{1.0, 2.0, 2.0}, {3.0, 2.5}, -1.0}) - oracle::pfq({1.0, 2.0, 2.0}, {3.0, 2.5}, -1.0)) <
          1e-10);
}

TEST_CASE("pFq edge cases")
{
    // Terminating series: (1-x)^2 via 2F1(-2, b; b; x).
    CHECK(pfq_eval({{-2.0, 1.7}, {1.7}, 0.4}) == doctest::Approx(0.36).epsilon(1e-15));
    CHECK_THROWS_AS(pfq_eval({{1.0, 1.0}, {-2.0}, 0.5}), Error);
    CHECK_THROWS_AS(pfq_eval({{1.0, 1.0}, {2.0}, 1.0}), Error);
    CHECK_THROWS_AS(pfq_eval({{1.0, 1.0, 1.0}, {2.0}, 0.5}), Error);
    CHECK(pochhammer(0.5, 3) == doctest::Approx(0.5 * 1.5 * 2.5));
}

TEST_CASE("kernel integrals")
{
    CHECK(kernel_2f1_integral(2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(kernel_2f1_integral(1.0, -1.0) - oracle::ln2) < 1e-10);
    CHECK(std::abs(kernel_2f1_integral(1.0, 0.5) - 2.0 * oracle::ln2) < 1e-10);
    CHECK(kernel_3f2_integral(1.5, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(kernel_3f2_integral(1.0, 1.0, -1.0) - oracle::pi2_over_12) < 1e-9);

    SUBCASE("grid against series values")
    {
        const double ms[] = {0.25, 0.5, 1.0, 2.0, 4.0};
        double worst2 = 0.0, worst3 = 0.0;
        for (double m : ms) {
            for (double x : {-1.0, -0.5, 0.0, 0.5}) {
                worst2 = std::max(worst2, std::abs(kernel_2f1_integral(m, x) - hyp2f1(1.0, 1.0 / m, 1.0 + 1.0 / m, x)));
                for (double n : ms) {
                    const double series = pfq_eval({{1.0, 1.0 / n, 1.0 / m}, {1.0 + 1.0 / n, 1.0 + 1.0 / m}, x});
                    worst3 = std::max(worst3, std::abs(kernel_3f2_integral(n, m, x) - series));
                }
            }
        }
        CHECK(worst2 < 1e-8);
        CHECK(worst3 < 1e-8);
    }
    SUBCASE("random 3F2 kernels against the oracle series")
    {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            const double n = 0.2 + 4.0 * u(rng), m = 0.2 + 4.0 * u(rng), x = -1.0 + 1.8 * u(rng);
            CHECK(std::abs(kernel_3f2_integral(n, m, x) -
                           oracle::pfq({1.0, 1.0 / n, 1.0 / m}, {1.0 + 1.0 / n, 1.0 + 1.0 / m}, x)) < 1e-8);
        }
    }
}

TEST_CASE("contiguous relations")
{
    auto [l0, r0] = contiguous_reduce_3f2(0.4, 1.3, 2.6, 1.8, 0.0);
    CHECK(l0 == doctest::Approx(1.0));
    CHECK(r0 == doctest::Approx(1.0));

    auto [l1, r1] = contiguous_reduce_3f2(1, 1, 3, 2, -1);
    CHECK(std::abs(l1 - r1) < 1e-10);
    CHECK(std::abs(l1 - oracle::pfq({2, 1, 1}, {3, 2}, -1)) < 1e-10);

    auto [l2, r2] = contiguous_reduce_3f2(0.5, 2, 2.5, 1.5, -0.5);
    CHECK(std::abs(l2 - r2) < 1e-10);

    auto [g0, h0] = gauss_contiguous(0.7, 1.3, 2.9, 0.0);
    CHECK(g0 == 0.0);
    CHECK(std::abs(h0) < 1e-15);
    auto [g1, h1] = gauss_contiguous(0.7, 1.3, 2.9, -1.0);
    CHECK(std::abs(g1 - h1) < 1e-10);
    CHECK(std::abs(g1 + 1.3 * oracle::hyp2f1(1.7, 2.3, 3.9, -1.0)) < 1e-10);

    CHECK_THROWS_AS(contiguous_reduce_3f2(1, 1, 1, 2, -0.5), Error);
}
