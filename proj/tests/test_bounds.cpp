#include "doctest.h"
#include "oracles.hpp"

#include "vlambda/bounds.hpp"
#include "vlambda/errors.hpp"
#include "vlambda/hypergeom.hpp"

#include <random>

using namespace vlambda;

namespace {

const double beta_a = 1.0 - 0.5 / (1.0 - oracle::ln2);
const double beta_b = 1.0 - 0.5 / (1.0 - oracle::pi2_over_12);
const double beta_c1 = (4.0 * oracle::ln2 - 3.0) / (4.0 * oracle::ln2 - 2.0);

double gamma_max(double alpha)
{
    return alpha + 2.0 - 2.0 * std::sqrt(alpha + 1.0);
}

} // namespace

TEST_CASE("mu and nu")
{
    const MuNu a = derive_mu_nu(2.5, 0.0);
    CHECK(a.mu == 0.0);
    CHECK(a.nu == 2.5);
    const MuNu b = derive_mu_nu(3.0, 1.0);
    CHECK(b.mu == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(b.nu == doctest::Approx(1.0).epsilon(1e-7));
    const MuNu c = derive_mu_nu(4.0, 0.5);
    CHECK(c.mu * c.nu == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.mu + c.nu == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(c.nu >= c.mu);

    try {
        derive_mu_nu(1.0, 1.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::complex_mu_nu);
        CHECK(std::string(e.what()).find("complex mu,nu") != std::string::npos);
    }
    CHECK_THROWS_AS(derive_mu_nu(0.5, 1.0), Error);
    CHECK_THROWS_AS(derive_mu_nu(-1.0, 0.0), Error);
}

TEST_CASE("Theorem 1 goldens")
{
    const WeightSpec b0(Bernardi{0.0});
    const BoundResult r = beta_thm1(ClassParams{1, 0, 1}, b0, TargetParams{0});
    CHECK(std::abs(r.beta - beta_a) < 1e-9);
    CHECK(std::abs(r.diagnostic("I") - oracle::ln2) < 1e-10);
    CHECK(r.method == "quadrature");

    const BoundResult s = beta_thm1(ClassParams{3, 1, 1}, b0, TargetParams{0});
    CHECK(std::abs(s.beta - beta_b) < 1e-8);
    CHECK(std::abs(s.diagnostic("I") - oracle::pi2_over_12) < 1e-9);
    CHECK(s.diagnostic("swap_discrepancy") < 1e-8);

    const BoundResult c = beta_thm1_bernardi_closed(ClassParams{1, 0, 1}, 0, TargetParams{0});
    CHECK(std::abs(c.beta - (1.0 - 1.0 / oracle::hyp2f1(1, 2, 3, -1))) < 1e-12);
    CHECK(std::abs(beta_thm1_bernardi_closed(ClassParams{3, 1, 1}, 0, TargetParams{0}).beta - beta_b) < 1e-6);
}

TEST_CASE("Theorem 1 against the independent integral oracle")
{
    struct P {
        double alpha, gamma, delta, c, xi;
    };
    const P cases[] = {{2.0, 0.0, 0.5, 1.0, 0.0}, {0.5, 0.0, 2.0, 2.0, -0.5}, {2.0, gamma_max(2.0), 0.5, 1.0, 0.5}};
    for (const P& p : cases) {
        const ClassParams cp{p.alpha, p.gamma, p.delta};
        const double ref = oracle::beta_from_I(oracle::thm1_bernardi_I(p.alpha, p.gamma, p.delta, p.c), p.xi);
        CHECK(std::abs(beta_thm1(cp, WeightSpec(Bernardi{p.c}), TargetParams{p.xi}).beta - ref) < 1e-8);
        CHECK(std::abs(beta_thm1_bernardi_closed(cp, p.c, TargetParams{p.xi}).beta - ref) < 1e-8);
    }
}

TEST_CASE("Theorem 1 structure")
{
    const ClassParams p{2.0, 0.3, 0.8};
    const double b0 = beta_thm1_bernardi_closed(p, 1.0, TargetParams{0.0}).beta;
    const double b5 = beta_thm1_bernardi_closed(p, 1.0, TargetParams{0.5}).beta;
    CHECK((1.0 - b5) / (1.0 - b0) == doctest::Approx(0.5).epsilon(1e-14));

    double last = -1e300;
    for (double xi : {-0.9, -0.5, 0.0, 0.5, 0.99}) {
        const double b = beta_thm1(p, WeightSpec(Bernardi{1.0}), TargetParams{xi}).beta;
        CHECK(b > last);
        CHECK(b < 1.0);
        last = b;
    }
    CHECK_THROWS_AS(beta_thm1(p, WeightSpec(Bernardi{1.0}), TargetParams{1.0}), Error);
    CHECK_THROWS_AS(beta_thm1(ClassParams{1, 1, 1}, WeightSpec(Bernardi{1.0}), TargetParams{0}), Error);
}

TEST_CASE("Theorem 2 goldens")
{
    const WeightSpec b0(Bernardi{0.0});
    const WeightSpec b1(Bernardi{1.0});
    const double xi0 = 2.0 * oracle::ln2 - 1.0;

    const BoundResult r = beta_thm2(b0, TargetParams{0});
    CHECK(std::abs(r.beta - beta_a) < 1e-10);
    CHECK(std::abs(r.diagnostic("r") + (2.0 * oracle::ln2 - 1.0)) < 1e-12);
    CHECK(std::abs(beta_thm2(b0, TargetParams{xi0}).beta) < 1e-10);
    const BoundResult r1 = beta_thm2(b1, TargetParams{0});
    CHECK(std::abs(r1.beta - beta_c1) < 1e-10);
    CHECK(std::abs(r1.diagnostic("r") - (4.0 * oracle::ln2 - 3.0)) < 1e-12);

    CHECK(std::abs(beta_thm2_bernardi_closed(0, TargetParams{0}).beta - beta_a) < 1e-12);
    CHECK(std::abs(beta_thm2_bernardi_closed(1, TargetParams{0}).beta - beta_c1) < 1e-12);
    CHECK(std::abs(beta_thm2_bernardi_closed(0, TargetParams{xi0}).beta) < 1e-12);

    // Closed form against the oracle's own 2F1 value.
    const double F = oracle::hyp2f1(1, 4, 5, -1);
    CHECK(std::abs(beta_thm2_bernardi_closed(2, TargetParams{0.2}).beta - (6.0 * F - 4.0 * 0.8) / (6.0 * F)) < 1e-12);
}

TEST_CASE("Theorem 2 against closed form and Theorem 1")
{
    for (double c : {0.0, 1.0, 2.0, 4.5}) {
        double last = -1e300;
        for (double xi : {-0.5, 0.0, 0.5}) {
            const double q = beta_thm2(WeightSpec(Bernardi{c}), TargetParams{xi}).beta;
            CHECK(std::abs(q - beta_thm2_bernardi_closed(c, TargetParams{xi}).beta) < 1e-8);
            CHECK(q > last);
            last = q;
        }
    }
    // Non-Bernardi weight against the oracle integral.
    const WeightSpec h(Hohlov{0.7, 0.6, 2.9});
    const double kxi = (1.0 + 0.25) / (1.0 - 0.25);
    const double rr = -oracle::tanh_sinh([&](oracle::real t, oracle::real omt) {
        return lambda_eval(h, static_cast<double>(t), static_cast<double>(omt)) * (1 - kxi * t) / (1 + t);
    }, 9);
    CHECK(std::abs(beta_thm2(h, TargetParams{0.25}).beta - rr / (1.0 + rr)) < 1e-8);
}

TEST_CASE("Hohlov weights and beta2")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const HohlovParams h{0.05 + u(rng), 0.1 + u(rng), 1.5 + u(rng), 0.0};
        const ClassParams p{3.0 * u(rng), 0.5 * u(rng), 0.2 + 2.0 * u(rng)};
        const HohlovWeights w = hohlov_weights(h, p);
        CHECK(std::abs(w.w0 + w.w1 + w.w2 - 1.0) < 1e-13);
    }

    const HohlovParams ex{1.0, 0.5, 2.7, 0.0};
    const ClassParams exc{0.5, 0.0, 1.0};
    const HohlovWeights w = hohlov_weights(ex, exc);
    CHECK(w.w0 == doctest::Approx(0.5));
    CHECK(w.w1 == doctest::Approx(0.5));
    CHECK(w.w2 == 0.0);
    const double ref = 0.5 * oracle::hyp2f1(1, 0.5, 2.7, -1) + 0.5 * oracle::hyp2f1(2, 0.5, 2.7, -1);
    CHECK(std::abs(beta2_hohlov(ex, exc) - ref) < 1e-10);

    for (double b : {0.2, 0.5}) {
        for (double c : {2.3, 2.9}) {
            for (double gamma : {0.0, 0.1}) {
                const ClassParams p{1.5, gamma, 1.2};
                CHECK(beta2_hohlov(HohlovParams{1.0, b, c, 0}, p) ==
                      doctest::Approx(beta2_carlson_shaffer(b, c, p)).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("Hohlov validation")
{
    const ClassParams exc{0.5, 0.0, 1.0};
    const HohlovValidation v = validate_hohlov(HohlovParams{1.0, 0.5, 2.7, 0}, exc);
    CHECK(v.valid);
    CHECK(v.min_e3 >= 0.0);
    CHECK(v.min_n4 >= 0.0);

    const HohlovValidation r1 = validate_hohlov(HohlovParams{1.0, 0.5, 3.5, 0}, exc);
    CHECK_FALSE(r1.valid);
    CHECK(r1.first_violation.find("c-a") != std::string::npos);

    const HohlovValidation r2 = validate_hohlov(HohlovParams{0.005, 0.5, 1.7, 0}, ClassParams{10.0, 1.0, 0.1});
    CHECK_FALSE(r2.valid);
    CHECK_FALSE(r2.first_violation.empty());

    // e3 polynomial against direct evaluation of its defining formula at a few n.
    const HohlovParams h{0.4, 0.3, 2.2, 0};
    const ClassParams p{1.2, 0.1, 1.5};
    const double a = h.a, b = h.b, c = h.c, al = p.alpha, g = p.gamma, d = p.delta;
    const double D = d * d - a * al * d + a * g * d + a * a * g;
    const double E = al * d - g * (d + 2 * a + 1);
    for (double n : {0.0, 1.0, 7.0, 50.0}) {
        const double num = n * n * D + n * (3 * D - a * E * (c - a - 1)) + 2 * D -
                           a * (c - a - 1) * (2 * E - g * (a + 1) * (c - a - 2));
        const double den = 2 * d * d * (c - a - b) * (c - a - b - 1);
        CHECK(hohlov_e3(h, p, n) == doctest::Approx(num / den).epsilon(1e-12));
    }
}

TEST_CASE("duality and Theorem 3")
{
    CHECK(combine_duality(0.5, 0.5) == 0.5);
    CHECK(combine_duality(0.0, 0.0) == -1.0);
    const double eps = 1e-9;
    CHECK(combine_duality(1.0 - eps, 0.3) == doctest::Approx(1.0 - 2.0 * eps * 0.7).epsilon(1e-15));
    CHECK_THROWS_AS(combine_duality(1.0, 0.0), Error);

    const BoundResult t3 = beta_thm3(HohlovParams{1.0, 0.5, 2.7, 0.0}, ClassParams{0.5, 0.0, 1.0});
    CHECK(t3.beta == doctest::Approx(2.0 * t3.diagnostic("beta2") - 1.0).epsilon(1e-15));
    CHECK_THROWS_AS(beta_thm3(HohlovParams{1.0, 0.5, 3.5, 0.0}, ClassParams{0.5, 0.0, 1.0}), Error);
}
