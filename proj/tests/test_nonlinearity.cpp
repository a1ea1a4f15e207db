#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gnls/nonlinearity.hpp"
#include "gnls/rng.hpp"

using gnls::Nonlinearity;

TEST_CASE("polynomial evaluation") {
    Nonlinearity gp({1.0});
    CHECK(gp.f(0.0) == 1.0);
    CHECK(gp.f(1.0) == 0.0);
    CHECK(gp.F(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gp.F(1.0) == 0.0);

    Nonlinearity cubic({4.0, 0.0, 36.0});
    CHECK(cubic.f(0.0) == 40.0);
    CHECK(cubic.F(0.0) == doctest::Approx(11.0).epsilon(1e-15));  // 2 u^2 + 9 u^4 at u=1
    CHECK(cubic.F(1.0) == 0.0);
    // termwise antiderivative at an arbitrary point
    const double rho = 0.37, u = 1.0 - rho;
    CHECK(cubic.F(rho) == doctest::Approx(2 * u * u + 9 * u * u * u * u).epsilon(1e-15));
}

TEST_CASE("constructor rejects bad coefficients") {
    CHECK_THROWS(Nonlinearity({}));
    CHECK_THROWS(Nonlinearity({-1.0}));
    CHECK_THROWS(Nonlinearity({0.0, 2.0}));
}

TEST_CASE("structural constants") {
    Nonlinearity gp({1.0});
    CHECK(gp.sound_speed() == std::sqrt(2.0));
    CHECK(gp.kdv_k() == -6.0);
    CHECK(gp.gamma() == 6.0);

    Nonlinearity cubic({4.0, 0.0, 36.0});
    CHECK(cubic.sound_speed() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(cubic.kdv_k() == -24.0);

    // only a_1 and a_2 enter k
    std::vector<double> high(19, 0.0);
    high[0] = 1.0;
    high[18] = 120.0;
    Nonlinearity deg19(high);
    CHECK(deg19.sound_speed() == std::sqrt(2.0));
    CHECK(deg19.kdv_k() == -6.0);
}

TEST_CASE("scaling consistency of the constants") {
    gnls::Rng rng(12345);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + int(rng.uniform() * 5);
        std::vector<double> a(d);
        a[0] = 0.2 + rng.uniform() * 3.0;
        for (int j = 1; j < d; ++j) a[j] = rng.uniform(-2.0, 2.0);
        const double s = 0.1 + rng.uniform() * 5.0;
        std::vector<double> as(a);
        for (double& v : as) v *= s;
        Nonlinearity nl(a), nls(as);
        CHECK(nls.sound_speed() ==
              doctest::Approx(std::sqrt(s) * nl.sound_speed()).epsilon(1e-13));
        CHECK(nls.kdv_k() == doctest::Approx(s * nl.kdv_k()).epsilon(1e-13));
    }
}

TEST_CASE("F' = -f (finite differences)") {
    gnls::Rng rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + int(rng.uniform() * 6);
        std::vector<double> a(d);
        a[0] = 0.3 + rng.uniform() * 2.0;
        for (int j = 1; j < d; ++j) a[j] = rng.uniform(-3.0, 3.0);
        Nonlinearity nl(a);
        const double rho = rng.uniform() * 3.0;
        const double h = 1e-3;
        // five-point stencil
        const double fd = (-nl.F(rho + 2 * h) + 8 * nl.F(rho + h) - 8 * nl.F(rho - h) +
                           nl.F(rho - 2 * h)) /
                          (12 * h);
        const double scale = std::max(1.0, std::abs(nl.f(rho)));
        CHECK(std::abs(fd + nl.f(rho)) <= 1e-10 * scale);
    }
}

TEST_CASE("F vanishes to second order at rho = 1") {
    Nonlinearity nl({2.0, -1.0, 3.0});
    CHECK(nl.F(1.0) == 0.0);
    // dF/drho(1) = -f(1) = 0 exactly: lowest term of F in u is u^2
    CHECK(nl.f(1.0) == 0.0);
    CHECK(nl.G(0.0) == doctest::Approx(1.0).epsilon(1e-15));  // a_1/2
}

TEST_CASE("hypothesis certification") {
    using gnls::check_hypotheses;

    SUBCASE("quadratic lower bound with exact margin") {
        auto rep = check_hypotheses(Nonlinearity({4.0, 0.0, 36.0}));
        CHECK(rep.h1_holds);
        CHECK(rep.h1_margin >= 0.0);  // F - 2 u^2 = 9 u^4
        CHECK(rep.h2_holds);
        CHECK(rep.h2_exponent == 4);
        CHECK(rep.lambda == doctest::Approx(2.0));
    }

    SUBCASE("cubic case: margin zero, h3 = -3") {
        auto rep = check_hypotheses(Nonlinearity({1.0}));
        CHECK(rep.h1_holds);
        CHECK(rep.h1_margin == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(rep.h3_holds);
        CHECK(rep.h3_value == -3.0);
        CHECK_FALSE(rep.remark18.has_value());
    }

    SUBCASE("one-parameter family bound") {
        std::vector<double> a(59, 0.0);
        a[0] = 1.0;
        a[58] = 10.0;  // extra term (1-rho)^59, p = 30
        auto rep = check_hypotheses(Nonlinearity(a));
        REQUIRE(rep.remark18.has_value());
        CHECK(*rep.remark18);
        CHECK(*rep.remark18_p == 30);

        std::vector<double> b(19, 0.0);
        b[0] = 1.0;
        b[18] = 120.0;  // a = 120 exceeds the bound for p = 10
        auto rep2 = check_hypotheses(Nonlinearity(b));
        REQUIRE(rep2.remark18.has_value());
        CHECK_FALSE(*rep2.remark18);
    }

    SUBCASE("degenerate long-wave coefficient") {
        // 4 a_2 = 6 a_1  =>  k = 0  =>  h3 fails
        auto rep = check_hypotheses(Nonlinearity({2.0, 3.0}));
        CHECK_FALSE(rep.h3_holds);
        CHECK(rep.h3_value == 0.0);
    }

    SUBCASE("parameter validation") {
        CHECK_THROWS(check_hypotheses(Nonlinearity({1.0}), 1.5));
        CHECK_THROWS(check_hypotheses(Nonlinearity({1.0}), 3.0, 10));
    }
}
