#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gnls/interp.hpp"
#include "gnls/quadrature.hpp"

using gnls::integrate_adaptive;

TEST_CASE("polynomials and trig") {
    auto r = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("square-root endpoint after substitution") {
    // int_0^1 dx/sqrt(x) = 2 via x = t^2
    auto r = integrate_adaptive([](double t) { return 2.0; }, 0.0, 1.0, 1e-12);
    CHECK(r.value == doctest::Approx(2.0));
    // and the raw singular integrand still converges adaptively (slowly)
    auto s = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x + 1e-14); }, 0.0, 1.0,
                                1e-8);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("oscillatory integrand refines adaptively") {
    auto r = integrate_adaptive([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0, 1e-11);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sin(40.0) / 40.0).epsilon(1e-10));
    CHECK(r.evaluations > 120);  // had to split
}

TEST_CASE("empty interval") {
    auto r = integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0, 1e-10);
    CHECK(r.value == 0.0);
    CHECK(r.converged);
}

TEST_CASE("trapezoid on a decaying smooth function is spectrally accurate") {
    const double L = 30.0;
    const int n = 512;
    std::vector<double> y(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = -L + 2 * L * i / n;
        y[i] = std::exp(-x * x / 4.0);
    }
    const double got = gnls::trapezoid_uniform(y, 2 * L / n);
    CHECK(got == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("monotone cubic interpolation") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 40; ++i) {
        const double x = i / 40.0 * 3.0;
        xs.push_back(x);
        ys.push_back(std::tanh(x));
    }
    gnls::MonotoneCubic itp(xs, ys);
    for (double x = 0.05; x < 3.0; x += 0.17)
        CHECK(itp(x) == doctest::Approx(std::tanh(x)).epsilon(1e-5));
    // monotone data stays monotone
    double prev = -1.0;
    for (double x = 0.0; x <= 3.0; x += 0.01) {
        const double v = itp(x);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
    CHECK_THROWS(gnls::MonotoneCubic({1.0, 1.0}, {0.0, 1.0}));
}
