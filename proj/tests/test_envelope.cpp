#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gnls/envelope.hpp"
#include "oracles.hpp"

using namespace gnls;

namespace {
Nonlinearity gp() { return Nonlinearity({1.0}); }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

// default momentum grid: geometric tail + uniform body
std::vector<double> q_grid(double qmin, double qmax, int n_geo, int n_uni) {
    std::vector<double> q;
    for (int i = 0; i < n_geo; ++i)
        q.push_back(qmin * std::pow(0.12 / qmin, double(i) / (n_geo - 1)));
    for (int i = 1; i <= n_uni; ++i) q.push_back(0.12 + (qmax - 0.12) * i / n_uni);
    return q;
}

// speed grid refined toward the sonic end so the curve reaches small momenta
std::vector<double> speed_grid_with_tail(double cs, int n_body, int n_tail) {
    std::vector<double> c = linspace(0.0, cs * 0.985, n_body);
    for (int i = 0; i < n_tail; ++i) {
        const double eps = 0.35 * std::pow(0.05 / 0.35, double(i) / (n_tail - 1));
        c.push_back(std::sqrt(cs * cs - eps * eps));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}
}  // namespace

TEST_CASE("kink energy") {
    CHECK(black_soliton_energy(gp()) ==
          doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-10));

    // same value through the branch integral at c = 0
    auto em = energy_momentum(gp(), 0.0, 1.0);
    CHECK(black_soliton_energy(gp()) == doctest::Approx(em.E).epsilon(1e-10));

    // scaled coefficients: cross-checked against an independent Simpson oracle
    Nonlinearity scaled({4.0});
    const double direct = black_soliton_energy(scaled);
    const double simpson = oracle::simpson(
        [&](double t) { return 2.0 * (1 - t * t) * std::sqrt(scaled.G(1 - t * t)); }, 0.0, 1.0,
        1 << 16);
    CHECK(direct == doctest::Approx(simpson).epsilon(1e-10));

    // general coefficients vs direct profile integration
    Nonlinearity hard({4.0, 0.0, 36.0});
    const double E0 = black_soliton_energy(hard);
    CHECK(E0 == doctest::Approx(3.7511639832915806).epsilon(1e-10));
    auto prof = reconstruct_profile(hard, 0.0, 1.0, 12.0, 8192);
    auto pem = profile_energy_momentum(prof, hard);
    CHECK(std::abs(pem.E - E0) / E0 < 1e-6);
}

TEST_CASE("h(q) and the momentum floor") {
    CHECK(h_of_q(1.0 / 32.0) == 1.0);  // exact in IEEE arithmetic
    CHECK(h_of_q(0.0) == 0.0);
    // strictly increasing
    double prev = -1.0;
    for (double q = 0.0; q < 2.0; q += 0.05) {
        CHECK(h_of_q(q) > prev);
        prev = h_of_q(q);
    }
}

TEST_CASE("tangent construction") {
    CHECK(tangent_q_star(2.0, 0.5, 4.5) == doctest::Approx(2.0));
    CHECK(tangent_q_star(1.7, 3.0, 3.0) == 0.0);
    // sonic-slope line through the origin
    const double E0 = 2.0 * std::sqrt(2.0) / 3.0;
    CHECK(tangent_q_star(std::sqrt(2.0), 0.0, E0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS(tangent_q_star(0.0, 0.1, 1.0));
}

TEST_CASE("asymptote fit") {
    SUBCASE("no gap on the cubic branch") {
        auto br = scan_branch(gp(), linspace(0.0, 1.4, 60));
        CHECK_THROWS_AS(fit_asymptote(gp(), br), NoGapError);
    }
    SUBCASE("synthetic affine data is recovered exactly") {
        Branch br;
        const double c0 = 1.25, b = 0.375;
        for (int i = 0; i < 6; ++i) {  // lower sub-branch above the gap
            WavePoint w;
            w.c = c0 + 0.01 * (i + 1);
            w.p = 4.0 - 0.3 * i;
            w.E = c0 * w.p + b;
            br.points.push_back(w);
        }
        br.dE_dc.assign(br.points.size(), 0.0);
        br.dp_dc.assign(br.points.size(), -1.0);
        br.flags.assign(br.points.size(), "");
        br.gaps.emplace_back(c0, c0);
        auto fit = fit_asymptote(Nonlinearity({1.0}), br);
        CHECK(fit.c0 == doctest::Approx(c0).epsilon(1e-15));
        CHECK(fit.intercept == doctest::Approx(b).epsilon(1e-13));
    }
    SUBCASE("gapped cubic-quintic example") {
        Nonlinearity nl({4.0, 0.0, 36.0});
        // sample the lower branch densely next to the gap
        std::vector<double> grid = linspace(0.05, 2.72, 140);
        const double c0_true = 2.7362017032229793;
        for (int i = 1; i <= 24; ++i) grid.push_back(c0_true + 1e-4 + 2.8e-3 * i);
        std::sort(grid.begin(), grid.end());
        auto br = scan_branch(nl, grid);
        REQUIRE_FALSE(br.gaps.empty());
        auto fit = fit_asymptote(nl, br);
        CHECK(fit.c0 == doctest::Approx(c0_true).epsilon(1e-5));
        // limit intercept of E - c0 p on the lower branch (own oracle value)
        CHECK(fit.intercept == doctest::Approx(0.0012106016).epsilon(0.25));
        const double E0 = black_soliton_energy(nl);
        const double pstar = tangent_q_star(fit.c0, fit.intercept, E0);
        CHECK(pstar == doctest::Approx(1.3704959606).epsilon(0.002));
        CHECK(std::abs(pstar - 1.37) / 1.37 < 0.05);
    }
}

TEST_CASE("minimization curve: cubic nonlinearity") {
    auto cg = speed_grid_with_tail(std::sqrt(2.0), 320, 60);
    auto br = scan_branch(gp(), cg);
    const double E0 = black_soliton_energy(gp());
    auto curve = build_min_curve(gp(), br, E0, q_grid(5e-4, 1.8, 120, 300));

    CHECK(curve.q_star_method == QStarMethod::monotone_limit);
    CHECK(curve.q_star == doctest::Approx(M_PI / 2).epsilon(1e-3 / (M_PI / 2)));

    // curve matches the closed-form branch energy parameterized by momentum
    for (std::size_t i = 0; i < curve.qs.size(); ++i) {
        const double q = curve.qs[i];
        if (q < 2e-3 || q > M_PI / 2 - 0.01) continue;
        // invert q = p(c) by bisection on the closed form
        double lo = 0.0, hi = std::sqrt(2.0) - 1e-12;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (oracle::gp_momentum(mid) > q ? lo : hi) = mid;
        }
        const double Eref = oracle::gp_energy(0.5 * (lo + hi));
        CHECK(std::abs(curve.Emin[i] - Eref) <= 1e-4);
    }

    // bounds and plateau
    for (std::size_t i = 0; i < curve.qs.size(); ++i) {
        CHECK(curve.Emin[i] <= std::sqrt(2.0) * curve.qs[i] + 1e-12);
        CHECK(curve.Emin[i] <= E0 + 1e-12);
        if (curve.qs[i] >= curve.q_star)
            CHECK(curve.Emin[i] == doctest::Approx(E0).epsilon(1e-9));
        if (curve.qs[i] > 0 && curve.source[i] == CurveSource::branch)
            CHECK(curve.delta_p[i] > 0.0);
    }

    auto cert = certify_curve_properties(curve, gp());
    CHECK(cert.lipschitz_ok);
    CHECK(cert.monotone_ok);
    CHECK(cert.concavity_ok);
    CHECK(cert.subadditive_ok);
    CHECK(cert.subadditive_margin > 0.0);
    CHECK(cert.fitted_exponent == doctest::Approx(5.0 / 3.0).epsilon(0.03));
    CHECK(cert.q_star_above_1_32);
    CHECK(cert.h_at_1_32 == 1.0);
}

TEST_CASE("minimization curve: one-parameter family") {
    SUBCASE("small coefficient keeps the cubic shape") {
        std::vector<double> a(59, 0.0);
        a[0] = 1.0;
        a[58] = 10.0;
        Nonlinearity nl(a);
        auto br = scan_branch(nl, speed_grid_with_tail(std::sqrt(2.0), 240, 40));
        for (double d : br.dp_dc) CHECK(d < 0.0);
        const double E0 = black_soliton_energy(nl);
        auto curve = build_min_curve(nl, br, E0, q_grid(1e-3, 1.8, 80, 200));
        CHECK(curve.q_star_method == QStarMethod::monotone_limit);
        CHECK(curve.q_star == doctest::Approx(M_PI / 2).epsilon(1e-3));
    }
    SUBCASE("large coefficient produces a cusp and pushes the transition up") {
        std::vector<double> a(19, 0.0);
        a[0] = 1.0;
        a[18] = 120.0;
        Nonlinearity nl(a);
        auto br = scan_branch(nl, speed_grid_with_tail(std::sqrt(2.0), 280, 40));
        bool sign_change = false;
        for (std::size_t i = 1; i < br.dp_dc.size(); ++i)
            if (br.dp_dc[i - 1] * br.dp_dc[i] < 0) sign_change = true;
        CHECK(sign_change);
        const double E0 = black_soliton_energy(nl);
        CHECK(E0 == doctest::Approx(1.8016059835875469).epsilon(1e-8));
        auto curve = build_min_curve(nl, br, E0, q_grid(1e-3, 4.0, 80, 400));
        CHECK(curve.q_star_method == QStarMethod::envelope_hit);
        CHECK(curve.q_star > M_PI / 2);
        CHECK(curve.q_star == doctest::Approx(2.3042842).epsilon(0.01));  // own oracle
    }
}

TEST_CASE("energy test sequences") {
    SUBCASE("constrained maps approach the sonic line") {
        const double q = 0.3, cs = std::sqrt(2.0);
        double prev_err = 1e9;
        for (int n : {8, 16, 32}) {
            auto sp = lemma21_sequence(gp(), q, n);
            CHECK(sp.p == doctest::Approx(q).epsilon(1e-8));
            const double err = sp.E - cs * q;
            CHECK(err > 0.0);
            CHECK(err < prev_err / 2.0);
            prev_err = err;
        }
    }
    SUBCASE("zero and negative momentum") {
        auto z = lemma21_sequence(gp(), 0.0, 4);
        CHECK(z.p == 0.0);
        CHECK(z.E == 0.0);
        auto m = lemma21_sequence(gp(), -0.3, 64);
        CHECK(m.p == doctest::Approx(-0.3).epsilon(1e-8));
        CHECK(m.E == doctest::Approx(std::sqrt(2.0) * 0.3).epsilon(6e-3));
    }
    SUBCASE("kink splice pins the plateau") {
        auto prof = reconstruct_profile(gp(), 0.0, 1.0, 22.0, 16384);
        const double E0 = 2.0 * std::sqrt(2.0) / 3.0;
        double prev_err = 1e9;
        for (int n : {16, 64, 256}) {
            auto sp = prop33_sequence(prof, gp(), 2.0, n);
            CHECK(sp.p == doctest::Approx(2.0).epsilon(1e-12));
            const double err = std::abs(sp.E - E0);
            CHECK(err < prev_err / 2.0);
            prev_err = err;
        }
        CHECK(prev_err < 0.05);
        // fixed n, q -> 0: the ramp leaves only the O(1/n) freezing defect
        auto tiny = prop33_sequence(prof, gp(), 1e-6, 64);
        CHECK(std::abs(tiny.E - E0) < 1.0 / 64.0);
        auto tinier = prop33_sequence(prof, gp(), 1e-6, 1024);
        CHECK(std::abs(tinier.E - E0) < 1.0 / 1024.0);
    }
}
