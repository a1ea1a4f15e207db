#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gnls/branch.hpp"
#include "gnls/evolution.hpp"
#include "gnls/fft.hpp"
#include "gnls/nonlinearity.hpp"

using namespace gnls;

namespace {
Nonlinearity gp() { return Nonlinearity({1.0}); }

SolitonProfile gp_profile(double c, int n = 4096) {
    auto r = find_xi_c(gp(), c);
    REQUIRE(r.ok());
    const double xmax = profile_extent(gp(), c, r.xi_c) * 1.05;
    return reconstruct_profile(gp(), c, r.xi_c, xmax, n);
}
}  // namespace

TEST_CASE("periodic pair construction") {
    SUBCASE("zero winding and clean seam") {
        auto prof = gp_profile(0.5);
        auto st = init_pair(prof, 64.0, 2048);
        CHECK(st.psi.size() == 2048);
        // total winding: accumulated phase increments over the period
        double winding = 0.0;
        for (int i = 0; i < st.N; ++i)
            winding += std::arg(st.psi[(i + 1) % st.N] / st.psi[i]);
        CHECK(std::abs(winding) < 1e-10);
        // two dips of equal depth
        int dips = 0;
        for (int i = 0; i < st.N; ++i) {
            const double eta = 1.0 - std::norm(st.psi[i]);
            const double etap = 1.0 - std::norm(st.psi[(i + 1) % st.N]);
            const double etam = 1.0 - std::norm(st.psi[(i - 1 + st.N) % st.N]);
            if (eta > 0.5 && eta >= etam && eta > etap) ++dips;
        }
        CHECK(dips == 2);
    }
    SUBCASE("kink pair is real with two zeros") {
        auto prof = reconstruct_profile(gp(), 0.0, 1.0, 20.0, 4096);
        auto st = init_pair(prof, 56.0, 2048);
        double max_imag = 0.0;
        int zeros = 0;
        for (int i = 0; i < st.N; ++i) {
            max_imag = std::max(max_imag, std::abs(st.psi[i].imag()));
            if (std::abs(st.psi[i]) < 0.05) ++zeros;
        }
        CHECK(max_imag < 1e-9);
        CHECK(zeros >= 2);
        CHECK(zeros <= 8);
    }
    SUBCASE("decay too slow for the box") {
        auto prof = gp_profile(0.5);
        CHECK_THROWS_AS(init_pair(prof, 8.0, 256), SeamError);
        CHECK_THROWS(init_pair(prof, 64.0, 1000));  // not a power of two
    }
}

TEST_CASE("constant field is a fixed point") {
    EvolutionState st;
    st.L = 16.0;
    st.N = 256;
    st.psi.assign(256, {1.0, 0.0});
    StrangStepper stepper(gp(), std::move(st), 1e-3);
    stepper.advance(200);
    double worst = 0.0;
    for (const auto& z : stepper.state().psi) worst = std::max(worst, std::abs(z - 1.0));
    CHECK(worst < 1e-13);
}

TEST_CASE("travelling wave translates rigidly") {
    auto prof = gp_profile(0.5);
    auto st = init_pair(prof, 64.0, 2048);
    StrangStepper stepper(gp(), std::move(st), 1e-3);
    stepper.run(5000, 1000);  // T = 5
    const auto& led = stepper.state().ledger;
    REQUIRE(led.size() >= 2);
    const double displacement = led.back().center - led.front().center;
    // u(x + ct): the dip moves toward negative x by c T
    const double width = 2.0 / std::sqrt(2.0 - 0.25);
    CHECK(std::abs(displacement + 0.5 * 5.0) < 0.01 * width);
    // conservation over the short run
    const double drift = std::abs(led.back().E - led.front().E) / led.front().E;
    CHECK(drift < 1e-9);
    CHECK(led.back().p_defined);
    CHECK(std::abs(led.back().p - led.front().p) < 1e-9);
    // phase relation persists: residual stays near its initial size
    const double res = madelung_residual(stepper.state(), 0.5);
    CHECK(res < 5e-3);
}

TEST_CASE("energy and momentum read correctly at t = 0") {
    auto prof = gp_profile(0.8);
    auto st = init_pair(prof, 64.0, 4096);
    const double E_grid = grid_energy(st, gp());
    auto em = energy_momentum(gp(), 0.8, find_xi_c(gp(), 0.8).xi_c);
    // two waves in the box: e(psi) integrates to twice the single energy
    CHECK(E_grid == doctest::Approx(2.0 * em.E).epsilon(1e-6));  // trapezoid phase floor
    // momenta of the conjugate pair cancel
    auto gm = grid_momentum(st);
    CHECK(gm.defined);
    CHECK(std::abs(gm.p) < 1e-10);
}

TEST_CASE("untwisted momentum") {
    SUBCASE("constant phase field has none") {
        EvolutionState st;
        st.L = 16.0;
        st.N = 512;
        st.psi.assign(512, std::polar(1.0, 0.9));
        st.tracked_center = -8.0;
        CHECK(untwisted_momentum(st) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("embedded kink pair carries pi/2") {
        auto prof = reconstruct_profile(gp(), 0.0, 1.0, 20.0, 4096);
        auto st = init_pair(prof, 56.0, 2048);
        CHECK(untwisted_momentum(st) == doctest::Approx(M_PI / 2).epsilon(1e-6));
    }
    SUBCASE("embedded moving wave matches its momentum mod pi") {
        auto prof = gp_profile(1.0);
        auto st = init_pair(prof, 64.0, 4096);
        CHECK(untwisted_momentum(st) == doctest::Approx(M_PI / 4 - 0.5).epsilon(1e-6));
    }
    SUBCASE("boundary modulus guard") {
        auto prof = gp_profile(0.5);
        auto st = init_pair(prof, 64.0, 2048);
        st.tracked_center = 0.0;  // half-domain edge lands on the companion dip
        CHECK_THROWS_AS(untwisted_momentum(st), BoundaryError);
    }
}

TEST_CASE("orbit distance") {
    auto prof = gp_profile(0.5);
    SUBCASE("self distance sits at the numerical floor") {
        auto st = init_pair(prof, 64.0, 2048);
        auto od = orbit_distance(st, prof, 8.0);
        CHECK(od.d < 1e-8);
        CHECK(std::abs(od.a_opt) < 1e-6);
        CHECK(std::abs(od.theta_opt) < 1e-6);
    }
    SUBCASE("planted translation and rotation are recovered") {
        auto st = init_pair(prof, 64.0, 2048);
        // translate by 1.3 (spectral, exact for the band-limited field) and
        // rotate by 0.7
        Fft fft(st.N);
        fft.forward(st.psi.data());
        const auto k = Fft::wavenumbers(st.N, 2.0 * st.L);
        for (int i = 0; i < st.N; ++i)
            st.psi[i] *= std::polar(1.0, -k[i] * 1.3);
        fft.backward(st.psi.data());
        for (auto& z : st.psi) z *= std::polar(1.0, 0.7);
        st.tracked_center = track_center(st, st.tracked_center);
        auto od = orbit_distance(st, prof, 8.0);
        CHECK(od.d < 1e-7);
        CHECK(od.a_opt == doctest::Approx(1.3).epsilon(1e-4));
        CHECK(od.theta_opt == doctest::Approx(0.7).epsilon(1e-4));
    }
    SUBCASE("window must fit") {
        auto st = init_pair(prof, 64.0, 2048);
        CHECK_THROWS_AS(orbit_distance(st, prof, 40.0), WindowError);
    }
}

TEST_CASE("gaussian bump perturbation") {
    auto prof = gp_profile(0.5);
    auto st = init_pair(prof, 64.0, 2048);
    const double E0 = grid_energy(st, gp());
    add_gaussian_bump(st, 0.01, -32.0, 1.0, 0.3);
    const double E1 = grid_energy(st, gp());
    CHECK(E1 != E0);
    CHECK(std::abs(E1 - E0) < 0.05);
    auto od = orbit_distance(st, prof, 8.0);
    CHECK(od.d > 1e-4);
    CHECK(od.d < 0.2);
}
