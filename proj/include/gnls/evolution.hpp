#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "gnls/branch.hpp"
#include "gnls/nonlinearity.hpp"

namespace gnls {

struct SeamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LedgerRow {
    double t = 0.0;
    double E = 0.0;
    double p = 0.0;            // renormalized momentum; NaN when suppressed
    bool p_defined = false;    // false once min |psi| < 0.1
    double p_untwisted = 0.0;  // mod-pi momentum over the tracked half-domain
    double min_mod = 0.0;
    double center = 0.0;       // unwrapped center of the tracked dip
};

/// Complex field on the uniform periodic grid x_i = -L + 2L i/N, i < N.
struct EvolutionState {
    double L = 0.0;
    int N = 0;
    std::vector<std::complex<double>> psi;
    double t = 0.0;
    double tracked_center = 0.0;
    std::vector<LedgerRow> ledger;

    double dx() const { return 2.0 * L / N; }
    double x_at(int i) const { return -L + dx() * i; }
};

/// Periodic initial datum: the wave at x = -L/2 and its complex conjugate
/// (the counter-propagating wave) at x = +L/2, multiplied so the total phase
/// winding over the period vanishes and the seam is smooth to the decay
/// level. Requires N a power of two and a decayed profile.
EvolutionState init_pair(const SolitonProfile& profile, double L, int N);

/// Strang splitting for i psi_t + psi_xx + psi f(|psi|^2) = 0: exact
/// pointwise nonlinear phase half-steps around an exact spectral linear step.
class StrangStepper {
public:
    StrangStepper(const Nonlinearity& nl, EvolutionState state, double dt);
    ~StrangStepper();
    StrangStepper(const StrangStepper&) = delete;
    StrangStepper& operator=(const StrangStepper&) = delete;

    void advance(long n_steps);
    /// advance while appending a ledger row every `ledger_every` steps
    /// (including one for the initial state if the ledger is empty).
    void run(long n_steps, long ledger_every);
    LedgerRow record();

    const EvolutionState& state() const { return state_; }
    EvolutionState& state() { return state_; }
    double dt() const { return dt_; }
    void set_dt(double dt);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    EvolutionState state_;
    Nonlinearity nl_;
    double dt_;
};

/// Grid energy int (|psi_x|^2 + F(|psi|^2))/2 with a spectral derivative.
double grid_energy(const EvolutionState& state, const Nonlinearity& nl);

struct GridMomentum {
    double p = 0.0;
    bool defined = false;
    double min_mod = 0.0;
};

/// Renormalized momentum (1/2) int <psi, i psi_x> (1 - 1/|psi|^2); suppressed
/// (defined = false) when min |psi| < 0.1.
GridMomentum grid_momentum(const EvolutionState& state);

/// Mod-pi momentum over the tracked half-domain, evaluated at the half-domain
/// edges R = center +- L/2:
///   [ (1/2) int <i psi', psi> + (arg psi(R) - arg psi(-R))/2 ]  mod pi.
/// Throws BoundaryError if |psi| deviates from 1 by more than 0.05 at the edges.
double untwisted_momentum(const EvolutionState& state);

/// Locates the maximum of 1 - |psi|^2 near the previous center (parabolic
/// sub-grid refinement, torus-unwrapped continuity).
double track_center(const EvolutionState& state, double previous_center);

struct OrbitDistance {
    double d = 0.0;
    double a_opt = 0.0;
    double theta_opt = 0.0;
    double A = 0.0;
};

/// Modulated distance min_{a,theta} of e^{i theta} psi(. - a) to the embedded
/// reference wave: sup norm on the window [-A, A] around the tracked dip plus
/// L2 norms of the derivative difference and the modulus-squared difference
/// over the tracked half-domain. Coarse (a, theta) grid then golden-section
/// refinement per coordinate.
OrbitDistance orbit_distance(const EvolutionState& state, const SolitonProfile& reference,
                             double A);

/// max over the tracked half-domain of |rho^2 phi' - (c/2) eta|.
double madelung_residual(const EvolutionState& state, double c);

/// psi += amp * exp(-((x-x0)/width)^2) * e^{i phase} (smooth localized bump).
void add_gaussian_bump(EvolutionState& state, double amp, double x0, double width, double phase);

}  // namespace gnls
