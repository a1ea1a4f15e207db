#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnls/nonlinearity.hpp"

namespace gnls {

/// N_c(xi) = c^2 xi^2 - 4 (1-xi) F(1-xi), evaluated exactly from the
/// coefficients. Travelling waves of speed c correspond to the first simple
/// zero xi_c of N_c in (0,1] with N_c < 0 before it.
double eval_Nc(const Nonlinearity& nl, double c, double xi);

struct RootOptions {
    int mesh_points = 4096;
    double root_tol_scale = 1e-13;        // |P(xi_c)| <= scale * max(1, c^2)
    double degeneracy_floor_scale = 1e-8; // N_c'(xi_c) > scale * c_s^2
    double interior_floor_scale = 1e-7;   // interior local maxima of P stay below -scale * c_s^2
};

struct RootResult {
    enum class Status { ok, not_found, degenerate };
    Status status = Status::not_found;
    double xi_c = 0.0;
    double dN_at_root = 0.0;                // N_c'(xi_c)
    std::vector<double> sign_changes;        // every mesh sign change, ascending
    std::string detail;

    bool ok() const { return status == Status::ok; }
};

/// Finds the smallest admissible zero of N_c for 0 <= c < c_s. Scans
/// P(xi) = N_c(xi)/xi^2 on a fine mesh for the first sign change, refines by
/// bisection, then certifies the simple-root condition and the strict
/// negativity of P on the sampled interior. c = 0 uses xi_c = 1 directly.
RootResult find_xi_c(const Nonlinearity& nl, double c, const RootOptions& opts = {});

struct WavePoint {
    double c = 0.0;
    double xi_c = 0.0;
    double E = 0.0;
    double p = 0.0;
    double dN_at_root = 0.0;
    bool p_is_untwisted = false;  // c = 0: the mod-pi representative pi/2
};

struct EnergyMomentum {
    double E = 0.0;
    double p = 0.0;
    long evaluations = 0;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DecayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PhaseSingularity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Energy and momentum of the wave (c, xi_c) by the closed integral formulas,
/// after the substitution xi = xi_c sin^2(theta) and synthetic deflation of
/// the simple root, which leaves analytic integrands:
///   E = 4 sqrt(xi_c) int_0^{pi/2} xi G(xi) sin(theta) / sqrt(Q(xi)) dtheta
///   p = c sqrt(xi_c) int_0^{pi/2} xi sin(theta) / ((1-xi) sqrt(Q(xi))) dtheta
/// with Q(xi) = P(xi)/(xi - xi_c) > 0 on [0, xi_c]. For c = 0 the momentum
/// integral is skipped and the mod-pi representative pi/2 is reported.
EnergyMomentum energy_momentum(const Nonlinearity& nl, double c, double xi_c,
                               double rel_tol = 1e-10);

struct SolitonProfile {
    std::vector<double> xs;                  // symmetric about 0, uniform
    std::vector<double> eta;                 // 1 - |v|^2
    std::vector<double> phi;                 // phase, phi(0) = 0, odd
    std::vector<std::complex<double>> v;
    double c = 0.0;
    double xi_c = 0.0;
};

/// Spatial profile via the quadrature map x(eta) = int_eta^{xi_c} dz/sqrt(-N_c(z)),
/// inverted onto a uniform grid by monotone interpolation. Phase from
/// phi' = c eta / (2 (1-eta)), trapezoid-integrated with phi(0) = 0.
/// n is the number of points on [0, x_max]; the grid has 2n+1 points.
SolitonProfile reconstruct_profile(const Nonlinearity& nl, double c, double xi_c,
                                   double x_max, int n);

/// x beyond which eta < threshold, from the quadrature map (not the decay-rate
/// estimate); used to pick grid extents.
double profile_extent(const Nonlinearity& nl, double c, double xi_c,
                      double eta_threshold = 1e-9);

/// E and p recomputed from a profile by direct spatial integration of
/// e(v) = |v'|^2/2 + F(|v|^2)/2 and p = (1/2) int eta phi'. Cross-checks the
/// xi-space integrals.
EnergyMomentum profile_energy_momentum(const SolitonProfile& prof, const Nonlinearity& nl);

struct AppendixAudit {
    // (a) pointwise sqrt(F(rho^2)) |phi'| <= e(v)/rho   (c > 0 only)
    std::optional<double> pointwise_margin;
    // (b) |p| <= E / sqrt(4 lambda (1-eps)), eps = max eta   (c > 0 only)
    std::optional<double> momentum_margin;
    // (c) ||eta||_inf^2 <= E (64/lambda + (16/sqrt(lambda)) E)
    double eta_bound_margin = 0.0;
    double lambda = 0.0;
    bool all_hold(double tol = 1e-9) const {
        return (!pointwise_margin || *pointwise_margin >= -tol) &&
               (!momentum_margin || *momentum_margin >= -tol) && eta_bound_margin >= -tol;
    }
};

/// Checks the a-priori energy estimates on a sampled profile and returns the
/// worst margins (nonnegative = inequality holds).
AppendixAudit appendix_a_audit(const SolitonProfile& prof, const Nonlinearity& nl);

struct BranchPointFailure {
    double c;
    std::string reason;
};

struct Branch {
    std::vector<WavePoint> points;                   // sorted by c
    std::vector<double> dE_dc, dp_dc;                // same length as points
    std::vector<std::string> flags;                  // same length as points
    std::vector<std::pair<double, double>> gaps;     // speed intervals without admissible xi_c
    std::vector<BranchPointFailure> failures;
};

struct ScanOptions {
    double quad_rel_tol = 1e-10;
    RootOptions root;
    double jump_threshold = 0.05;  // |delta xi_c| between neighbours that triggers gap refinement
    bool refine_jumps = true;
};

/// Scans a strictly increasing speed grid inside [0, c_s). Per-point failures
/// become gap intervals instead of aborting. Discontinuities of xi_c between
/// neighbouring grid points are refined by bisection to locate the
/// inadmissible window. Centered finite differences for dE/dc and dp/dc, with
/// one-sided stencils at branch ends and across gaps; points where
/// dp/dc >= 0 are flagged (stability sign condition violated).
Branch scan_branch(const Nonlinearity& nl, const std::vector<double>& c_grid,
                   const ScanOptions& opts = {});

}  // namespace gnls
