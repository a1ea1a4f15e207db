#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gnls/branch.hpp"
#include "gnls/nonlinearity.hpp"

namespace gnls {

/// Energy of the stationary kink: E0 = int_0^1 sqrt(F(1-xi)/(1-xi)) dxi, via
/// the substitution xi = 1 - t^2 (the integrand is then smooth).
double black_soliton_energy(const Nonlinearity& nl, double rel_tol = 1e-11);

enum class QStarMethod { monotone_limit, envelope_hit, tangent_extrapolation, bound_bracket };

const char* to_string(QStarMethod m);

enum class CurveSource { branch, plateau, bound };

struct MinCurve {
    std::vector<double> qs;            // increasing momentum grid
    std::vector<double> Emin;
    std::vector<CurveSource> source;
    std::vector<double> delta_p;       // 1 - Emin/(c_s q)
    double E0 = 0.0;                   // kink energy (plateau level)
    double q_star = 0.0;
    QStarMethod q_star_method = QStarMethod::bound_bracket;
    std::optional<double> q_star_alternative;  // second method when available
    double c_s = 0.0;
};

struct AsymptoteFit {
    double c0 = 0.0;            // gap-edge speed
    double intercept = 0.0;     // median of E - c0 p near the gap, lower branch
    double spread = 0.0;        // max - min over the fitted window
    int points_used = 0;
};

struct NoGapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Slope/intercept of the line both branch ends approach at a speed gap.
/// c0 is the gap edge (already bisection-refined by the scan); the intercept
/// is the median of E - c0 p over the last points of the lower-energy
/// sub-branch next to the gap.
AsymptoteFit fit_asymptote(const Nonlinearity& nl, const Branch& branch);

/// Momentum where the asymptote line reaches the kink energy:
/// p* = (E0_black - intercept) / c0.
double tangent_q_star(double c0, double intercept, double E0_black);

/// Minimization-curve estimate from branch data: per grid momentum, the
/// minimum of monotone piecewise-linear interpolants over monotone-in-p
/// sub-branches, capped above by the kink energy E0. q_* by the first
/// applicable of: momentum limit of a fully stable branch (dp/dc < 0
/// throughout), tangent extrapolation across a gap, envelope hit of the E0
/// plateau.
MinCurve build_min_curve(const Nonlinearity& nl, const Branch& branch, double E0,
                         const std::vector<double>& q_grid);

struct CurveCertification {
    bool lipschitz_ok = false;
    double lipschitz_margin = 0.0;      // min over pairs of c_s|dq| - |dE|
    bool monotone_ok = false;
    double monotone_margin = 0.0;
    bool concavity_ok = false;
    double concavity_margin = 0.0;      // min over interior of slope decrease
    bool subadditive_ok = false;
    double subadditive_margin = 0.0;    // min over sampled pairs of E(p)+E(q)-E(p+q)
    double fitted_exponent = 0.0;       // alpha in c_s q - Emin ~ q^alpha on the small-q tail
    int exponent_points = 0;
    double h_at_q_star = 0.0;           // h(q) = 8q + 4 sqrt(4q^2 + q)
    double h_at_1_32 = 0.0;
    bool q_star_above_1_32 = false;
};

CurveCertification certify_curve_properties(const MinCurve& curve, const Nonlinearity& nl,
                                            double fit_q_lo = 1e-3, double fit_q_hi = 5e-2);

/// h(q) = 8q + 4 sqrt(4 q^2 + q); h(1/32) = 1 exactly.
double h_of_q(double q);

struct SequencePoint {
    double p = 0.0;
    double E = 0.0;
};

/// Test map v_n = (1 - (1/n) chi'(b_n x)) e^{i c_s (1/(n b_n)) chi(b_n x)} built
/// from a fixed smooth compactly supported bump chi scaled so that
/// int (chi')^2 = |q|/c_s; b_n = n^{-2} (1 - c_s a/(2|q| n)), a = int (chi')^3.
/// Has p = q exactly and E -> c_s |q|. Negative q flips the phase sign.
SequencePoint lemma21_sequence(const Nonlinearity& nl, double q, int n);

/// Splice of the kink with a phase ramp on |x| <= 1/n carrying momentum q:
/// modulus frozen at |v0(1/n)| inside, phase jump -2 q_n with
/// q_n = q/(1 - |v0(1/n)|^2). Has p = q and E -> E(v0).
SequencePoint prop33_sequence(const SolitonProfile& profile_v0, const Nonlinearity& nl, double q,
                              int n);

}  // namespace gnls
