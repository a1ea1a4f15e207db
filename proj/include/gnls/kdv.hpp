#pragma once

#include <complex>
#include <vector>

#include "gnls/nonlinearity.hpp"

namespace gnls {

/// Transonic long-wave ansatz v_eps = (1 + eps^2 A(eps x)) e^{i eps phi(eps x)}
/// with A(x) = 3/(2k) sech^2(x/2) and phi(x) = (-3 c_s/k) tanh(x/2); k must be
/// nonzero (degenerate long-wave regime otherwise).
struct KdvField {
    std::vector<double> xs;
    std::vector<std::complex<double>> v;
    std::vector<double> amplitude;    // A(eps x)
    std::vector<double> phase;        // eps * phi(eps x)
    double eps = 0.0;
    double k = 0.0;
    double c_s = 0.0;
};

KdvField build_v_eps(const Nonlinearity& nl, double eps, double x_max, int n);

struct KdvRow {
    double eps;
    double E_num, E_pred, E_resid;
    double p_num, p_closed, p_resid;
    double q_eps;
};

struct KdvReport {
    std::vector<KdvRow> rows;
    double energy_slope = 0.0;  // fitted log-log slope of |E_num - E_pred| vs eps
    double k = 0.0, c_s = 0.0;
    double K1 = 0.0;            // 9 (k^2)^{2/3} / (5 (6 c_s)^{5/3})
};

/// Integrates E and p of the ansatz by trapezoid quadrature on a grid with
/// x_max = 30/eps (exponentially decaying smooth integrands), compares the
/// momentum against its closed form 6 c_s/k^2 (eps^3 + 3/(5k) eps^5) and the
/// energy against 6 c_s^2/k^2 eps^3 - 18/(5 k^3)(f''(1)+5 f'(1)) eps^5, and
/// fits the residual decay order of the energy.
KdvReport verify_expansions(const Nonlinearity& nl, const std::vector<double>& eps_list,
                            int n = 1 << 15);

struct MomentumParameterization {
    double q_eps = 0.0;
    double s_eps = 0.0;  // k^2 q_eps / (6 c_s) = eps^3 + 3/(5k) eps^5
    bool bracket_ok = false;  // for k < 0: (2/5) eps^3 <= s_eps <= eps^3
};

MomentumParameterization momentum_parameterization(const Nonlinearity& nl, double eps);

}  // namespace gnls
