#include "gnls/kdv.hpp"

#include <cmath>
#include <stdexcept>

#include "gnls/quadrature.hpp"

namespace gnls {

KdvField build_v_eps(const Nonlinearity& nl, double eps, double x_max, int n) {
    const double k = nl.kdv_k();
    if (k == 0.0)
        throw std::domain_error("build_v_eps: k = 2 f''(1) + 6 f'(1) vanishes (degenerate regime)");
    if (eps <= 0.0 || eps > std::min(0.5, std::sqrt(std::abs(k))))
        throw std::invalid_argument("build_v_eps: eps outside (0, min(0.5, sqrt|k|)]");
    if (eps * x_max < 30.0)
        throw std::invalid_argument("build_v_eps: grid too narrow, need eps * x_max >= 30");

    KdvField f;
    f.eps = eps;
    f.k = k;
    f.c_s = nl.sound_speed();
    f.xs.resize(n + 1);
    f.v.resize(n + 1);
    f.amplitude.resize(n + 1);
    f.phase.resize(n + 1);
    const double a0 = 3.0 / (2.0 * k);
    const double p0 = -3.0 * f.c_s / k;
    for (int i = 0; i <= n; ++i) {
        const double x = -x_max + 2.0 * x_max * double(i) / n;
        const double s = 0.5 * eps * x;
        const double sech = 1.0 / std::cosh(s);
        const double A = a0 * sech * sech;
        const double ph = eps * p0 * std::tanh(s);
        f.xs[i] = x;
        f.amplitude[i] = A;
        f.phase[i] = ph;
        f.v[i] = std::polar(1.0 + eps * eps * A, ph);
    }
    return f;
}

KdvReport verify_expansions(const Nonlinearity& nl, const std::vector<double>& eps_list, int n) {
    if (eps_list.size() < 4)
        throw std::invalid_argument("verify_expansions: need at least 4 eps values");
    KdvReport rep;
    rep.k = nl.kdv_k();
    rep.c_s = nl.sound_speed();
    const double k = rep.k, cs = rep.c_s;
    rep.K1 = 9.0 * std::pow(k * k, 2.0 / 3.0) / (5.0 * std::pow(6.0 * cs, 5.0 / 3.0));

    const double a0 = 3.0 / (2.0 * k);
    const double p0 = -3.0 * cs / k;

    for (double eps : eps_list) {
        if (eps <= 0.0 || eps > 0.3)
            throw std::invalid_argument("verify_expansions: eps outside (0, 0.3]");
        const double x_max = 30.0 / eps;
        const double dx = 2.0 * x_max / n;
        std::vector<double> e_density(n + 1), p_density(n + 1);
        for (int i = 0; i <= n; ++i) {
            const double x = -x_max + dx * i;
            const double s = 0.5 * eps * x;
            const double sech = 1.0 / std::cosh(s);
            const double th = std::tanh(s);
            const double A = a0 * sech * sech;
            const double Ap = -a0 * sech * sech * th;            // dA/d(eps x)
            const double php = p0 * 0.5 * sech * sech;           // dphi/d(eps x)
            const double rho = 1.0 + eps * eps * A;
            const double rho2 = rho * rho;
            const double dmod = eps * eps * eps * Ap;            // d|v|/dx
            const double dphase = eps * eps * php;               // d(arg v)/dx
            e_density[i] = 0.5 * (dmod * dmod + rho2 * dphase * dphase) + 0.5 * nl.F(rho2);
            p_density[i] = 0.5 * (1.0 - rho2) * dphase;
        }
        KdvRow row;
        row.eps = eps;
        row.E_num = trapezoid_uniform(e_density, dx);
        row.p_num = trapezoid_uniform(p_density, dx);
        row.E_pred = 6.0 * cs * cs / (k * k) * eps * eps * eps -
                     18.0 / (5.0 * k * k * k) * (nl.f_second_at_one() + 5.0 * nl.f_prime_at_one()) *
                         std::pow(eps, 5);
        row.p_closed = 6.0 * cs / (k * k) * (std::pow(eps, 3) + 3.0 / (5.0 * k) * std::pow(eps, 5));
        row.E_resid = row.E_num - row.E_pred;
        row.p_resid = row.p_num - row.p_closed;
        row.q_eps = row.p_closed;
        rep.rows.push_back(row);
    }

    // log-log least squares of |E_resid| against eps
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : rep.rows) {
        if (std::abs(r.E_resid) < 1e-300) continue;
        const double lx = std::log(r.eps), ly = std::log(std::abs(r.E_resid));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    rep.energy_slope = (m >= 2) ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    return rep;
}

MomentumParameterization momentum_parameterization(const Nonlinearity& nl, double eps) {
    const double k = nl.kdv_k();
    if (k == 0.0) throw std::domain_error("momentum_parameterization: k vanishes");
    const double cs = nl.sound_speed();
    MomentumParameterization mp;
    mp.s_eps = std::pow(eps, 3) + 3.0 / (5.0 * k) * std::pow(eps, 5);
    mp.q_eps = 6.0 * cs / (k * k) * mp.s_eps;
    const double e3 = std::pow(eps, 3);
    mp.bracket_ok = (k >= 0.0) || (0.4 * e3 <= mp.s_eps && mp.s_eps <= e3);
    return mp;
}

}  // namespace gnls
