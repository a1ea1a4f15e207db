#include "gnls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gnls {

Nonlinearity::Nonlinearity(std::vector<double> coeffs) : a_(std::move(coeffs)) {
    if (a_.empty())
        throw std::invalid_argument("nonlinearity: empty coefficient list");
    for (double c : a_)
        if (!std::isfinite(c))
            throw std::invalid_argument("nonlinearity: non-finite coefficient");
    if (a_[0] <= 0.0)
        throw std::invalid_argument("nonlinearity: a_1 must be positive (f'(1) < 0)");
    g_.resize(a_.size());
    for (std::size_t j = 1; j <= a_.size(); ++j) g_[j - 1] = a_[j - 1] / double(j + 1);
}

double Nonlinearity::f(double rho) const {
    const double u = 1.0 - rho;
    double s = 0.0;
    for (std::size_t j = a_.size(); j-- > 0;) s = s * u + a_[j];
    return s * u;
}

double Nonlinearity::G(double u) const {
    double s = 0.0;
    for (std::size_t j = g_.size(); j-- > 0;) s = s * u + g_[j];
    return s;
}

double Nonlinearity::G_prime(double u) const {
    double s = 0.0;
    for (std::size_t j = g_.size(); j-- > 1;) s = s * u + double(j) * g_[j];
    return s;
}

double Nonlinearity::F(double rho) const {
    const double u = 1.0 - rho;
    return u * u * G(u);
}

double Nonlinearity::sound_speed() const { return std::sqrt(2.0 * a_[0]); }

double Nonlinearity::kdv_k() const { return 2.0 * f_second_at_one() + 6.0 * f_prime_at_one(); }

double Nonlinearity::gamma() const {
    // -2k/c_s^2 with c_s^2 = 2 a_1, kept in exact arithmetic
    return -kdv_k() / a_[0];
}

namespace {

// Detects f = 1 - rho + a (1-rho)^{2p-1} and checks a < p ((2p-1)/(2p-3))^{2p-3}.
void detect_remark18(const std::vector<double>& a, HypothesisReport& rep) {
    if (a.size() < 3 || a[0] != 1.0) return;
    std::size_t idx = 0;
    for (std::size_t j = 1; j < a.size(); ++j) {
        if (a[j] != 0.0) {
            if (idx != 0) return;  // more than one extra term
            idx = j;
        }
    }
    if (idx == 0) return;
    const int power = static_cast<int>(idx) + 1;  // exponent of the extra (1-rho)^power term
    if (power < 3 || power % 2 == 0) return;
    const int p = (power + 1) / 2;
    const double aval = a[idx];
    if (aval <= 0.0 || p < 2) return;
    const double bound =
        double(p) * std::pow(double(2 * p - 1) / double(2 * p - 3), double(2 * p - 3));
    rep.remark18 = aval < bound;
    rep.remark18_a = aval;
    rep.remark18_p = p;
}

}  // namespace

HypothesisReport check_hypotheses(const Nonlinearity& nl, double rho_max, int n_samples) {
    if (rho_max < 2.0) throw std::invalid_argument("check_hypotheses: rho_max must be >= 2");
    if (n_samples < 100) throw std::invalid_argument("check_hypotheses: n_samples must be >= 100");

    HypothesisReport rep;
    rep.rho_max = rho_max;
    rep.n_samples = n_samples;

    const auto& a = nl.coeffs();
    const int d = nl.degree();
    const double cs = nl.sound_speed();
    const double quarter_cs2 = 0.25 * cs * cs;

    // (H1) on a uniform grid of [0, rho_max].
    double margin = std::numeric_limits<double>::infinity();
    double lambda_weak = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n_samples; ++i) {
        const double rho = rho_max * double(i) / double(n_samples);
        const double u = 1.0 - rho;
        const double Fv = nl.F(rho);
        margin = std::min(margin, Fv - quarter_cs2 * u * u);
        if (u != 0.0) lambda_weak = std::min(lambda_weak, Fv / (u * u));
    }
    rep.h1_margin = margin;
    // Tail: the top term of F is a_d u^{d+1}/(d+1). For d == 1 the comparison
    // against (c_s^2/4) u^2 cancels exactly; otherwise u -> -infty requires an
    // odd top power of u with positive coefficient.
    rep.h1_tail_ok = (d == 1) || (d % 2 == 1 && a.back() > 0.0);
    rep.h1_holds = rep.h1_tail_ok && margin >= -1e-12 * std::max(1.0, quarter_cs2);

    // (H2): |F(rho)| <= M |1-rho|^{d+1} for |1-rho| >= 1, exact for polynomials.
    rep.h2_exponent = d + 1;
    double M = 0.0;
    for (int j = 1; j <= d; ++j) M += std::abs(a[j - 1]) / double(j + 1);
    rep.h2_constant = M;
    rep.h2_holds = true;

    // (H3): f''(1) + 3 f'(1) = 2 a_2 - 3 a_1, exact from coefficients.
    rep.h3_value = (d >= 2 ? 2.0 * a[1] : 0.0) - 3.0 * a[0];
    rep.h3_holds = rep.h3_value != 0.0;

    detect_remark18(a, rep);

    rep.lambda = rep.h1_holds ? quarter_cs2 : std::max(0.0, lambda_weak);
    return rep;
}

StructuralConstants structural_constants(const Nonlinearity& nl) {
    StructuralConstants sc;
    sc.c_s = nl.sound_speed();
    sc.k = nl.kdv_k();
    sc.gamma = nl.gamma();
    const HypothesisReport rep = check_hypotheses(nl);
    sc.h1_certified = rep.h1_holds;
    sc.lambda = rep.lambda;
    return sc;
}

}  // namespace gnls
