#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnls {

/// Polynomial nonlinearity f(rho) = sum_{j=1..d} a_j (1-rho)^j.
///
/// The potential F(rho) = int_rho^1 f(r) dr is exact for this family:
/// F(rho) = sum a_j (1-rho)^{j+1}/(j+1) = u^2 G(u) with u = 1-rho, where
/// G(u) = sum a_j u^{j-1}/(j+1). The same G also gives F(1-xi) = xi^2 G(xi),
/// which is what the travelling-wave structure polynomial needs.
class Nonlinearity {
public:
    /// coeffs = [a_1, ..., a_d]; requires a_1 > 0 (so f'(1) = -a_1 < 0).
    explicit Nonlinearity(std::vector<double> coeffs);

    const std::vector<double>& coeffs() const { return a_; }
    int degree() const { return static_cast<int>(a_.size()); }

    double f(double rho) const;
    double F(double rho) const;
    /// G(u) with F(rho) = (1-rho)^2 G(1-rho).
    double G(double u) const;
    /// dG/du.
    double G_prime(double u) const;

    double f_prime_at_one() const { return -a_[0]; }
    double f_second_at_one() const { return a_.size() >= 2 ? 2.0 * a_[1] : 0.0; }

    /// c_s = sqrt(-2 f'(1)).
    double sound_speed() const;
    /// k = 2 f''(1) + 6 f'(1); the long-wave (KdV) coefficient.
    double kdv_k() const;
    /// Gamma = -2k / c_s^2.
    double gamma() const;

private:
    std::vector<double> a_;
    std::vector<double> g_;  // g_[j-1] = a_j/(j+1)
};

struct StructuralConstants {
    double c_s = 0.0;
    double lambda = 0.0;  // best constant with lambda (1-rho)^2 <= F on the sampled range
    double k = 0.0;
    double gamma = 0.0;
    bool h1_certified = false;  // lambda == c_s^2/4 admissible
};

struct HypothesisReport {
    bool h1_holds = false;
    double h1_margin = 0.0;       // min over grid of F(rho) - (c_s^2/4)(1-rho)^2
    bool h1_tail_ok = false;      // sign of the leading term as rho -> infinity
    bool h2_holds = false;
    int h2_exponent = 0;          // q = d+1
    double h2_constant = 0.0;     // M with F(rho) <= M |1-rho|^q for rho >= 2
    bool h3_holds = false;
    double h3_value = 0.0;        // f''(1) + 3 f'(1) = 2 a_2 - 3 a_1
    std::optional<bool> remark18;          // family f = 1-rho + a(1-rho)^{2p-1}
    std::optional<double> remark18_a;
    std::optional<int> remark18_p;
    double lambda = 0.0;          // c_s^2/4 when h1 holds, else weaker sampled constant
    double rho_max = 0.0;
    int n_samples = 0;

    bool all_required() const { return h1_holds && h2_holds && h3_holds; }
};

/// Derived constants. lambda defaults to c_s^2/4 when the quadratic lower
/// bound on F certifies on a default grid; otherwise the best sampled
/// constant is used.
StructuralConstants structural_constants(const Nonlinearity& nl);

/// Grid certification of the growth/nondegeneracy hypotheses.
/// rho_max >= 2, n_samples >= 100.
HypothesisReport check_hypotheses(const Nonlinearity& nl, double rho_max = 3.0,
                                  int n_samples = 2000);

}  // namespace gnls
