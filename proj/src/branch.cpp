#include "gnls/branch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnls/interp.hpp"
#include "gnls/parallel.hpp"
#include "gnls/quadrature.hpp"

namespace gnls {

namespace {

// P(xi) = N_c(xi)/xi^2 = c^2 - 4 (1-xi) G(xi), as an exact coefficient vector
// (ascending powers). Degree d = degree of the nonlinearity.
std::vector<double> structure_poly(const Nonlinearity& nl, double c) {
    const auto& a = nl.coeffs();
    const int d = nl.degree();
    std::vector<double> g(d);
    for (int j = 1; j <= d; ++j) g[j - 1] = a[j - 1] / double(j + 1);
    std::vector<double> p(d + 1, 0.0);
    // (1-xi) G: h_0 = g_0, h_i = g_i - g_{i-1}, h_d = -g_{d-1}
    p[0] = c * c - 4.0 * g[0];
    for (int i = 1; i < d; ++i) p[i] = -4.0 * (g[i] - g[i - 1]);
    p[d] = 4.0 * g[d - 1];
    return p;
}

double horner(const std::vector<double>& p, double x) {
    double s = 0.0;
    for (std::size_t j = p.size(); j-- > 0;) s = s * x + p[j];
    return s;
}

double horner_derivative(const std::vector<double>& p, double x) {
    double s = 0.0;
    for (std::size_t j = p.size(); j-- > 1;) s = s * x + double(j) * p[j];
    return s;
}

// Synthetic division of p by (x - r); remainder discarded (r is a refined root).
std::vector<double> deflate(const std::vector<double>& p, double r) {
    const std::size_t d = p.size() - 1;
    std::vector<double> q(d);
    double acc = p[d];
    for (std::size_t k = d; k-- > 0;) {
        q[k] = acc;
        acc = p[k] + r * acc;
    }
    return q;
}

struct DeflatedRoot {
    std::vector<double> q;  // Q(xi) = P(xi)/(xi - xi_c)
    double xi_c;
};

}  // namespace

double eval_Nc(const Nonlinearity& nl, double c, double xi) {
    return xi * xi * (c * c - 4.0 * (1.0 - xi) * nl.G(xi));
}

RootResult find_xi_c(const Nonlinearity& nl, double c, const RootOptions& opts) {
    const double cs = nl.sound_speed();
    if (c < 0.0 || c >= cs) throw std::invalid_argument("find_xi_c: speed outside [0, c_s)");

    RootResult res;
    const auto p = structure_poly(nl, c);
    const double cs2 = cs * cs;
    const int n = opts.mesh_points;
    const double dN_floor = opts.degeneracy_floor_scale * cs2;
    const double interior_floor = opts.interior_floor_scale * cs2;

    auto P = [&](double xi) { return horner(p, xi); };

    if (c == 0.0) {
        // xi_0 = 1: P(1) = 0 by construction, N_0'(1) = P'(1) = 4 F(0).
        res.xi_c = 1.0;
        res.dN_at_root = horner_derivative(p, 1.0);
        if (res.dN_at_root <= dN_floor) {
            res.status = RootResult::Status::degenerate;
            res.detail = "N_0'(1) = 4 F(0) below the degeneracy floor";
            return res;
        }
        for (int i = 1; i < n; ++i) {
            const double xi = double(i) / n;
            if (P(xi) >= 0.0) {
                res.status = RootResult::Status::not_found;
                res.detail = "N_0 not negative on the sampled interior";
                return res;
            }
        }
        res.status = RootResult::Status::ok;
        return res;
    }

    // Mesh scan for sign changes of P; P(0) = c^2 - c_s^2 < 0.
    std::vector<double> Pv(n + 1);
    Pv[0] = c * c - cs2;
    for (int i = 1; i <= n; ++i) Pv[i] = P(double(i) / n);
    int first = -1;
    for (int i = 1; i <= n; ++i) {
        if (Pv[i - 1] < 0.0 && Pv[i] >= 0.0) {
            res.sign_changes.push_back(double(i) / n);
            if (first < 0) first = i;
        }
    }
    if (first < 0) {
        res.status = RootResult::Status::not_found;
        res.detail = "no sign change of N_c/xi^2 on (0,1]";
        return res;
    }

    // Bisection; the bracket endpoints always keep opposite signs.
    double lo = double(first - 1) / n, hi = double(first) / n;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (P(mid) < 0.0 ? lo : hi) = mid;
    }
    double xi = 0.5 * (lo + hi);
    // One secant polish step (safeguarded).
    {
        const double d = horner_derivative(p, xi);
        if (d != 0.0) {
            const double cand = xi - P(xi) / d;
            if (cand > lo - (hi - lo) && cand < hi + (hi - lo) && cand > 0.0 && cand <= 1.0)
                xi = cand;
        }
    }
    res.xi_c = xi;

    if (std::abs(P(xi)) > opts.root_tol_scale * std::max(1.0, c * c) * 1e3) {
        res.status = RootResult::Status::not_found;
        res.detail = "root refinement did not converge";
        return res;
    }

    res.dN_at_root = xi * xi * horner_derivative(p, xi) + 2.0 * xi * P(xi);
    if (res.dN_at_root <= dN_floor) {
        res.status = RootResult::Status::degenerate;
        res.detail = "N_c'(xi_c) below the degeneracy floor (double-root suspicion)";
        return res;
    }

    // Interior negativity: every mesh point below xi_c must be negative, and
    // interior local maxima of P must clear the tangency floor. The mesh point
    // adjacent to the root is excluded from the clearance test (P -> 0 there
    // by continuity).
    const int iroot = first - 1;
    for (int i = 1; i <= iroot; ++i) {
        if (Pv[i] >= 0.0) {
            res.status = RootResult::Status::not_found;
            res.detail = "N_c not negative on the sampled interior";
            return res;
        }
        if (i > 1 && i < iroot && Pv[i] >= Pv[i - 1] && Pv[i] >= Pv[i + 1] &&
            Pv[i] > -interior_floor) {
            res.status = RootResult::Status::not_found;
            res.detail = "near-tangency of N_c strictly inside (0, xi_c)";
            return res;
        }
    }

    res.status = RootResult::Status::ok;
    return res;
}

namespace {

DeflatedRoot deflated_structure(const Nonlinearity& nl, double c, double xi_c) {
    auto p = structure_poly(nl, c);
    return {deflate(p, xi_c), xi_c};
}

}  // namespace

EnergyMomentum energy_momentum(const Nonlinearity& nl, double c, double xi_c, double rel_tol) {
    const auto def = deflated_structure(nl, c, xi_c);
    const auto& q = def.q;
    const double sq_xic = std::sqrt(xi_c);

    auto Q = [&](double xi) {
        const double v = horner(q, xi);
        if (v <= 0.0)
            throw DomainError("energy_momentum: N_c >= 0 strictly inside (0, xi_c)");
        return v;
    };

    EnergyMomentum out;
    auto e_integrand = [&](double th) {
        const double s = std::sin(th);
        const double xi = xi_c * s * s;
        return xi * nl.G(xi) * s / std::sqrt(Q(xi));
    };
    const auto re = integrate_adaptive(e_integrand, 0.0, M_PI / 2, rel_tol);
    if (!re.converged) throw QuadratureFailure("energy quadrature did not reach tolerance");
    out.E = 4.0 * sq_xic * re.value;
    out.evaluations = re.evaluations;

    if (c == 0.0) {
        out.p = M_PI / 2;  // mod-pi representative of the untwisted momentum
        return out;
    }

    auto p_integrand = [&](double th) {
        const double s = std::sin(th);
        const double xi = xi_c * s * s;
        return xi * s / ((1.0 - xi) * std::sqrt(Q(xi)));
    };
    const auto rp = integrate_adaptive(p_integrand, 0.0, M_PI / 2, rel_tol);
    if (!rp.converged) throw QuadratureFailure("momentum quadrature did not reach tolerance");
    out.p = c * sq_xic * rp.value;
    out.evaluations += rp.evaluations;
    return out;
}

namespace {

// x(eta) = int_eta^{xi_c} dz / (z sqrt((xi_c - z) Q(z))). Two smooth pieces:
// near the top, z = xi_c - t^2; below xi_c/2, log-space in z (the map grows
// like -log(eta)/mu there).
class ProfileMap {
public:
    ProfileMap(const Nonlinearity& nl, double c, double xi_c)
        : def_(deflated_structure(nl, c, xi_c)), xi_c_(xi_c) {}

    double Q(double z) const {
        const double v = horner(def_.q, z);
        if (v <= 0.0) throw DomainError("profile: N_c >= 0 strictly inside (0, xi_c)");
        return v;
    }

    // -N_c(eta) = eta^2 (xi_c - eta) Q(eta), clamped at the endpoints.
    double minus_N(double eta) const {
        const double w = (xi_c_ - eta);
        if (w <= 0.0) return 0.0;
        return eta * eta * w * horner(def_.q, eta);
    }

    double x_of_eta(double eta) const {
        const double mid = 0.5 * xi_c_;
        if (eta >= mid) return upper(eta);
        if (upper_mid_ < 0.0) upper_mid_ = upper(mid);
        return upper_mid_ + lower(eta, mid);
    }

    // Solves x(eta) = x for eta, polishing a starting guess with Newton steps
    // on the exact derivative dx/deta = -1/sqrt(-N_c(eta)).
    double eta_at(double x, double guess) const {
        double eta = std::clamp(guess, 1e-300, xi_c_ * (1.0 - 1e-16));
        for (int it = 0; it < 4; ++it) {
            const double r = x_of_eta(eta) - x;
            const double step = r * std::sqrt(std::max(0.0, minus_N(eta)));
            double next = eta + step;
            if (!(next > 0.0)) next = 0.5 * eta;
            if (next >= xi_c_) next = 0.5 * (eta + xi_c_);
            if (std::abs(next - eta) <= 1e-15 * xi_c_) return next;
            eta = next;
        }
        return eta;
    }

    const std::vector<double>& deflated() const { return def_.q; }

private:
    double upper(double eta) const {
        const double t1 = std::sqrt(std::max(0.0, xi_c_ - eta));
        auto f = [&](double t) {
            const double z = xi_c_ - t * t;
            return 2.0 / (z * std::sqrt(Q(z)));
        };
        const auto r = integrate_adaptive(f, 0.0, t1, 1e-12);
        return r.value;
    }

    double lower(double eta, double mid) const {
        auto f = [&](double s) {
            const double z = std::exp(s);
            return 1.0 / std::sqrt((xi_c_ - z) * Q(z));
        };
        const auto r = integrate_adaptive(f, std::log(eta), std::log(mid), 1e-12);
        return r.value;
    }

    DeflatedRoot def_;
    double xi_c_;
    mutable double upper_mid_ = -1.0;
};

}  // namespace

double profile_extent(const Nonlinearity& nl, double c, double xi_c, double eta_threshold) {
    ProfileMap map(nl, c, xi_c);
    return map.x_of_eta(eta_threshold * xi_c);
}

SolitonProfile reconstruct_profile(const Nonlinearity& nl, double c, double xi_c, double x_max,
                                   int n) {
    if (n < 16) throw std::invalid_argument("reconstruct_profile: n too small");
    ProfileMap map(nl, c, xi_c);

    // Sample the monotone map x(eta): t-clustered near the maximum, log-spaced
    // in eta down the tail, then invert by monotone interpolation.
    const int m_up = 400, m_lo = 400;
    std::vector<double> xs_map, etas_map;
    xs_map.reserve(m_up + m_lo + 1);
    etas_map.reserve(m_up + m_lo + 1);
    for (int i = 0; i <= m_up; ++i) {
        const double t = std::sqrt(0.5 * xi_c) * double(i) / m_up;
        const double eta = xi_c - t * t;
        xs_map.push_back(map.x_of_eta(std::min(eta, xi_c * (1.0 - 1e-15))));
        etas_map.push_back(eta);
    }
    // continue down to an eta below the tail of the requested window
    double eta_lo = 0.5 * xi_c;
    double x_lo = xs_map.back();
    while (x_lo < 1.25 * x_max && eta_lo > 1e-280) {
        eta_lo *= 0.5;
        x_lo = map.x_of_eta(eta_lo);
    }
    const double s_hi = std::log(0.5 * xi_c), s_lo = std::log(eta_lo);
    for (int i = 1; i <= m_lo; ++i) {
        const double s = s_hi + (s_lo - s_hi) * double(i) / m_lo;
        const double eta = std::exp(s);
        xs_map.push_back(map.x_of_eta(eta));
        etas_map.push_back(eta);
    }
    MonotoneCubic eta_of_x(xs_map, etas_map);

    if (eta_of_x(x_max) > 1e-8)
        throw DecayError("reconstruct_profile: eta(x_max) above 1e-8, enlarge x_max");

    SolitonProfile prof;
    prof.c = c;
    prof.xi_c = xi_c;
    const int total = 2 * n + 1;
    prof.xs.resize(total);
    prof.eta.resize(total);
    prof.phi.resize(total);
    prof.v.resize(total);
    const double dx = x_max / n;

    for (int i = 0; i <= n; ++i) {
        double eta;
        if (i == 0)
            eta = xi_c;
        else
            eta = map.eta_at(i * dx, std::max(1e-300, eta_of_x(i * dx)));
        prof.xs[n + i] = i * dx;
        prof.xs[n - i] = -i * dx;
        prof.eta[n + i] = eta;
        prof.eta[n - i] = eta;
    }

    // phi' = c eta / (2 (1-eta)), even; cumulative trapezoid from phi(0)=0.
    if (c > 0.0) {
        double acc = 0.0;
        prof.phi[n] = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double em = prof.eta[n + i - 1], ep = prof.eta[n + i];
            if (1.0 - ep <= 1e-12 || 1.0 - em <= 1e-12)
                throw PhaseSingularity("reconstruct_profile: modulus vanishes with c > 0");
            const double fm = c * em / (2.0 * (1.0 - em));
            const double fp = c * ep / (2.0 * (1.0 - ep));
            acc += 0.5 * (fm + fp) * dx;
            prof.phi[n + i] = acc;
            prof.phi[n - i] = -acc;
        }
        for (int i = 0; i < total; ++i) {
            const double rho = std::sqrt(std::max(0.0, 1.0 - prof.eta[i]));
            prof.v[i] = std::polar(rho, prof.phi[i]);
        }
    } else {
        // black soliton: real, odd, vanishing at the origin
        std::fill(prof.phi.begin(), prof.phi.end(), 0.0);
        for (int i = 0; i < total; ++i) {
            const double rho = std::sqrt(std::max(0.0, 1.0 - prof.eta[i]));
            prof.v[i] = (i < n) ? -rho : (i == n ? 0.0 : rho);
        }
    }
    return prof;
}

EnergyMomentum profile_energy_momentum(const SolitonProfile& prof, const Nonlinearity& nl) {
    const std::size_t m = prof.xs.size();
    const double dx = prof.xs[1] - prof.xs[0];
    const auto p = structure_poly(nl, prof.c);
    // |rho'|^2 = -N_c(eta)/(4 rho^2) = eta^2 (xi_c - eta) Q(eta) / (4 (1-eta));
    // for the black soliton (xi_c = 1) the (1-eta) factor cancels exactly, so
    // divide it out of the deflated polynomial instead of the samples.
    const auto q = deflate(p, prof.xi_c);
    const bool black = prof.c == 0.0;
    std::vector<double> e_density(m), p_density(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double eta = prof.eta[i];
        const double rho2 = 1.0 - eta;
        const double Qv = std::max(0.0, horner(q, eta));
        double grad2;
        double phi_p = 0.0;
        if (black) {
            grad2 = 0.25 * eta * eta * Qv;
        } else {
            phi_p = prof.c * eta / (2.0 * rho2);
            grad2 = eta * eta * (prof.xi_c - eta) * Qv / (4.0 * rho2) + rho2 * phi_p * phi_p;
        }
        e_density[i] = 0.5 * (grad2 + eta * eta * nl.G(eta));  // F(1-eta) = eta^2 G(eta)
        p_density[i] = 0.5 * eta * phi_p;
    }
    EnergyMomentum out;
    out.E = trapezoid_uniform(e_density, dx);
    out.p = black ? M_PI / 2 : trapezoid_uniform(p_density, dx);
    return out;
}

AppendixAudit appendix_a_audit(const SolitonProfile& prof, const Nonlinearity& nl) {
    AppendixAudit audit;
    const StructuralConstants sc = structural_constants(nl);
    audit.lambda = sc.lambda;

    const EnergyMomentum em = profile_energy_momentum(prof, nl);
    const auto p = structure_poly(nl, prof.c);

    double eta_max = 0.0;
    for (double e : prof.eta) eta_max = std::max(eta_max, e);

    if (prof.c > 0.0) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < prof.xs.size(); ++i) {
            const double eta = prof.eta[i];
            const double rho2 = 1.0 - eta;
            const double rho = std::sqrt(std::max(1e-300, rho2));
            const double mN = std::max(0.0, -eta * eta * horner(p, eta));
            const double phi_p = prof.c * eta / (2.0 * rho2);
            const double e_v = 0.5 * (mN / (4.0 * rho2) + rho2 * phi_p * phi_p +
                                      eta * eta * nl.G(eta));
            const double lhs = std::sqrt(std::max(0.0, nl.F(rho2))) * std::abs(phi_p);
            worst = std::min(worst, e_v / rho - lhs);
        }
        audit.pointwise_margin = worst;

        const double denom = std::sqrt(4.0 * audit.lambda * std::max(1e-300, 1.0 - eta_max));
        audit.momentum_margin = em.E / denom - std::abs(em.p);
    }

    const double A = 64.0 / audit.lambda;
    const double B = 16.0 / std::sqrt(audit.lambda);
    audit.eta_bound_margin = em.E * (A + B * em.E) - eta_max * eta_max;
    return audit;
}

namespace {

struct PointOutcome {
    bool ok = false;
    WavePoint wp;
    std::string reason;
};

PointOutcome compute_point(const Nonlinearity& nl, double c, const ScanOptions& opts) {
    PointOutcome out;
    const RootResult rr = find_xi_c(nl, c, opts.root);
    if (!rr.ok()) {
        out.reason = (rr.status == RootResult::Status::degenerate ? "degenerate: " : "not_found: ") +
                     rr.detail;
        return out;
    }
    try {
        const EnergyMomentum em = energy_momentum(nl, c, rr.xi_c, opts.quad_rel_tol);
        out.ok = true;
        out.wp = {c, rr.xi_c, em.E, em.p, rr.dN_at_root, c == 0.0};
    } catch (const std::exception& e) {
        out.reason = e.what();
    }
    return out;
}

// Bisection edge of find_xi_c success between a succeeding speed and a failing
// one; returns the last succeeding speed found.
double refine_success_edge(const Nonlinearity& nl, double c_ok, double c_fail,
                           const ScanOptions& opts) {
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (c_ok + c_fail);
        if (mid == c_ok || mid == c_fail) break;
        if (find_xi_c(nl, mid, opts.root).ok())
            c_ok = mid;
        else
            c_fail = mid;
    }
    return c_ok;
}

}  // namespace

Branch scan_branch(const Nonlinearity& nl, const std::vector<double>& c_grid,
                   const ScanOptions& opts) {
    const double cs = nl.sound_speed();
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
        if (c_grid[i] < 0.0 || c_grid[i] >= cs)
            throw std::invalid_argument("scan_branch: grid outside [0, c_s)");
        if (i > 0 && c_grid[i] <= c_grid[i - 1])
            throw std::invalid_argument("scan_branch: grid not strictly increasing");
    }

    std::vector<PointOutcome> outcomes(c_grid.size());
    parallel_for(c_grid.size(),
                 [&](std::size_t i) { outcomes[i] = compute_point(nl, c_grid[i], opts); });

    Branch br;
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
        if (outcomes[i].ok)
            br.points.push_back(outcomes[i].wp);
        else
            br.failures.push_back({c_grid[i], outcomes[i].reason});
    }

    // Gap intervals from consecutive failures, bounded by neighbouring successes.
    {
        std::size_t i = 0;
        while (i < c_grid.size()) {
            if (outcomes[i].ok) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < c_grid.size() && !outcomes[j + 1].ok) ++j;
            double lo = (i == 0) ? c_grid[0] : c_grid[i - 1];
            double hi = (j + 1 < c_grid.size()) ? c_grid[j + 1] : c_grid[j];
            if (i > 0) lo = refine_success_edge(nl, c_grid[i - 1], c_grid[i], opts);
            if (j + 1 < c_grid.size()) hi = refine_success_edge(nl, c_grid[j + 1], c_grid[j], opts);
            br.gaps.emplace_back(lo, hi);
            i = j + 1;
        }
    }

    // xi_c discontinuities between adjacent successes: locate the jump speed,
    // then probe for the inadmissible window around it.
    if (opts.refine_jumps) {
        std::vector<std::pair<double, double>> extra;
        for (std::size_t i = 0; i + 1 < br.points.size(); ++i) {
            const WavePoint &A = br.points[i], &B = br.points[i + 1];
            const bool xi_jump = std::abs(B.xi_c - A.xi_c) >= opts.jump_threshold;
            const bool p_jump =
                std::abs(B.p - A.p) >= 0.5 * (1.0 + std::min(std::abs(A.p), std::abs(B.p)));
            if (!xi_jump && !p_jump) continue;
            // already separated by a recorded gap?
            bool covered = false;
            for (const auto& g : br.gaps)
                if (g.first >= A.c && g.second <= B.c) covered = true;
            if (covered) continue;
            // bisect on "xi_c is near the left value"
            double lo = A.c, hi = B.c;
            const double mid_xi = 0.5 * (A.xi_c + B.xi_c);
            double lo_fail = std::numeric_limits<double>::quiet_NaN();
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                const RootResult rr = find_xi_c(nl, mid, opts.root);
                if (!rr.ok()) {
                    lo_fail = mid;
                    break;
                }
                ((rr.xi_c - mid_xi) * (A.xi_c - mid_xi) > 0.0 ? lo : hi) = mid;
            }
            double glo, ghi;
            if (std::isnan(lo_fail)) {
                // no inadmissible sample found: record the refined jump interval
                glo = lo;
                ghi = hi;
            } else {
                glo = refine_success_edge(nl, A.c, lo_fail, opts);
                ghi = refine_success_edge(nl, B.c, lo_fail, opts);
            }
            extra.emplace_back(glo, ghi);
        }
        for (auto& g : extra) br.gaps.push_back(g);
        std::sort(br.gaps.begin(), br.gaps.end());
    }

    // Both sub-branches blow up logarithmically at a tangency gap; a plain
    // grid leaves that tail unsampled. Append points at geometric offsets
    // from the refined edges so diagrams and envelope fits see it.
    if (opts.refine_jumps && !br.gaps.empty()) {
        std::vector<WavePoint> extra;
        for (const auto& g : br.gaps) {
            for (int side = 0; side < 2; ++side) {
                for (int k = 3; k <= 8; ++k) {
                    const double delta = cs * std::pow(10.0, -k);
                    const double c_try = side == 0 ? g.first - delta : g.second + delta;
                    if (c_try <= 0.0 || c_try >= cs) continue;
                    if (c_try < c_grid.front() || c_try > c_grid.back()) continue;
                    bool dup = false;
                    for (const auto& w : br.points)
                        if (std::abs(w.c - c_try) < 1e-12) dup = true;
                    if (dup) continue;
                    const PointOutcome po = compute_point(nl, c_try, opts);
                    if (po.ok) extra.push_back(po.wp);
                }
            }
        }
        br.points.insert(br.points.end(), extra.begin(), extra.end());
        std::sort(br.points.begin(), br.points.end(),
                  [](const WavePoint& a, const WavePoint& b) { return a.c < b.c; });
    }

    // Finite differences, one-sided at ends and across gaps.
    const std::size_t m = br.points.size();
    br.dE_dc.assign(m, 0.0);
    br.dp_dc.assign(m, 0.0);
    br.flags.assign(m, "");
    auto separated = [&](std::size_t i, std::size_t j) {
        for (const auto& g : br.gaps)
            if (br.points[i].c < g.first && br.points[j].c > g.first) return true;
        return false;
    };
    for (std::size_t i = 0; i < m; ++i) {
        const bool has_prev = i > 0 && !separated(i - 1, i);
        const bool has_next = i + 1 < m && !separated(i, i + 1);
        const auto& P = br.points;
        if (has_prev && has_next) {
            // centered, nonuniform-aware
            const double h1 = P[i].c - P[i - 1].c, h2 = P[i + 1].c - P[i].c;
            const double w = h1 + h2;
            br.dp_dc[i] = (P[i + 1].p - P[i].p) / h2 * (h1 / w) + (P[i].p - P[i - 1].p) / h1 * (h2 / w);
            br.dE_dc[i] = (P[i + 1].E - P[i].E) / h2 * (h1 / w) + (P[i].E - P[i - 1].E) / h1 * (h2 / w);
        } else if (has_next) {
            br.dp_dc[i] = (P[i + 1].p - P[i].p) / (P[i + 1].c - P[i].c);
            br.dE_dc[i] = (P[i + 1].E - P[i].E) / (P[i + 1].c - P[i].c);
        } else if (has_prev) {
            br.dp_dc[i] = (P[i].p - P[i - 1].p) / (P[i].c - P[i - 1].c);
            br.dE_dc[i] = (P[i].E - P[i - 1].E) / (P[i].c - P[i - 1].c);
        }
        if (br.dp_dc[i] >= 0.0 && m > 1) br.flags[i] = "dpdc_nonneg";
    }
    return br;
}

}  // namespace gnls
