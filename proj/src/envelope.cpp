#include "gnls/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnls/interp.hpp"
#include "gnls/quadrature.hpp"

namespace gnls {

double black_soliton_energy(const Nonlinearity& nl, double rel_tol) {
    auto f = [&](double t) {
        const double xi = 1.0 - t * t;
        const double g = nl.G(xi);
        if (g <= 0.0)
            throw DomainError("black_soliton_energy: F(1-xi) <= 0 on (0,1), kink inadmissible");
        return 2.0 * xi * std::sqrt(g);
    };
    const auto r = integrate_adaptive(f, 0.0, 1.0, rel_tol);
    if (!r.converged) throw QuadratureFailure("black_soliton_energy: tolerance unmet");
    return r.value;
}

const char* to_string(QStarMethod m) {
    switch (m) {
        case QStarMethod::monotone_limit: return "monotone-limit";
        case QStarMethod::envelope_hit: return "envelope-hit";
        case QStarMethod::tangent_extrapolation: return "tangent-extrapolation";
        case QStarMethod::bound_bracket: return "bound-bracket";
    }
    return "?";
}

double h_of_q(double q) { return 8.0 * q + 4.0 * std::sqrt(4.0 * q * q + q); }

double tangent_q_star(double c0, double intercept, double E0_black) {
    if (c0 <= 0.0) throw std::invalid_argument("tangent_q_star: c0 must be positive");
    return (E0_black - intercept) / c0;
}

namespace {

// Maximal runs of branch points monotone in p and not crossing a gap.
struct Run {
    std::vector<double> ps, Es;  // ps ascending
};

std::vector<Run> monotone_runs(const Branch& br) {
    std::vector<Run> runs;
    const auto& pts = br.points;
    if (pts.empty()) return runs;
    auto gap_between = [&](std::size_t i) {
        for (const auto& g : br.gaps)
            if (pts[i].c < g.first && pts[i + 1].c > g.first) return true;
        return false;
    };
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {  // inclusive
        if (end <= start) {
            // single point: keep as a degenerate run
            runs.push_back({{pts[start].p}, {pts[start].E}});
            return;
        }
        Run r;
        for (std::size_t i = start; i <= end; ++i) {
            r.ps.push_back(pts[i].p);
            r.Es.push_back(pts[i].E);
        }
        if (r.ps.front() > r.ps.back()) {
            std::reverse(r.ps.begin(), r.ps.end());
            std::reverse(r.Es.begin(), r.Es.end());
        }
        runs.push_back(std::move(r));
    };
    int dir = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (gap_between(i)) {
            flush(i);
            start = i + 1;
            dir = 0;
            continue;
        }
        const int d = pts[i + 1].p > pts[i].p ? 1 : -1;
        if (dir == 0) dir = d;
        if (d != dir) {
            flush(i);
            start = i;  // cusp point belongs to both runs
            dir = 0;
        }
    }
    flush(pts.size() - 1);
    return runs;
}

double interp_run(const Run& r, double q) {
    const auto it = std::upper_bound(r.ps.begin(), r.ps.end(), q);
    if (it == r.ps.begin() || it == r.ps.end()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t i = (it - r.ps.begin()) - 1;
    const double t = (q - r.ps[i]) / (r.ps[i + 1] - r.ps[i]);
    return r.Es[i] + t * (r.Es[i + 1] - r.Es[i]);
}

}  // namespace

AsymptoteFit fit_asymptote(const Nonlinearity& nl, const Branch& branch) {
    (void)nl;
    if (branch.gaps.empty()) throw NoGapError("fit_asymptote: branch has no gap");
    const auto gap = branch.gaps.front();

    // Points adjacent to the gap on both sides, nearest first.
    std::vector<const WavePoint*> below, above;
    for (const auto& p : branch.points) {
        if (p.c <= gap.first) below.push_back(&p);
        if (p.c >= gap.second) above.push_back(&p);
    }
    std::sort(below.begin(), below.end(),
              [&](auto* a, auto* b) { return a->c > b->c; });
    std::sort(above.begin(), above.end(),
              [&](auto* a, auto* b) { return a->c < b->c; });
    if (below.empty() && above.empty())
        throw InsufficientData("fit_asymptote: no data next to the gap");

    AsymptoteFit fit;
    // Gap edges were bisection-refined by the scan; both edges estimate the
    // degenerate speed. Use the midpoint.
    fit.c0 = 0.5 * (gap.first + gap.second);

    // The sub-branch relevant for the minimization curve is the lower-energy
    // one at comparable momentum, i.e. the side whose E - c0 p is smaller.
    auto median_intercept = [&](const std::vector<const WavePoint*>& side, int m, double* spread) {
        std::vector<double> vals;
        for (int i = 0; i < m && i < (int)side.size(); ++i)
            vals.push_back(side[i]->E - fit.c0 * side[i]->p);
        if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
        std::sort(vals.begin(), vals.end());
        if (spread) *spread = vals.back() - vals.front();
        return vals[vals.size() / 2];
    };
    double spread_b = 0.0, spread_a = 0.0;
    const int m = 8;
    const double med_b = below.empty() ? std::numeric_limits<double>::infinity()
                                       : median_intercept(below, m, &spread_b);
    const double med_a = above.empty() ? std::numeric_limits<double>::infinity()
                                       : median_intercept(above, m, &spread_a);
    if (med_a <= med_b) {
        fit.intercept = med_a;
        fit.spread = spread_a;
        fit.points_used = std::min<int>(m, above.size());
    } else {
        fit.intercept = med_b;
        fit.spread = spread_b;
        fit.points_used = std::min<int>(m, below.size());
    }
    return fit;
}

MinCurve build_min_curve(const Nonlinearity& nl, const Branch& branch, double E0,
                         const std::vector<double>& q_grid) {
    if (branch.points.empty()) throw InsufficientData("build_min_curve: empty branch");

    MinCurve curve;
    curve.E0 = E0;
    curve.c_s = nl.sound_speed();

    const auto runs = monotone_runs(branch);

    // At a tangency gap the branch momenta grow only logarithmically toward
    // the degenerate speed, leaving uncovered momenta. Splicing an arbitrary
    // stretch of the degenerate plateau into a wave adds energy and momentum
    // in ratio c0, so the asymptote line is a valid test-map cap there.
    std::optional<AsymptoteFit> line;
    if (!branch.gaps.empty()) {
        try {
            line = fit_asymptote(nl, branch);
        } catch (const std::exception&) {
        }
    }

    for (double q : q_grid) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : runs) {
            const double v = interp_run(r, q);
            if (!std::isnan(v)) best = std::min(best, v);
        }
        CurveSource src = CurveSource::branch;
        // capped by the kink plateau and by the test-map bounds
        if (!(best <= E0)) {
            best = E0;
            src = CurveSource::plateau;
        }
        if (best > curve.c_s * q) {
            best = curve.c_s * q;
            src = CurveSource::bound;
        }
        if (line && best > line->intercept + line->c0 * q) {
            best = line->intercept + line->c0 * q;
            src = CurveSource::bound;
        }
        curve.qs.push_back(q);
        curve.Emin.push_back(best);
        curve.source.push_back(src);
        curve.delta_p.push_back(q > 0.0 ? 1.0 - best / (curve.c_s * q) : 0.0);
    }

    // q_* estimation.
    bool dpdc_all_negative = true;
    for (std::size_t i = 0; i < branch.points.size(); ++i)
        if (branch.dp_dc[i] >= 0.0) dpdc_all_negative = false;

    // envelope hit: smallest momentum where the lower envelope of the runs
    // reaches the plateau E0. Raw-run crossings masked by a lower run at the
    // same momentum do not count.
    auto envelope_at = [&](double q) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : runs) {
            const double v = interp_run(r, q);
            if (!std::isnan(v)) best = std::min(best, v);
        }
        return best;
    };
    auto envelope_hit = [&]() -> std::optional<double> {
        // detection level slightly below E0: the branch endpoint at the kink
        // touches the plateau only up to quadrature noise
        const double level = E0 - 1e-9 * (1.0 + E0);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : runs) {
            for (std::size_t i = 0; i + 1 < r.ps.size(); ++i) {
                const double e1 = r.Es[i], e2 = r.Es[i + 1];
                if ((e1 - level) * (e2 - level) <= 0.0 && e1 != e2) {
                    const double t = (level - e1) / (e2 - e1);
                    const double qc = r.ps[i] + t * (r.ps[i + 1] - r.ps[i]);
                    const double probe = qc * (1.0 - 1e-6) - 1e-12;
                    const double run_val = interp_run(r, probe);
                    if (std::isnan(run_val)) continue;
                    if (envelope_at(probe) < run_val - 1e-8 * (1.0 + E0)) continue;  // masked
                    best = std::min(best, qc);
                }
            }
        }
        if (std::isinf(best)) return std::nullopt;
        return best;
    };

    // precedence: limit of a fully stable branch; then a genuine envelope
    // crossing of the plateau; then tangent extrapolation across a gap whose
    // data stops short of E0; else only the bracket is known.
    if (dpdc_all_negative && branch.gaps.empty()) {
        curve.q_star = branch.points.front().p;  // smallest speed = largest momentum
        for (const auto& p : branch.points) curve.q_star = std::max(curve.q_star, p.p);
        curve.q_star_method = QStarMethod::monotone_limit;
        if (auto hit = envelope_hit()) curve.q_star_alternative = *hit;
        return curve;
    }
    const auto hit = envelope_hit();
    std::optional<double> tangent;
    if (!branch.gaps.empty()) {
        try {
            const AsymptoteFit fit = fit_asymptote(nl, branch);
            tangent = tangent_q_star(fit.c0, fit.intercept, E0);
        } catch (const std::exception&) {
        }
    }
    if (hit) {
        curve.q_star = *hit;
        curve.q_star_method = QStarMethod::envelope_hit;
        curve.q_star_alternative = tangent;
    } else if (tangent) {
        curve.q_star = *tangent;
        curve.q_star_method = QStarMethod::tangent_extrapolation;
    } else {
        curve.q_star = curve.qs.empty() ? 0.0 : curve.qs.back();
        curve.q_star_method = QStarMethod::bound_bracket;
    }
    return curve;
}

CurveCertification certify_curve_properties(const MinCurve& curve, const Nonlinearity& nl,
                                            double fit_q_lo, double fit_q_hi) {
    CurveCertification cert;
    const double cs = nl.sound_speed();
    const auto& q = curve.qs;
    const auto& E = curve.Emin;
    const std::size_t n = q.size();
    if (n < 3) return cert;

    // c_s-Lipschitz between all sampled pairs (monotone grid: adjacent pairs
    // dominate, but check all).
    double lip = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            lip = std::min(lip, cs * (q[j] - q[i]) - std::abs(E[j] - E[i]));
    cert.lipschitz_margin = lip;
    cert.lipschitz_ok = lip >= -1e-9 * (1.0 + cs);

    // monotone nondecreasing
    double mono = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i) mono = std::min(mono, E[i + 1] - E[i]);
    cert.monotone_margin = mono;
    cert.monotone_ok = mono >= -1e-9 * (1.0 + curve.E0);

    // concavity: divided-difference slopes nonincreasing
    double conc = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double s1 = (E[i + 1] - E[i]) / (q[i + 1] - q[i]);
        const double s2 = (E[i + 2] - E[i + 1]) / (q[i + 2] - q[i + 1]);
        conc = std::min(conc, s1 - s2);
    }
    cert.concavity_margin = conc;
    cert.concavity_ok = conc >= -1e-6 * cs;

    // strict subadditivity on sampled pairs with p + q interpolable on the grid
    MonotoneCubic Eq(std::vector<double>(q.begin(), q.end()),
                     std::vector<double>(E.begin(), E.end()));
    double sub = std::numeric_limits<double>::infinity();
    const std::size_t stride = std::max<std::size_t>(1, n / 48);
    for (std::size_t i = 0; i < n; i += stride) {
        if (q[i] < 1e-2) continue;
        for (std::size_t j = i; j < n; j += stride) {
            if (q[j] < 1e-2) continue;
            const double s = q[i] + q[j];
            if (s > q.back()) break;
            sub = std::min(sub, E[i] + E[j] - Eq(s));
        }
    }
    if (!std::isinf(sub)) {
        cert.subadditive_margin = sub;
        cert.subadditive_ok = sub > 0.0;
    }

    // small-q defect exponent: fit log(cs q - Emin) vs log q on [fit_q_lo, fit_q_hi]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (q[i] < fit_q_lo || q[i] > fit_q_hi) continue;
        const double defect = cs * q[i] - E[i];
        if (defect <= 0.0) continue;
        const double lx = std::log(q[i]), ly = std::log(defect);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    cert.exponent_points = m;
    cert.fitted_exponent = (m >= 2) ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;

    cert.h_at_q_star = h_of_q(curve.q_star);
    cert.h_at_1_32 = h_of_q(1.0 / 32.0);
    cert.q_star_above_1_32 = curve.q_star >= 1.0 / 32.0;
    return cert;
}

namespace {

// Fixed asymmetric C_c^infinity bump on (-1,1): B(y) = exp(-1/(1-y^2)) (1 + y/2).
struct Bump {
    static double shell(double y) { return std::exp(-1.0 / (1.0 - y * y)); }
    static double value(double y) {
        if (std::abs(y) >= 1.0) return 0.0;
        return shell(y) * (1.0 + 0.5 * y);
    }
    static double deriv(double y) {
        if (std::abs(y) >= 1.0) return 0.0;
        const double w = 1.0 - y * y;
        const double gp = -2.0 * y / (w * w);
        return shell(y) * (gp * (1.0 + 0.5 * y) + 0.5);
    }
    static double deriv2(double y) {
        if (std::abs(y) >= 1.0) return 0.0;
        const double w = 1.0 - y * y;
        const double gp = -2.0 * y / (w * w);
        const double gpp = -2.0 / (w * w) - 8.0 * y * y / (w * w * w);
        return shell(y) * ((gpp + gp * gp) * (1.0 + 0.5 * y) + gp);
    }
};

}  // namespace

SequencePoint lemma21_sequence(const Nonlinearity& nl, double q, int n) {
    if (n < 1) throw std::invalid_argument("lemma21_sequence: n >= 1 required");
    if (q == 0.0) return {0.0, 0.0};  // constant map
    const double cs = nl.sound_speed();
    const double aq = std::abs(q);
    const double sign = q > 0.0 ? 1.0 : -1.0;

    const double I2 = integrate_adaptive([](double y) { return Bump::deriv(y) * Bump::deriv(y); },
                                         -1.0, 1.0, 1e-12)
                          .value;
    const double s = std::sqrt(aq / (cs * I2));
    const double I3 = integrate_adaptive(
                          [](double y) {
                              const double d = Bump::deriv(y);
                              return d * d * d;
                          },
                          -1.0, 1.0, 1e-12)
                          .value;
    const double a = s * s * s * I3;

    const double alpha = 1.0 / n;
    const double beta = (1.0 / double(n) / double(n)) * (1.0 - cs * a / (2.0 * aq * n));
    if (beta <= 0.0) throw std::invalid_argument("lemma21_sequence: n too small (beta <= 0)");

    // rho must stay positive
    double max_dchi = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double y = -1.0 + 2.0 * i / 2000.0;
        max_dchi = std::max(max_dchi, std::abs(s * Bump::deriv(y)));
    }
    if (alpha * max_dchi >= 1.0)
        throw std::invalid_argument("lemma21_sequence: n too small (modulus reaches zero)");

    auto dens = [&](double y, double* e, double* p) {
        const double chi_p = s * Bump::deriv(y);
        const double chi_pp = s * Bump::deriv2(y);
        const double rho = 1.0 - alpha * chi_p;
        const double rho_x = -alpha * beta * chi_pp;
        const double phi_x = cs * alpha * chi_p;  // d/dx of (cs alpha/beta) chi(beta x)
        *e = 0.5 * (rho_x * rho_x + rho * rho * phi_x * phi_x) + 0.5 * nl.F(rho * rho);
        *p = 0.5 * (1.0 - rho * rho) * phi_x;
    };
    const double E =
        integrate_adaptive(
            [&](double y) {
                double e, p;
                dens(y, &e, &p);
                return e;
            },
            -1.0, 1.0, 1e-12)
            .value /
        beta;
    const double p =
        integrate_adaptive(
            [&](double y) {
                double e, pd;
                dens(y, &e, &pd);
                return pd;
            },
            -1.0, 1.0, 1e-12)
            .value /
        beta;
    return {sign * p, E};
}

SequencePoint prop33_sequence(const SolitonProfile& profile_v0, const Nonlinearity& nl, double q,
                              int n) {
    if (profile_v0.c != 0.0)
        throw std::invalid_argument("prop33_sequence: needs the kink profile (c = 0)");
    if (n < 1) throw std::invalid_argument("prop33_sequence: n >= 1 required");

    const double xcut = 1.0 / n;
    // eta at the cut by monotone interpolation of the stored half profile
    const std::size_t half = profile_v0.xs.size() / 2;
    std::vector<double> xs(profile_v0.xs.begin() + half, profile_v0.xs.end());
    std::vector<double> et(profile_v0.eta.begin() + half, profile_v0.eta.end());
    MonotoneCubic eta_of_x(xs, et);
    const double eta_cut = std::min(1.0, std::max(0.0, eta_of_x(xcut)));
    const double rho2_cut = 1.0 - eta_cut;
    if (eta_cut >= 1.0 - 1e-14)
        throw std::invalid_argument("prop33_sequence: n too large for the stored grid");

    const double q_n = q / eta_cut;  // q / (1 - |v0(1/n)|^2)

    // outside |x| >= 1/n the map keeps the kink modulus; its energy density is
    // e = (eta^2 Q(eta)/4 + F(1-eta))/2 evaluated on the grid (Q = 4G for c=0)
    const double dx = profile_v0.xs[1] - profile_v0.xs[0];
    double E_out = 0.0;
    {
        std::vector<double> dens;
        std::vector<double> xs_dens;
        for (std::size_t i = half; i < profile_v0.xs.size(); ++i) {
            const double x = profile_v0.xs[i];
            if (x < xcut - dx) continue;
            const double eta = profile_v0.eta[i];
            const double e = eta * eta * nl.G(eta);  // |v0'|^2/2 + F/2 collapses to eta^2 G
            dens.push_back(e);
            xs_dens.push_back(x);
        }
        // trapezoid with a partial first cell starting exactly at xcut
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < dens.size(); ++i) {
            double a = xs_dens[i], b = xs_dens[i + 1];
            double fa = dens[i], fb = dens[i + 1];
            if (b <= xcut) continue;
            if (a < xcut) {
                const double t = (xcut - a) / (b - a);
                fa = fa + t * (fb - fa);
                a = xcut;
            }
            acc += 0.5 * (fa + fb) * (b - a);
        }
        E_out = 2.0 * acc;  // even
    }

    // inside |x| <= 1/n: modulus frozen, linear phase ramp of slope q_n * n
    const double ramp = q_n * n;
    const double E_in = rho2_cut * ramp * ramp * (1.0 / n) + (1.0 / n) * nl.F(rho2_cut);

    SequencePoint out;
    out.E = E_in + E_out;
    out.p = eta_cut * q_n;  // = q exactly
    return out;
}

}  // namespace gnls
