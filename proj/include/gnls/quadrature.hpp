#pragma once

#include <array>
#include <limits>
#include <cmath>
#include <cstdint>
#include <vector>

namespace gnls {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;  // accumulated error estimate
    long evaluations = 0;
    bool converged = false;
};

namespace detail {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1],
/// via Newton iteration on the Legendre recurrence.
template <int N>
const std::array<double, 2 * N>& gauss_legendre_table() {
    static const std::array<double, 2 * N> table = [] {
        std::array<double, 2 * N> t{};
        const int m = (N + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (N + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 1; j <= N; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
                }
                pp = N * (z * p1 - p2) / (z * z - 1.0);
                const double dz = -p1 / pp;
                z += dz;
                if (std::abs(dz) < 1e-16) break;
            }
            t[i] = -z;
            t[N - 1 - i] = z;
            t[N + i] = 2.0 / ((1.0 - z * z) * pp * pp);
            t[N + N - 1 - i] = t[N + i];
        }
        return t;
    }();
    return table;
}

template <int N, class F>
double gauss_panel(const F& f, double a, double b) {
    const auto& t = gauss_legendre_table<N>();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += t[N + i] * f(mid + half * t[i]);
    return s * half;
}

}  // namespace detail

/// Adaptive Gauss-Legendre on [a,b]: each panel is accepted when the 15-point
/// value agrees with its two-half refinement within the locally apportioned
/// tolerance. Smooth integrands converge after the initial panels; the stack
/// only deepens near non-smooth spots.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-10,
                              double abs_tol = 0.0, int max_depth = 52,
                              long max_evals = 4'000'000) {
    constexpr int NP = 15;
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }

    struct Panel {
        double a, b, value;
        int depth;
    };

    // Coarse first pass for the tolerance scale.
    double coarse = 0.0;
    constexpr int kInit = 8;
    std::vector<Panel> stack;
    stack.reserve(64);
    for (int i = 0; i < kInit; ++i) {
        const double pa = a + (b - a) * i / kInit;
        const double pb = a + (b - a) * (i + 1) / kInit;
        const double v = detail::gauss_panel<NP>(f, pa, pb);
        coarse += v;
        stack.push_back({pa, pb, v, 0});
    }
    res.evaluations += kInit * NP;

    const double scale = std::max(abs_tol, rel_tol * std::abs(coarse));
    const double tol_per_len = (scale > 0 ? scale : 1e-300) / std::abs(b - a);

    bool all_accepted = true;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double left = detail::gauss_panel<NP>(f, p.a, mid);
        const double right = detail::gauss_panel<NP>(f, mid, p.b);
        res.evaluations += 2 * NP;
        const double refined = left + right;
        const double err = std::abs(refined - p.value);
        const double budget = tol_per_len * std::abs(p.b - p.a);
        // panels whose error sits at the integrand's rounding floor cannot
        // improve by further splitting
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(left) + std::abs(right));
        if (err <= budget || err <= floor || p.depth >= max_depth ||
            res.evaluations >= max_evals) {
            res.value += refined;
            res.abs_error += err;
            if (err > budget && err > floor) all_accepted = false;
        } else {
            stack.push_back({p.a, mid, left, p.depth + 1});
            stack.push_back({mid, p.b, right, p.depth + 1});
        }
    }
    // final verdict on the accumulated error, not only per-panel acceptance
    res.converged =
        all_accepted || res.abs_error <= 4.0 * std::max(abs_tol, rel_tol * std::abs(res.value));
    return res;
}

/// Kahan-compensated sum.
inline double sum_kahan(const double* x, std::size_t n) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = x[i] - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

/// Trapezoid rule on a uniform grid (compensated). Spectrally accurate for
/// smooth integrands whose derivatives vanish at both ends.
inline double trapezoid_uniform(const std::vector<double>& y, double dx) {
    if (y.size() < 2) return 0.0;
    double s = sum_kahan(y.data() + 1, y.size() - 2);
    s += 0.5 * (y.front() + y.back());
    return s * dx;
}

}  // namespace gnls
