#include "gnls/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gnls/fft.hpp"
#include "gnls/interp.hpp"
#include "gnls/kernels.hpp"
#include "gnls/quadrature.hpp"

namespace gnls {

namespace {

// Evaluates a stored profile anywhere on the line, using the even/odd
// symmetry and the constant-modulus tails.
class ProfileField {
public:
    explicit ProfileField(const SolitonProfile& prof) : c_(prof.c) {
        const std::size_t half = prof.xs.size() / 2;
        std::vector<double> xs(prof.xs.begin() + half, prof.xs.end());
        std::vector<double> eta(prof.eta.begin() + half, prof.eta.end());
        std::vector<double> phi(prof.phi.begin() + half, prof.phi.end());
        x_max_ = xs.back();
        phi_inf_ = phi.back();
        eta_ = MonotoneCubic(xs, eta);
        phi_ = MonotoneCubic(xs, phi);
    }

    std::complex<double> operator()(double x) const {
        const double ax = std::abs(x);
        double eta = ax >= x_max_ ? 0.0 : std::max(0.0, eta_(ax));
        const double rho = std::sqrt(std::max(0.0, 1.0 - eta));
        if (c_ == 0.0) return x < 0 ? -rho : rho;
        const double ph = (ax >= x_max_ ? phi_inf_ : phi_(ax)) * (x < 0 ? -1.0 : 1.0);
        return std::polar(rho, ph);
    }

    double tail_eta(double dist) const { return dist >= x_max_ ? 0.0 : std::max(0.0, eta_(dist)); }

private:
    double c_, x_max_, phi_inf_;
    MonotoneCubic eta_, phi_;
};

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

EvolutionState init_pair(const SolitonProfile& profile, double L, int N) {
    if (!is_pow2(N)) throw std::invalid_argument("init_pair: N must be a power of two");
    if (L <= 0.0) throw std::invalid_argument("init_pair: L must be positive");

    const ProfileField v(profile);
    EvolutionState st;
    st.L = L;
    st.N = N;
    st.psi.resize(N);
    st.tracked_center = -L / 2;
    for (int i = 0; i < N; ++i) {
        const double x = st.x_at(i);
        st.psi[i] = v(x + L / 2) * std::conj(v(x - L / 2));
    }
    // Seam: both expressions for the torus point x = +-L must agree, and the
    // field must be back on the unit circle there (the construction is
    // symmetric, so the first test alone cannot see overlapping dips).
    const std::complex<double> at_minus = v(-L / 2) * std::conj(v(-1.5 * L));
    const std::complex<double> at_plus = v(1.5 * L) * std::conj(v(L / 2));
    const double mismatch = std::abs(at_minus - at_plus) +
                            std::abs(std::abs(at_minus) - 1.0) +
                            std::abs(std::abs(at_plus) - 1.0);
    if (mismatch > 1e-10)
        throw SeamError("init_pair: seam mismatch above 1e-10; profile decays too slowly for L");
    return st;
}

// ---------------------------------------------------------------------------

struct StrangStepper::Impl {
    Fft fft;
    std::vector<std::complex<double>> linear_phase;  // exp(-i k^2 dt)
    std::vector<double> k2;
    std::vector<double> mod2, u, theta;
    std::vector<double> half_coeffs;  // theta = (dt/2) f(1 - |psi|^2) as poly in u

    explicit Impl(int n) : fft(n), mod2(n), u(n), theta(n) {}
};

StrangStepper::StrangStepper(const Nonlinearity& nl, EvolutionState state, double dt)
    : impl_(std::make_unique<Impl>(state.N)), state_(std::move(state)), nl_(nl), dt_(0.0) {
    impl_->k2.resize(state_.N);
    const auto k = Fft::wavenumbers(state_.N, 2.0 * state_.L);
    for (int i = 0; i < state_.N; ++i) impl_->k2[i] = k[i] * k[i];
    set_dt(dt);
}

StrangStepper::~StrangStepper() = default;

void StrangStepper::set_dt(double dt) {
    if (dt <= 0.0) throw std::invalid_argument("strang: dt must be positive");
    dt_ = dt;
    impl_->linear_phase.resize(state_.N);
    for (int i = 0; i < state_.N; ++i)
        impl_->linear_phase[i] = std::polar(1.0, -impl_->k2[i] * dt);
    // theta(u) = (dt/2) * sum_j a_j u^j, u = 1 - |psi|^2
    const auto& a = nl_.coeffs();
    impl_->half_coeffs.assign(a.size() + 1, 0.0);
    for (std::size_t j = 0; j < a.size(); ++j) impl_->half_coeffs[j + 1] = 0.5 * dt * a[j];
}

void StrangStepper::advance(long n_steps) {
    auto& im = *impl_;
    const auto& ops = kernels::active_ops();
    const int n = state_.N;
    auto half_phase = [&] {
        ops.mod2(state_.psi.data(), im.mod2.data(), n);
        for (int i = 0; i < n; ++i) im.u[i] = 1.0 - im.mod2[i];
        ops.poly_eval(im.half_coeffs.data(), static_cast<int>(im.half_coeffs.size()),
                      im.u.data(), im.theta.data(), n);
        ops.phase_rotate(state_.psi.data(), im.theta.data(), n);
    };
    for (long s = 0; s < n_steps; ++s) {
        half_phase();
        im.fft.forward(state_.psi.data());
        for (int i = 0; i < n; ++i) state_.psi[i] *= im.linear_phase[i];
        im.fft.backward(state_.psi.data());
        half_phase();
        state_.t += dt_;
    }
}

namespace {

// spectral derivative into a fresh buffer
std::vector<std::complex<double>> spectral_derivative(const Fft& fft,
                                                      const std::vector<std::complex<double>>& psi,
                                                      double L) {
    std::vector<std::complex<double>> d = psi;
    fft.forward(d.data());
    const auto k = Fft::wavenumbers(static_cast<int>(psi.size()), 2.0 * L);
    const std::complex<double> I(0.0, 1.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= I * k[i];
    fft.backward(d.data());
    return d;
}

double wrap_to_domain(double x, double L) {
    // map into [-L, L)
    const double period = 2.0 * L;
    double r = std::fmod(x + L, period);
    if (r < 0) r += period;
    return r - L;
}

}  // namespace

double grid_energy(const EvolutionState& state, const Nonlinearity& nl) {
    Fft fft(state.N);
    const auto dpsi = spectral_derivative(fft, state.psi, state.L);
    std::vector<double> dens(state.N);
    for (int i = 0; i < state.N; ++i) {
        const double g2 = std::norm(dpsi[i]);
        dens[i] = 0.5 * (g2 + nl.F(std::norm(state.psi[i])));
    }
    return sum_kahan(dens.data(), dens.size()) * state.dx();
}

GridMomentum grid_momentum(const EvolutionState& state) {
    Fft fft(state.N);
    const auto dpsi = spectral_derivative(fft, state.psi, state.L);
    GridMomentum out;
    double min_mod2 = std::numeric_limits<double>::infinity();
    std::vector<double> dens(state.N);
    for (int i = 0; i < state.N; ++i) {
        const double m2 = std::norm(state.psi[i]);
        min_mod2 = std::min(min_mod2, m2);
        // <psi, i psi_x> = Im(psi conj(psi_x))
        const double ip = std::imag(state.psi[i] * std::conj(dpsi[i]));
        dens[i] = 0.5 * ip * (1.0 - 1.0 / m2);
    }
    out.min_mod = std::sqrt(std::max(0.0, min_mod2));
    out.defined = out.min_mod >= 0.1;
    out.p = out.defined ? sum_kahan(dens.data(), dens.size()) * state.dx()
                        : std::numeric_limits<double>::quiet_NaN();
    return out;
}

double track_center(const EvolutionState& state, double previous_center) {
    const int N = state.N;
    const double dx = state.dx();
    const double prev_wrapped = wrap_to_domain(previous_center, state.L);
    const int ic = static_cast<int>(std::llround((prev_wrapped + state.L) / dx)) % N;
    const int window = N / 8;
    int best = ic;
    double best_eta = -std::numeric_limits<double>::infinity();
    for (int off = -window; off <= window; ++off) {
        const int i = ((ic + off) % N + N) % N;
        const double eta = 1.0 - std::norm(state.psi[i]);
        if (eta > best_eta) {
            best_eta = eta;
            best = i;
        }
    }
    // parabolic refinement
    const int il = (best - 1 + N) % N, ir = (best + 1) % N;
    const double em = 1.0 - std::norm(state.psi[il]);
    const double e0 = best_eta;
    const double ep = 1.0 - std::norm(state.psi[ir]);
    double frac = 0.0;
    const double denom = em - 2.0 * e0 + ep;
    if (denom < 0.0) frac = 0.5 * (em - ep) / denom;
    frac = std::clamp(frac, -0.5, 0.5);
    const double found_wrapped = state.x_at(best) + frac * dx;
    // unwrap: keep continuity with the previous center
    double delta = found_wrapped - prev_wrapped;
    if (delta > state.L) delta -= 2.0 * state.L;
    if (delta < -state.L) delta += 2.0 * state.L;
    return previous_center + delta;
}

double untwisted_momentum(const EvolutionState& state) {
    const int N = state.N;
    const double dx = state.dx();
    Fft fft(N);
    const auto dpsi = spectral_derivative(fft, state.psi, state.L);

    const double center = wrap_to_domain(state.tracked_center, state.L);
    const double lo = center - state.L / 2, hi = center + state.L / 2;

    auto field_at = [&](double x) {
        const double xw = wrap_to_domain(x, state.L);
        const double pos = (xw + state.L) / dx;
        const int i0 = static_cast<int>(std::floor(pos)) % N;
        const int i1 = (i0 + 1) % N;
        const double t = pos - std::floor(pos);
        return state.psi[i0] * (1.0 - t) + state.psi[i1] * t;
    };
    const std::complex<double> e_lo = field_at(lo), e_hi = field_at(hi);
    if (std::abs(std::abs(e_lo) - 1.0) > 0.05 || std::abs(std::abs(e_hi) - 1.0) > 0.05)
        throw BoundaryError("untwisted momentum: |psi| far from 1 at the half-domain edges");

    std::vector<double> dens;
    dens.reserve(N / 2 + 2);
    for (int i = 0; i < N; ++i) {
        double x = state.x_at(i);
        double rel = x - center;
        if (rel >= state.L) rel -= 2.0 * state.L;
        if (rel < -state.L) rel += 2.0 * state.L;
        if (rel < -state.L / 2 || rel >= state.L / 2) continue;
        // <i psi', psi> = Im(psi conj(psi'))
        dens.push_back(std::imag(state.psi[i] * std::conj(dpsi[i])));
    }
    const double integral = 0.5 * sum_kahan(dens.data(), dens.size()) * dx;
    const double winding = 0.5 * (std::arg(e_hi) - std::arg(e_lo));
    double val = std::fmod(integral + winding, M_PI);
    if (val < 0) val += M_PI;
    return val;
}

LedgerRow StrangStepper::record() {
    LedgerRow row;
    row.t = state_.t;
    row.E = grid_energy(state_, nl_);
    const GridMomentum gm = grid_momentum(state_);
    row.p = gm.p;
    row.p_defined = gm.defined;
    row.min_mod = gm.min_mod;
    state_.tracked_center = track_center(state_, state_.tracked_center);
    row.center = state_.tracked_center;
    try {
        row.p_untwisted = untwisted_momentum(state_);
    } catch (const BoundaryError&) {
        row.p_untwisted = std::numeric_limits<double>::quiet_NaN();
    }
    state_.ledger.push_back(row);
    return row;
}

void StrangStepper::run(long n_steps, long ledger_every) {
    if (ledger_every <= 0) ledger_every = n_steps;
    if (state_.ledger.empty()) record();
    long done = 0;
    while (done < n_steps) {
        const long chunk = std::min(ledger_every, n_steps - done);
        advance(chunk);
        done += chunk;
        record();
    }
}

OrbitDistance orbit_distance(const EvolutionState& state, const SolitonProfile& reference,
                             double A) {
    const int N = state.N;
    const double L = state.L;
    const double dx = state.dx();
    if (A <= 0.0 || A >= L / 2 - 2 * dx)
        throw WindowError("orbit_distance: window must fit inside the tracked half-domain");

    // reference pair on the same grid, spectrum kept for exact translation
    const EvolutionState ref0 = init_pair(reference, L, N);
    Fft fft(N);
    std::vector<std::complex<double>> ref_hat = ref0.psi;
    fft.forward(ref_hat.data());
    const auto k = Fft::wavenumbers(N, 2.0 * L);

    const auto dpsi = spectral_derivative(fft, state.psi, state.L);
    const double center = state.tracked_center;
    const double center_w = wrap_to_domain(center, L);

    // half-domain / window index masks relative to the tracked center
    std::vector<int> half_idx, win_idx;
    for (int i = 0; i < N; ++i) {
        double rel = state.x_at(i) - center_w;
        if (rel >= L) rel -= 2.0 * L;
        if (rel < -L) rel += 2.0 * L;
        if (rel >= -L / 2 && rel < L / 2) half_idx.push_back(i);
        if (rel >= -A && rel <= A) win_idx.push_back(i);
    }

    std::vector<std::complex<double>> ref_s(N), dref_s(N);
    const std::complex<double> I(0.0, 1.0);
    auto build_ref = [&](double a) {
        // reference translated so its tracked dip sits at center + a
        const double shift = (center_w - (-L / 2)) + a;
        std::vector<std::complex<double>> tmp(N);
        for (int i = 0; i < N; ++i)
            tmp[i] = ref_hat[i] * std::polar(1.0, -k[i] * shift);
        ref_s = tmp;
        fft.backward(ref_s.data());
        for (int i = 0; i < N; ++i) tmp[i] *= I * k[i];
        dref_s = std::move(tmp);
        fft.backward(dref_s.data());
    };

    auto dist_given_theta = [&](double theta) {
        const std::complex<double> ph = std::polar(1.0, theta);
        double sup = 0.0;
        for (int i : win_idx) sup = std::max(sup, std::abs(ph * state.psi[i] - ref_s[i]));
        double l2d = 0.0, l2m = 0.0;
        for (int i : half_idx) {
            l2d += std::norm(ph * dpsi[i] - dref_s[i]);
            const double dm = std::norm(state.psi[i]) - std::norm(ref_s[i]);
            l2m += dm * dm;
        }
        return sup + std::sqrt(l2d * dx) + std::sqrt(l2m * dx);
    };

    auto best_theta_for = [&](double* theta_out) {
        // phase aligning the windowed inner product, then golden refinement
        std::complex<double> ip(0.0, 0.0);
        for (int i : win_idx) ip += std::conj(state.psi[i]) * ref_s[i];
        double th = std::arg(ip);
        double lo = th - 0.5, hi = th + 0.5;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = dist_given_theta(x1), f2 = dist_given_theta(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = dist_given_theta(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = dist_given_theta(x2);
            }
        }
        const double th_best = 0.5 * (lo + hi);
        *theta_out = th_best;
        return dist_given_theta(th_best);
    };

    // coarse a-scan, then golden refinement in a
    OrbitDistance best;
    best.A = A;
    best.d = std::numeric_limits<double>::infinity();
    for (int j = -6; j <= 6; ++j) {
        const double a = 0.25 * j;
        build_ref(a);
        double th;
        const double d = best_theta_for(&th);
        if (d < best.d) {
            best.d = d;
            best.a_opt = a;
            best.theta_opt = th;
        }
    }
    double lo = best.a_opt - 0.25, hi = best.a_opt + 0.25;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    auto eval_a = [&](double a, double* th) {
        build_ref(a);
        return best_theta_for(th);
    };
    double th1, th2;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = eval_a(x1, &th1), f2 = eval_a(x2, &th2);
    for (int it = 0; it < 30; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            th2 = th1;
            x1 = hi - gr * (hi - lo);
            f1 = eval_a(x1, &th1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            th1 = th2;
            x2 = lo + gr * (hi - lo);
            f2 = eval_a(x2, &th2);
        }
    }
    if (f1 < best.d) {
        best.d = f1;
        best.a_opt = x1;
        best.theta_opt = th1;
    }
    if (f2 < best.d) {
        best.d = f2;
        best.a_opt = x2;
        best.theta_opt = th2;
    }
    // report the detected transform of the state relative to the initial
    // embedding: total translation of the dip, and the phase rotation alpha
    // with psi ~ e^{i alpha} * reference (the minimizer applied e^{-i alpha})
    best.a_opt = (state.tracked_center + L / 2) + best.a_opt;
    double alpha = -best.theta_opt;
    alpha = std::remainder(alpha, 2.0 * M_PI);
    best.theta_opt = alpha;
    return best;
}

double madelung_residual(const EvolutionState& state, double c) {
    Fft fft(state.N);
    const auto dpsi = spectral_derivative(fft, state.psi, state.L);
    const double center_w = wrap_to_domain(state.tracked_center, state.L);
    double worst = 0.0;
    for (int i = 0; i < state.N; ++i) {
        double rel = state.x_at(i) - center_w;
        if (rel >= state.L) rel -= 2.0 * state.L;
        if (rel < -state.L) rel += 2.0 * state.L;
        if (rel < -state.L / 2 || rel >= state.L / 2) continue;
        const double m2 = std::norm(state.psi[i]);
        const double rho2_phi_p = std::imag(std::conj(state.psi[i]) * dpsi[i]);
        const double eta = 1.0 - m2;
        worst = std::max(worst, std::abs(rho2_phi_p - 0.5 * c * eta));
    }
    return worst;
}

void add_gaussian_bump(EvolutionState& state, double amp, double x0, double width, double phase) {
    for (int i = 0; i < state.N; ++i) {
        const double r = (state.x_at(i) - x0) / width;
        state.psi[i] += amp * std::exp(-r * r) * std::polar(1.0, phase);
    }
}

}  // namespace gnls
