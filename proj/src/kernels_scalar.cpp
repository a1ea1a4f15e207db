#include "gnls/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "kernels_smallangle.hpp"

namespace gnls::kernels {

namespace {

void mod2_scalar(const std::complex<double>* psi, double* out, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(psi);
    for (std::size_t i = 0; i < n; ++i) out[i] = p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1];
}

void poly_eval_scalar(const double* coeff, int nc, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = nc; j-- > 0;) s = s * x[i] + coeff[j];
        out[i] = s;
    }
}

void phase_rotate_scalar(std::complex<double>* psi, const double* theta, std::size_t n) {
    double* p = reinterpret_cast<double*>(psi);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = theta[i];
        double c, s;
        if (std::abs(t) <= smallangle::kFastAngle) {
            c = smallangle::cos_poly(t);
            s = smallangle::sin_poly(t);
        } else {
            c = std::cos(t);
            s = std::sin(t);
        }
        const double re = p[2 * i], im = p[2 * i + 1];
        p[2 * i] = re * c - im * s;
        p[2 * i + 1] = re * s + im * c;
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", mod2_scalar, poly_eval_scalar, phase_rotate_scalar};
    return ops;
}

#if defined(__x86_64__)
const Ops& avx2_ops();  // kernels_avx2.cpp
bool avx2_available();
#endif

const Ops& active_ops() {
    static const Ops& chosen = []() -> const Ops& {
        if (const char* env = std::getenv("GNLS_SIMD")) {
            if (std::strcmp(env, "scalar") == 0) return scalar_ops();
        }
#if defined(__x86_64__)
        if (avx2_available()) return avx2_ops();
#endif
        return scalar_ops();
    }();
    return chosen;
}

}  // namespace gnls::kernels
