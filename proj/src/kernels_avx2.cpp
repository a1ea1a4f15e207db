#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

#include "gnls/kernels.hpp"
#include "kernels_smallangle.hpp"

namespace gnls::kernels {

namespace {

// Same coefficients as the scalar reference (kernels_scalar.cpp); plain
// mul/add (no FMA) so both paths round the same way.
inline __m256d sin_poly4(__m256d t) {
    const __m256d t2 = _mm256_mul_pd(t, t);
    __m256d r = _mm256_set1_pd(-1.0 / 39916800.0);
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(1.0 / 362880.0));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(-1.0 / 5040.0));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(1.0 / 120.0));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(-1.0 / 6.0));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(1.0));
    return _mm256_mul_pd(t, r);
}

inline __m256d cos_poly4(__m256d t) {
    const __m256d t2 = _mm256_mul_pd(t, t);
    __m256d r = _mm256_set1_pd(1.0 / 479001600.0);
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(-1.0 / 3628800.0));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(1.0 / 40320.0));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(-1.0 / 720.0));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(1.0 / 24.0));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(-0.5));
    r = _mm256_add_pd(_mm256_mul_pd(r, t2), _mm256_set1_pd(1.0));
    return r;
}

void mod2_avx2(const std::complex<double>* psi, double* out, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(psi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d lo = _mm256_loadu_pd(p + 2 * i);      // re0 im0 re1 im1
        const __m256d hi = _mm256_loadu_pd(p + 2 * i + 4);  // re2 im2 re3 im3
        const __m256d lo2 = _mm256_mul_pd(lo, lo);
        const __m256d hi2 = _mm256_mul_pd(hi, hi);
        const __m256d sums = _mm256_hadd_pd(lo2, hi2);      // r0 r2 r1 r3
        const __m256d res = _mm256_permute4x64_pd(sums, _MM_SHUFFLE(3, 1, 2, 0));
        _mm256_storeu_pd(out + i, res);
    }
    for (; i < n; ++i) {
        const double re = p[2 * i], im = p[2 * i + 1];
        out[i] = re * re + im * im;
    }
}

void poly_eval_avx2(const double* coeff, int nc, const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        __m256d s = _mm256_setzero_pd();
        for (int j = nc; j-- > 0;)
            s = _mm256_add_pd(_mm256_mul_pd(s, xv), _mm256_set1_pd(coeff[j]));
        _mm256_storeu_pd(out + i, s);
    }
    for (; i < n; ++i) {
        double s = 0.0;
        for (int j = nc; j-- > 0;) s = s * x[i] + coeff[j];
        out[i] = s;
    }
}

void phase_rotate_avx2(std::complex<double>* psi, const double* theta, std::size_t n) {
    double* p = reinterpret_cast<double*>(psi);
    const __m256d limit = _mm256_set1_pd(smallangle::kFastAngle);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(theta + i);
        const __m256d big = _mm256_cmp_pd(_mm256_and_pd(t, absmask), limit, _CMP_GT_OQ);
        alignas(32) double c4[4], s4[4];
        if (_mm256_movemask_pd(big)) {
            for (int l = 0; l < 4; ++l) {
                c4[l] = std::cos(theta[i + l]);
                s4[l] = std::sin(theta[i + l]);
            }
        } else {
            _mm256_store_pd(c4, cos_poly4(t));
            _mm256_store_pd(s4, sin_poly4(t));
        }
        for (int l = 0; l < 4; ++l) {
            const double re = p[2 * (i + l)], im = p[2 * (i + l) + 1];
            p[2 * (i + l)] = re * c4[l] - im * s4[l];
            p[2 * (i + l) + 1] = re * s4[l] + im * c4[l];
        }
    }
    for (; i < n; ++i) {
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

bool avx2_available() { return __builtin_cpu_supports("avx2"); }

const Ops& avx2_ops() {
    static const Ops ops{"avx2", mod2_avx2, poly_eval_avx2, phase_rotate_avx2};
    return ops;
}

}  // namespace gnls::kernels

#endif  // __x86_64__
