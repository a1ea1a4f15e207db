#pragma once

#include <complex>
#include <cstddef>

namespace gnls::kernels {

/// Hot pointwise loops of the split-step integrator, with a scalar reference
/// implementation and SIMD variants selected once at runtime (AVX2 on x86-64,
/// NEON on aarch64). GNLS_SIMD=scalar forces the reference path. The variants
/// are equivalence-tested against the reference.
struct Ops {
    const char* name;
    /// out[i] = |psi[i]|^2
    void (*mod2)(const std::complex<double>* psi, double* out, std::size_t n);
    /// out[i] = sum_j coeff[j] * x[i]^j   (coeff ascending, nc entries)
    void (*poly_eval)(const double* coeff, int nc, const double* x, double* out, std::size_t n);
    /// psi[i] *= exp(i * theta[i]); |theta| <= 0.25 takes a polynomial
    /// sin/cos path, larger angles fall back to libm per element.
    void (*phase_rotate)(std::complex<double>* psi, const double* theta, std::size_t n);
};

const Ops& scalar_ops();
/// Resolved once per process (cpu features + GNLS_SIMD override).
const Ops& active_ops();

}  // namespace gnls::kernels
