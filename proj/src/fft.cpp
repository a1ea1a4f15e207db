#include "gnls/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace gnls {

Fft::Fft(int n) : n_(n), work_(n) {
    if (n < 2) throw std::invalid_argument("fft: size must be >= 2");
    auto* buf = reinterpret_cast<fftw_complex*>(work_.data());
    plan_fwd_ = fftw_plan_dft_1d(n_, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(n_, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("fft: planning failed");
}

Fft::~Fft() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft::forward(std::complex<double>* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void Fft::backward(std::complex<double>* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
    const double inv = 1.0 / n_;
    for (int i = 0; i < n_; ++i) data[i] *= inv;
}

std::vector<double> Fft::wavenumbers(int n, double domain) {
    std::vector<double> k(n);
    const double dk = 2.0 * M_PI / domain;
    for (int i = 0; i < n; ++i) k[i] = dk * (i <= n / 2 ? i : i - n);
    return k;
}

}  // namespace gnls
