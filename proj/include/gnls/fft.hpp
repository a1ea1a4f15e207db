#pragma once

#include <complex>
#include <vector>

namespace gnls {

/// In-place complex FFT pair on a fixed size, plans reused. FFTW_ESTIMATE
/// keeps the plan (and thus the rounding pattern) reproducible across runs.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }
    void forward(std::complex<double>* data) const;   // unnormalized
    void backward(std::complex<double>* data) const;  // divides by n

    /// Wavenumbers in FFT storage order for a domain of length `domain`.
    static std::vector<double> wavenumbers(int n, double domain);

private:
    int n_;
    void* plan_fwd_;
    void* plan_bwd_;
    mutable std::vector<std::complex<double>> work_;
};

}  // namespace gnls
