#pragma once

namespace gnls::kernels::smallangle {

// Degree-11/12 Taylor sin/cos, below 1 ulp for |t| <= kFastAngle. Both the
// scalar reference and the SIMD variants evaluate exactly this recurrence so
// the paths agree to rounding.
inline double sin_poly(double t) {
    const double t2 = t * t;
    double r = -1.0 / 39916800.0;  // 1/11!
    r = r * t2 + 1.0 / 362880.0;   // 1/9!
    r = r * t2 - 1.0 / 5040.0;     // 1/7!
    r = r * t2 + 1.0 / 120.0;      // 1/5!
    r = r * t2 - 1.0 / 6.0;        // 1/3!
    r = r * t2 + 1.0;
    return t * r;
}

inline double cos_poly(double t) {
    const double t2 = t * t;
    double r = 1.0 / 479001600.0;  // 1/12!
    r = r * t2 - 1.0 / 3628800.0;  // 1/10!
    r = r * t2 + 1.0 / 40320.0;    // 1/8!
    r = r * t2 - 1.0 / 720.0;      // 1/6!
    r = r * t2 + 1.0 / 24.0;       // 1/4!
    r = r * t2 - 0.5;
    r = r * t2 + 1.0;
    return r;
}

constexpr double kFastAngle = 0.25;

}  // namespace gnls::kernels::smallangle
