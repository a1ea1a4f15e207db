#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gnls {

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting).
/// Preserves monotonicity of the data; used to invert x(eta) maps and to
/// sample stored soliton profiles off-grid.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("monotone cubic: need >= 2 matching samples");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("monotone cubic: x not strictly increasing");
        m_.resize(n);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i)
            m_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (d[i] == 0.0) {
                m_[i] = m_[i + 1] = 0.0;
                continue;
            }
            const double al = m_[i] / d[i], be = m_[i + 1] / d[i];
            const double s = al * al + be * be;
            if (s > 9.0) {
                const double tau = 3.0 / std::sqrt(s);
                m_[i] = tau * al * d[i];
                m_[i + 1] = tau * be * d[i];
            }
        }
    }

    double operator()(double x) const {
        if (x <= x_.front()) return y_.front() + m_.front() * (x - x_.front());
        if (x >= x_.back()) return y_.back() + m_.back() * (x - x_.back());
        const std::size_t i =
            std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1;
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
    }

    bool valid() const { return x_.size() >= 2; }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;
};

}  // namespace gnls
