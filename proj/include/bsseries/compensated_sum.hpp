#pragma once

#include <cmath>

namespace bsseries {

/// Neumaier (improved Kahan) accumulator. Also tracks the absolute mass
/// sum |x_i| so callers can judge how much cancellation happened.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
        mass_ += std::abs(x);
    }

    double value() const { return sum_ + compensation_; }
    double mass() const { return mass_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
    double mass_ = 0.0;
};

} // namespace bsseries
