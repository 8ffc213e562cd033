#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace mqphi {

// Signed magnitude kept in log space: value() == sign * exp(log_abs).
// sign == 0 encodes an exact zero; log_abs is then -inf by convention.
struct SignedLog {
    int sign = 0;
    double log_abs = -std::numeric_limits<double>::infinity();

    static SignedLog zero() { return {}; }
    static SignedLog one() { return {1, 0.0}; }

    static SignedLog from_value(double v) {
        if (v == 0.0) return {};
        return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
    }

    static SignedLog from_log(int s, double la) {
        if (s == 0) return {};
        return {s > 0 ? 1 : -1, la};
    }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

    SignedLog operator*(const SignedLog& o) const {
        if (sign == 0 || o.sign == 0) return {};
        return {sign * o.sign, log_abs + o.log_abs};
    }

    SignedLog& operator*=(const SignedLog& o) {
        *this = *this * o;
        return *this;
    }

    // Integer power; pow_int(0) is one() even for a zero base.
    SignedLog pow_int(int n) const {
        if (n == 0) return one();
        if (sign == 0) return {};
        int s = (sign < 0 && (n & 1)) ? -1 : 1;
        return {s, log_abs * n};
    }
};

// Sum of signed-log terms, factored around the largest magnitude so the
// accumulation happens at scale ~1 regardless of the absolute exponents.
inline SignedLog signed_log_sum(const std::vector<SignedLog>& terms) {
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms)
        if (t.sign != 0 && t.log_abs > peak) peak = t.log_abs;
    if (peak == -std::numeric_limits<double>::infinity()) return {};
    double acc = 0.0;
    for (const auto& t : terms)
        if (t.sign != 0) acc += t.sign * std::exp(t.log_abs - peak);
    if (acc == 0.0) return {};
    return {acc > 0.0 ? 1 : -1, peak + std::log(std::fabs(acc))};
}

}  // namespace mqphi
