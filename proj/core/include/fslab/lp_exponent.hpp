#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "fslab/errors.hpp"

namespace fslab {

/// Integrability exponent p in (0, inf].  Values below 1 give quasi-norms;
/// infinity selects the sup norm.
class LpExponent {
public:
    LpExponent() : value_(2.0) {}
    /* implicit */ LpExponent(double value) : value_(value) {
        if (std::isnan(value_) || value_ <= 0.0)
            throw UsageError("exponent must lie in (0, inf], got " + std::to_string(value));
    }

    static LpExponent infinity() { return LpExponent(std::numeric_limits<double>::infinity()); }

    bool is_inf() const { return std::isinf(value_); }
    double value() const { return value_; }
    /// 1/p, with 1/inf = 0.
    double reciprocal() const { return is_inf() ? 0.0 : 1.0 / value_; }

    friend bool operator==(const LpExponent& a, const LpExponent& b) { return a.value_ == b.value_; }

private:
    double value_;
};

inline LpExponent min(const LpExponent& a, const LpExponent& b) {
    return a.value() < b.value() ? a : b;
}
inline LpExponent max(const LpExponent& a, const LpExponent& b) {
    return a.value() < b.value() ? b : a;
}

inline std::string to_string(const LpExponent& p) {
    return p.is_inf() ? "inf" : std::to_string(p.value());
}

} // namespace fslab
