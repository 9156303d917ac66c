#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace maxplus {

/// Default comparison tolerance. Every check that compares floating-point
/// values accepts an explicit tolerance; this is the fallback.
inline constexpr double kDefaultTol = 1e-9;

/// Raw representation of -infinity. +infinity is never stored anywhere in
/// the library; divergence is reported through DivergentStarError instead.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Scalar of the max-plus semiring: a real number or -infinity.
///
/// Addition of the semiring is max, multiplication is ordinary +, with
/// -infinity absorbing under multiplication and neutral under addition.
class ExtReal {
public:
    constexpr ExtReal() = default;
    constexpr ExtReal(double v) : v_(v) {}

    static constexpr ExtReal neg_inf() { return ExtReal(kNegInf); }

    constexpr double value() const { return v_; }
    constexpr bool is_neg_inf() const { return v_ == kNegInf; }
    constexpr bool finite() const { return v_ != kNegInf; }

    /// Semiring multiplication (ordinary +). IEEE arithmetic already gives
    /// -inf + x = -inf; +inf never occurs by construction.
    friend constexpr ExtReal operator+(ExtReal a, ExtReal b) {
        return ExtReal(a.v_ + b.v_);
    }

    friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend constexpr bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
    friend constexpr bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
    friend constexpr bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
    friend constexpr bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
    friend constexpr bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

private:
    double v_ = kNegInf;
};

/// Semiring addition (max).
constexpr ExtReal oplus(ExtReal a, ExtReal b) { return a < b ? b : a; }

/// Semiring multiplication (+); alias for readability at call sites.
constexpr ExtReal otimes(ExtReal a, ExtReal b) { return a + b; }

/// Ordinary subtraction a - b, defined only for b != -inf.
/// a = -inf yields -inf.
inline ExtReal tropical_sub(ExtReal a, ExtReal b) {
    if (b.is_neg_inf())
        throw std::domain_error("tropical_sub: subtrahend is -inf");
    if (a.is_neg_inf()) return ExtReal::neg_inf();
    return ExtReal(a.value() - b.value());
}

/// Equality within tol; -inf only equals -inf.
constexpr bool approx_eq(ExtReal a, ExtReal b, double tol = kDefaultTol) {
    if (a.is_neg_inf() || b.is_neg_inf()) return a.is_neg_inf() == b.is_neg_inf();
    double d = a.value() - b.value();
    return d <= tol && d >= -tol;
}

/// a <= b within tol; -inf is below everything.
constexpr bool approx_leq(ExtReal a, ExtReal b, double tol = kDefaultTol) {
    if (a.is_neg_inf()) return true;
    if (b.is_neg_inf()) return false;
    return a.value() <= b.value() + tol;
}

inline std::string to_string(ExtReal x) {
    return x.is_neg_inf() ? std::string("-inf") : std::to_string(x.value());
}

} // namespace maxplus
