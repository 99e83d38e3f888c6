#pragma once

// Extended-range floating point and outward-rounded intervals.
//
// BigFloat holds value = mant * 2^exp2 with |mant| in [1,2) (or 0), where
// exp2 is a 64-bit integer. The counterexample generator produces quantities
// whose magnitudes overflow double (and long double) after a few steps; the
// mantissa keeps ~15 significant digits at any scale.
//
// XInterval is a closed interval [lo, hi] of BigFloat with every operation
// widened outward, so that the true real-arithmetic result is always
// contained. Widening is relative; exact zeros stay exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace lpq {

struct BigFloat {
    double mant = 0.0;
    std::int64_t exp2 = 0;

    BigFloat() = default;

    static BigFloat normalized(double m, std::int64_t e) {
        BigFloat r;
        if (m == 0.0 || std::isnan(m) || std::isinf(m)) {
            r.mant = m;
            r.exp2 = 0;
            return r;
        }
        int k = 0;
        double f = std::frexp(m, &k);  // f in [0.5, 1)
        r.mant = f * 2.0;
        r.exp2 = e + k - 1;
        return r;
    }

    static BigFloat from_double(double d) { return normalized(d, 0); }
    static BigFloat zero() { return BigFloat{}; }
    static BigFloat one() { return from_double(1.0); }
    static BigFloat inf() { return from_double(std::numeric_limits<double>::infinity()); }

    bool is_zero() const { return mant == 0.0; }
    bool is_finite() const { return std::isfinite(mant); }
    bool is_nan() const { return std::isnan(mant); }
    int sign() const { return mant > 0 ? 1 : (mant < 0 ? -1 : 0); }

    double to_double() const {
        if (mant == 0.0 || !std::isfinite(mant)) return mant;
        if (exp2 > 1100) return mant > 0 ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
        if (exp2 < -1100) return mant > 0 ? 0.0 : -0.0;
        return std::ldexp(mant, static_cast<int>(exp2));
    }

    bool fits_double() const {
        return mant == 0.0 || !std::isfinite(mant) || (exp2 > -1020 && exp2 < 1020);
    }

    // log2 of |value|; -inf for zero.
    double log2_abs() const {
        if (mant == 0.0) return -std::numeric_limits<double>::infinity();
        return static_cast<double>(exp2) + std::log2(std::fabs(mant));
    }

    BigFloat operator-() const {
        BigFloat r = *this;
        r.mant = -r.mant;
        return r;
    }

    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        if (a.mant == 0.0 || b.mant == 0.0) return BigFloat{};
        return normalized(a.mant * b.mant, a.exp2 + b.exp2);
    }

    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        if (b.mant == 0.0) throw std::domain_error("BigFloat: division by zero");
        if (a.mant == 0.0) return BigFloat{};
        return normalized(a.mant / b.mant, a.exp2 - b.exp2);
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        if (a.mant == 0.0) return b;
        if (b.mant == 0.0) return a;
        const BigFloat* big = &a;
        const BigFloat* sml = &b;
        if (a.exp2 < b.exp2) std::swap(big, sml);
        std::int64_t d = big->exp2 - sml->exp2;
        if (d > 128) return *big;  // callers widen intervals past this drop
        double m = big->mant + std::ldexp(sml->mant, -static_cast<int>(d));
        return normalized(m, big->exp2);
    }

    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return a + (-b); }

    // Total order ignoring NaN (callers never compare NaN).
    friend bool operator<(const BigFloat& a, const BigFloat& b) {
        int sa = a.sign(), sb = b.sign();
        if (sa != sb) return sa < sb;
        if (sa == 0) return false;
        if (a.exp2 != b.exp2) return sa > 0 ? a.exp2 < b.exp2 : a.exp2 > b.exp2;
        return a.mant < b.mant;
    }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return !(b < a); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return !(a < b); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) {
        return a.mant == b.mant && (a.mant == 0.0 || a.exp2 == b.exp2);
    }
    friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !(a == b); }

    friend BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
    friend BigFloat min(const BigFloat& a, const BigFloat& b) { return a < b ? a : b; }
};

// x^e for x >= 0 (x = 0 gives 0 for e > 0, 1 for e == 0).
inline BigFloat pow(const BigFloat& x, double e) {
    if (e == 0.0) return BigFloat::one();
    if (x.is_zero()) {
        if (e < 0) throw std::domain_error("BigFloat: pow(0, negative)");
        return BigFloat{};
    }
    if (x.sign() < 0) throw std::domain_error("BigFloat: pow of negative base");
    double y = e * x.log2_abs();
    double fl = std::floor(y);
    double frac = y - fl;
    double m = std::exp2(frac);  // in [1, 2)
    return BigFloat::normalized(m, static_cast<std::int64_t>(fl));
}

// Relative error bound for pow above: ~|y| * 1e-16 on the log scale.
inline double pow_rel_slack(const BigFloat& x, double e) {
    double y = std::fabs(e * x.log2_abs());
    return 4e-16 * std::max(1.0, y);
}

inline BigFloat mul_rel(const BigFloat& x, double rel) {
    return x * BigFloat::from_double(rel);
}

// Decimal scientific rendering, usable at any exponent. ~15 digits.
inline std::string to_string_sci(const BigFloat& x) {
    if (x.is_zero()) return "0";
    if (!x.is_finite()) return x.mant > 0 ? "inf" : (x.is_nan() ? "nan" : "-inf");
    double l10 = static_cast<double>(x.exp2) * 0.30102999566398119521 +
                 std::log10(std::fabs(x.mant));
    double e10 = std::floor(l10);
    double frac = std::pow(10.0, l10 - e10);
    if (frac >= 10.0) {
        frac /= 10.0;
        e10 += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%.15fe%+.0f", x.mant < 0 ? "-" : "", frac, e10);
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Outward-rounded intervals.
// ---------------------------------------------------------------------------

namespace detail {
constexpr double kWiden = 0x1.0p-48;  // covers double rounding + alignment drops

inline BigFloat nudge_down(const BigFloat& v, double rel = kWiden) {
    if (v.is_zero()) return v;
    double f = v.sign() > 0 ? (1.0 - rel) : (1.0 + rel);
    return v * BigFloat::from_double(f);
}
inline BigFloat nudge_up(const BigFloat& v, double rel = kWiden) {
    if (v.is_zero()) return v;
    double f = v.sign() > 0 ? (1.0 + rel) : (1.0 - rel);
    return v * BigFloat::from_double(f);
}
}  // namespace detail

struct XInterval {
    BigFloat lo, hi;

    XInterval() = default;
    XInterval(BigFloat l, BigFloat h) : lo(l), hi(h) {
        if (h < l) throw std::logic_error("XInterval: lo > hi");
    }
    static XInterval point(const BigFloat& v) { return XInterval(v, v); }
    static XInterval point(double v) { return point(BigFloat::from_double(v)); }
    static XInterval zero() { return XInterval(); }

    bool is_point() const { return lo == hi; }
    BigFloat mid() const { return (lo + hi) * BigFloat::from_double(0.5); }
    BigFloat width() const { return hi - lo; }

    XInterval widened() const {
        return XInterval(detail::nudge_down(lo), detail::nudge_up(hi));
    }

    friend XInterval operator+(const XInterval& a, const XInterval& b) {
        return XInterval(a.lo + b.lo, a.hi + b.hi).widened();
    }
    friend XInterval operator-(const XInterval& a, const XInterval& b) {
        return XInterval(a.lo - b.hi, a.hi - b.lo).widened();
    }
    friend XInterval operator*(const XInterval& a, const XInterval& b) {
        BigFloat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
        BigFloat lo = min(min(p1, p2), min(p3, p4));
        BigFloat hi = max(max(p1, p2), max(p3, p4));
        return XInterval(lo, hi).widened();
    }
    friend XInterval operator/(const XInterval& a, const XInterval& b) {
        if (b.lo.sign() <= 0 && b.hi.sign() >= 0)
            throw std::domain_error("XInterval: divisor interval contains zero");
        BigFloat p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
        BigFloat lo = min(min(p1, p2), min(p3, p4));
        BigFloat hi = max(max(p1, p2), max(p3, p4));
        return XInterval(lo, hi).widened();
    }

    XInterval operator*(double s) const { return *this * point(s); }
    XInterval operator+(double s) const { return *this + point(s); }

    // Clamp the lower end up to `floor_v` (valid when the true value is known >= floor_v).
    XInterval clamped_below(const BigFloat& floor_v = BigFloat::zero()) const {
        XInterval r = *this;
        if (r.lo < floor_v) r.lo = floor_v;
        if (r.hi < r.lo) r.hi = r.lo;
        return r;
    }
};

// Monotone power map on a nonnegative interval.
inline XInterval pow(const XInterval& x, double e) {
    if (x.lo.sign() < 0) throw std::domain_error("XInterval: pow of interval below zero");
    double s1 = pow_rel_slack(x.lo, e), s2 = pow_rel_slack(x.hi, e);
    double slack = std::max(s1, s2);
    BigFloat a = lpq::pow(x.lo, e), b = lpq::pow(x.hi, e);
    if (e < 0) std::swap(a, b);
    return XInterval(detail::nudge_down(a, slack + detail::kWiden),
                     detail::nudge_up(b, slack + detail::kWiden));
}

inline XInterval max(const XInterval& a, const XInterval& b) {
    return XInterval(max(a.lo, b.lo), max(a.hi, b.hi));
}

// Certified (directed) comparison: true only when the intervals separate.
inline bool certified_le(const XInterval& a, const XInterval& b) { return a.hi <= b.lo; }
inline bool certified_lt(const XInterval& a, const XInterval& b) { return a.hi < b.lo; }

}  // namespace lpq
