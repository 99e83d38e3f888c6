#pragma once

// Certified enclosures at double precision and three-valued verdicts.
//
// Exact finite computations return lo == hi; tail sums of power-tail
// sequences return genuine brackets. Comparisons are directed: a "pass"
// needs the enclosures to separate (up to the stated tolerance), an
// overlap is reported as Undecided, never coerced.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "lpq/xfloat.hpp"

namespace lpq {

constexpr double kSumTol = 1e-12;  // default absolute tolerance on exact finite sums

struct CertifiedValue {
    double lo = 0.0;
    double hi = 0.0;

    CertifiedValue() = default;
    CertifiedValue(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw std::logic_error("CertifiedValue: lo > hi");
    }
    static CertifiedValue exact(double v) { return CertifiedValue(v, v); }

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool is_exact() const { return lo == hi; }

    friend CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b) {
        return CertifiedValue(a.lo + b.lo, a.hi + b.hi);
    }
    friend CertifiedValue operator-(const CertifiedValue& a, const CertifiedValue& b) {
        return CertifiedValue(a.lo - b.hi, a.hi - b.lo);
    }
    friend CertifiedValue operator*(const CertifiedValue& a, const CertifiedValue& b) {
        double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
        return CertifiedValue(std::min(std::min(p1, p2), std::min(p3, p4)),
                              std::max(std::max(p1, p2), std::max(p3, p4)));
    }
    CertifiedValue scaled(double s) const {
        return s >= 0 ? CertifiedValue(lo * s, hi * s) : CertifiedValue(hi * s, lo * s);
    }
};

// x^e for a nonnegative enclosure, monotone in each bound.
inline CertifiedValue pow_cert(const CertifiedValue& v, double e) {
    if (v.lo < 0) throw std::domain_error("pow_cert: enclosure below zero");
    double a = std::pow(v.lo, e), b = std::pow(v.hi, e);
    if (e < 0) std::swap(a, b);
    return CertifiedValue(a, b);
}

enum class Verdict { Pass, Fail, Undecided };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "undecided";
    }
}

inline Verdict worst(Verdict a, Verdict b) {
    if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
    if (a == Verdict::Undecided || b == Verdict::Undecided) return Verdict::Undecided;
    return Verdict::Pass;
}

// Certified "a <= b": pass iff hi(a) <= lo(b) + tol, fail iff lo(a) > hi(b) + tol.
inline Verdict certified_le(const CertifiedValue& a, const CertifiedValue& b,
                            double tol = kSumTol) {
    if (a.hi <= b.lo + tol) return Verdict::Pass;
    if (a.lo > b.hi + tol) return Verdict::Fail;
    return Verdict::Undecided;
}

inline Verdict certified_eq(const CertifiedValue& a, const CertifiedValue& b,
                            double tol = kSumTol) {
    return worst(certified_le(a, b, tol), certified_le(b, a, tol));
}

// Saturating conversion from the extended-range interval. The lower bound
// saturates toward zero/DBL_MAX and the upper toward the smallest positive
// double/infinity, preserving containment.
inline CertifiedValue to_certified(const XInterval& x) {
    double lo, hi;
    if (x.lo.is_zero() || x.lo.fits_double()) {
        lo = x.lo.to_double();
    } else if (x.lo.exp2 < 0) {
        lo = x.lo.sign() > 0 ? 0.0 : -std::numeric_limits<double>::max();
    } else {
        lo = x.lo.sign() > 0 ? std::numeric_limits<double>::max()
                             : -std::numeric_limits<double>::infinity();
    }
    if (x.hi.is_zero() || x.hi.fits_double()) {
        hi = x.hi.to_double();
    } else if (x.hi.exp2 < 0) {
        hi = x.hi.sign() > 0 ? std::ldexp(1.0, -1000) : 0.0;
    } else {
        hi = x.hi.sign() > 0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::max();
    }
    if (lo > hi) lo = hi;
    return CertifiedValue(lo, hi);
}

inline XInterval to_xinterval(const CertifiedValue& v) {
    return XInterval(BigFloat::from_double(v.lo), BigFloat::from_double(v.hi));
}

}  // namespace lpq
