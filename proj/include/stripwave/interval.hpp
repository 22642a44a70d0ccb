#pragma once
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <string>

#include "stripwave/errors.hpp"

namespace stripwave {

// Closed interval [lo, hi] of doubles with outward rounding.
//
// Directed rounding is obtained from round-to-nearest arithmetic plus
// error-free transformations (TwoSum for +/-, fma residuals for *,/,sqrt),
// so results are 1-ulp tight and *exact operations stay exact*:
// [1,1]+[2,2] is [3,3], not a widened blur.  No rounding-mode switching is
// involved, which keeps values immutable and the code trivially thread-safe.
//
// Infinities are legal endpoints and act as saturation: once a bound
// overflows it poisons everything downstream, which is the honest outcome.
// NaN endpoints are rejected at construction.

namespace detail {

inline double next_up(double x) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) return x;
    if (x == 0.0) return std::numeric_limits<double>::denorm_min();
    std::uint64_t u;
    std::memcpy(&u, &x, 8);
    u = (u >> 63) ? u - 1 : u + 1;
    std::memcpy(&x, &u, 8);
    return x;
}

inline double next_down(double x) {
    if (std::isnan(x) || x == -std::numeric_limits<double>::infinity()) return x;
    if (x == 0.0) return -std::numeric_limits<double>::denorm_min();
    std::uint64_t u;
    std::memcpy(&u, &x, 8);
    u = (u >> 63) ? u + 1 : u - 1;
    std::memcpy(&x, &u, 8);
    return x;
}

// TwoSum: s + err == a + b exactly (all finite doubles, no underflow caveat).
inline double two_sum_err(double a, double b, double s) {
    double bv = s - a;
    double av = s - bv;
    return (a - av) + (b - bv);
}

// Below this magnitude the fma residual of a product may itself be inexact
// (result under the subnormal cliff), so we widen unconditionally.
inline constexpr double kProductEftFloor = 0x1p-969;

inline double add_down(double a, double b) {
    double s = a + b;
    if (std::isinf(s)) return s > 0 ? std::numeric_limits<double>::max() : s;
    double e = two_sum_err(a, b, s);
    return e < 0 ? next_down(s) : s;
}

inline double add_up(double a, double b) {
    double s = a + b;
    if (std::isinf(s)) return s < 0 ? -std::numeric_limits<double>::max() : s;
    double e = two_sum_err(a, b, s);
    return e > 0 ? next_up(s) : s;
}

inline double mul_down(double a, double b) {
    double p = a * b;
    if (std::isinf(p)) return p > 0 ? std::numeric_limits<double>::max() : p;
    if (p == 0.0) {
        if (a == 0.0 || b == 0.0) return 0.0;
        // magnitude underflowed: sign of the true product decides the bound
        return ((a > 0) == (b > 0)) ? 0.0 : -std::numeric_limits<double>::denorm_min();
    }
    if (std::fabs(p) < kProductEftFloor) return next_down(p);
    double e = std::fma(a, b, -p);
    return e < 0 ? next_down(p) : p;
}

inline double mul_up(double a, double b) {
    double p = a * b;
    if (std::isinf(p)) return p < 0 ? -std::numeric_limits<double>::max() : p;
    if (p == 0.0) {
        if (a == 0.0 || b == 0.0) return 0.0;
        return ((a > 0) == (b > 0)) ? std::numeric_limits<double>::denorm_min() : 0.0;
    }
    if (std::fabs(p) < kProductEftFloor) return next_up(p);
    double e = std::fma(a, b, -p);
    return e > 0 ? next_up(p) : p;
}

// Directed a/b.  b must be nonzero (zero-straddling divisors are handled by
// the interval-level operator).
inline double div_down(double a, double b) {
    double q = a / b;
    if (std::isinf(q)) return q > 0 ? std::numeric_limits<double>::max() : q;
    if (q == 0.0) return a == 0.0 ? 0.0 : ((a > 0) == (b > 0) ? 0.0 : -std::numeric_limits<double>::denorm_min());
    if (std::fabs(q * b) < kProductEftFloor || std::fabs(q) < kProductEftFloor) return next_down(q);
    double r = std::fma(q, b, -a); // q*b - a, exact; true quotient = q - r/b
    if (r == 0) return q;
    return ((r > 0) == (b > 0)) ? next_down(q) : q;
}

inline double div_up(double a, double b) {
    double q = a / b;
    if (std::isinf(q)) return q < 0 ? -std::numeric_limits<double>::max() : q;
    if (q == 0.0) return a == 0.0 ? 0.0 : ((a > 0) == (b > 0) ? std::numeric_limits<double>::denorm_min() : 0.0);
    if (std::fabs(q * b) < kProductEftFloor || std::fabs(q) < kProductEftFloor) return next_up(q);
    double r = std::fma(q, b, -a);
    if (r == 0) return q;
    return ((r > 0) == (b > 0)) ? q : next_up(q);
}

inline double sqrt_down(double x) {
    double r = std::sqrt(x);
    if (std::isinf(r)) return std::numeric_limits<double>::max();
    double e = std::fma(r, r, -x); // r^2 - x
    return e > 0 ? next_down(r) : r;
}

inline double sqrt_up(double x) {
    double r = std::sqrt(x);
    double e = std::fma(r, r, -x);
    return e < 0 ? next_up(r) : r;
}

} // namespace detail

class IScalar {
public:
    IScalar() : lo_(0), hi_(0) {}
    IScalar(double v) : lo_(v), hi_(v) {
        if (std::isnan(v)) throw InvalidInterval("NaN endpoint");
    }
    IScalar(double lo, double hi) : lo_(lo), hi_(hi) {
        if (std::isnan(lo) || std::isnan(hi) || lo > hi)
            throw InvalidInterval("invalid endpoints [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double mid() const { return 0.5 * (lo_ + hi_); }
    double width() const { return detail::add_up(hi_, -lo_); }
    // mag = sup |x|, mig = inf |x| over the interval
    double mag() const { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }
    double mig() const { return (lo_ > 0) ? lo_ : (hi_ < 0 ? -hi_ : 0.0); }

    bool contains(double v) const { return lo_ <= v && v <= hi_; }
    bool contains(const IScalar& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool intersects(const IScalar& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
    bool is_point() const { return lo_ == hi_; }

    // directional certainty predicates
    bool certainly_lt(double v) const { return hi_ < v; }
    bool certainly_gt(double v) const { return lo_ > v; }
    bool certainly_le(double v) const { return hi_ <= v; }
    bool certainly_ge(double v) const { return lo_ >= v; }

    friend IScalar operator-(const IScalar& a) { return IScalar(-a.hi_, -a.lo_); }

    friend IScalar operator+(const IScalar& a, const IScalar& b) {
        return IScalar(detail::add_down(a.lo_, b.lo_), detail::add_up(a.hi_, b.hi_));
    }
    friend IScalar operator-(const IScalar& a, const IScalar& b) {
        return IScalar(detail::add_down(a.lo_, -b.hi_), detail::add_up(a.hi_, -b.lo_));
    }
    friend IScalar operator*(const IScalar& a, const IScalar& b) {
        using namespace detail;
        double l1 = mul_down(a.lo_, b.lo_), l2 = mul_down(a.lo_, b.hi_);
        double l3 = mul_down(a.hi_, b.lo_), l4 = mul_down(a.hi_, b.hi_);
        double u1 = mul_up(a.lo_, b.lo_), u2 = mul_up(a.lo_, b.hi_);
        double u3 = mul_up(a.hi_, b.lo_), u4 = mul_up(a.hi_, b.hi_);
        return IScalar(std::fmin(std::fmin(l1, l2), std::fmin(l3, l4)),
                       std::fmax(std::fmax(u1, u2), std::fmax(u3, u4)));
    }
    friend IScalar operator/(const IScalar& a, const IScalar& b) {
        using namespace detail;
        if (b.lo_ <= 0 && b.hi_ >= 0) throw DomainError("interval division by zero-straddling divisor");
        double l1 = div_down(a.lo_, b.lo_), l2 = div_down(a.lo_, b.hi_);
        double l3 = div_down(a.hi_, b.lo_), l4 = div_down(a.hi_, b.hi_);
        double u1 = div_up(a.lo_, b.lo_), u2 = div_up(a.lo_, b.hi_);
        double u3 = div_up(a.hi_, b.lo_), u4 = div_up(a.hi_, b.hi_);
        return IScalar(std::fmin(std::fmin(l1, l2), std::fmin(l3, l4)),
                       std::fmax(std::fmax(u1, u2), std::fmax(u3, u4)));
    }

    IScalar& operator+=(const IScalar& o) { return *this = *this + o; }
    IScalar& operator-=(const IScalar& o) { return *this = *this - o; }
    IScalar& operator*=(const IScalar& o) { return *this = *this * o; }
    IScalar& operator/=(const IScalar& o) { return *this = *this / o; }

    // equality is *identity of endpoints*, used by containers/Eigen, not a
    // mathematical statement about the represented reals
    friend bool operator==(const IScalar& a, const IScalar& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }
    friend bool operator!=(const IScalar& a, const IScalar& b) { return !(a == b); }

private:
    double lo_, hi_;
};

inline IScalar hull(const IScalar& a, const IScalar& b) {
    return IScalar(std::fmin(a.lo(), b.lo()), std::fmax(a.hi(), b.hi()));
}

inline IScalar intersect(const IScalar& a, const IScalar& b) {
    double lo = std::fmax(a.lo(), b.lo()), hi = std::fmin(a.hi(), b.hi());
    if (lo > hi) throw DomainError("empty interval intersection");
    return IScalar(lo, hi);
}

// enclosure of |x| over the interval
inline IScalar iabs(const IScalar& a) {
    return IScalar(a.mig(), a.mag());
}

IScalar sqrt(const IScalar& x);
IScalar exp(const IScalar& x);
IScalar sin(const IScalar& x);
IScalar cos(const IScalar& x);
IScalar cosh(const IScalar& x);
IScalar pow_k(const IScalar& x, long k); // integer powers, correct across sign changes
inline IScalar sqr(const IScalar& x) { return pow_k(x, 2); }

// Enclosures of pi and log 2 (width one ulp; verified against a high
// precision oracle in the test suite).
IScalar pi_enclosure();
IScalar ln2_enclosure();

// Parse a decimal string into the tightest enclosure of its exact value:
// representable decimals come back as points, "0.1" comes back one ulp wide.
IScalar parse_decimal_outward(const std::string& s);

// Shortest decimal string that strtod parses back to exactly v.
std::string shortest_decimal(double v);

} // namespace stripwave
