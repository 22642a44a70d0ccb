#include "stripwave/interval.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cctype>
#include <algorithm>

namespace stripwave {

using detail::next_down;
using detail::next_up;

// ---------------------------------------------------------------------------
// constants
//
// Hex doubles bracketing the true values one ulp apart; the test suite
// re-derives them with a 256-bit oracle, so a typo here cannot survive.

IScalar pi_enclosure() {
    return IScalar(0x1.921fb54442d18p+1, 0x1.921fb54442d19p+1);
}

IScalar ln2_enclosure() {
    return IScalar(0x1.62e42fefa39efp-1, 0x1.62e42fefa39f0p-1);
}

namespace {

// Argument-reduction splits (classic libm tables).  The *_REST intervals
// absorb whatever the finite splits miss, so the reduction below is an
// enclosure no matter how the float subtractions round.
constexpr double LN2_HI = 6.93147180369123816490e-01;  // 33 bits
constexpr double LN2_LO = 1.90821492927058770002e-10;
const IScalar LN2_REST(-2e-26, 2e-26);                 // ln2 - LN2_HI - LN2_LO (~1.16e-26)

constexpr double PIO2_1 = 1.57079632673412561417e+00;  // 33 bits
constexpr double PIO2_2 = 6.07710050630396597660e-11;  // 33 bits
constexpr double PIO2_3 = 2.02226624871116645580e-21;  // 33 bits
const IScalar PIO2_REST(8.4784276603e-32, 8.4784276604e-32); // pi/2 - PIO2_1 - PIO2_2 - PIO2_3

const double DMAX = std::numeric_limits<double>::max();
const double DINF = std::numeric_limits<double>::infinity();
const double DTINY = std::numeric_limits<double>::denorm_min();

IScalar inv_factorial(long n) {
    double f = 1.0;
    for (long i = 2; i <= n; ++i) f *= double(i); // exact through 18!
    return IScalar(1.0) / IScalar(f);
}

// pointwise enclosure of e^x
IScalar exp_point(double x) {
    if (x >= 710.0) return IScalar(DMAX, DINF);
    if (x <= -745.0) return IScalar(0.0, DTINY);
    double k = std::nearbyint(x * 1.4426950408889634); // x / ln2, any nearby integer works
    IScalar r = ((IScalar(x) - IScalar(k) * IScalar(LN2_HI)) - IScalar(k) * IScalar(LN2_LO))
                - IScalar(k) * LN2_REST;
    // |r| <= ln2/2 + slack; degree-13 Taylor with explicit remainder
    IScalar p(1.0);
    for (long i = 13; i >= 1; --i) p = p * r * (IScalar(1.0) / IScalar(double(i))) + IScalar(1.0);
    IScalar rem = pow_k(iabs(r), 14) * inv_factorial(14) * IScalar(1.5); // 1.5 > e^0.35
    p = p + IScalar(-rem.hi(), rem.hi());
    int ki = int(k);
    double lo = std::ldexp(p.lo(), ki), hi = std::ldexp(p.hi(), ki);
    // ldexp is exact except at the subnormal/overflow edges
    if (std::isinf(hi)) { /* +inf is a valid upper bound */ }
    else if (std::fabs(hi) < std::numeric_limits<double>::min()) hi = next_up(hi);
    if (std::isinf(lo)) lo = DMAX;
    else if (std::fabs(lo) < std::numeric_limits<double>::min() && lo != 0.0) lo = next_down(lo);
    if (lo < 0) lo = 0; // e^x > 0 always
    return IScalar(lo, hi);
}

// reduce x to r in [-pi/4 - eps, pi/4 + eps] with quadrant q: x = r + (q + 4m) * pi/2
IScalar reduce_pio2(double x, int& q) {
    double k = std::nearbyint(x * 0.6366197723675814); // 2/pi
    IScalar r = ((((IScalar(x) - IScalar(k) * IScalar(PIO2_1)) - IScalar(k) * IScalar(PIO2_2))
                  - IScalar(k) * IScalar(PIO2_3)) - IScalar(k) * PIO2_REST);
    long long kl = (long long)k;
    q = int(((kl % 4) + 4) % 4);
    return r;
}

// sin and cos on |r| <= pi/4 + eps via Taylor with explicit remainders
IScalar sin_small(const IScalar& r) {
    IScalar r2 = sqr(r);
    IScalar p(0.0);
    for (long i = 7; i >= 1; --i) {
        IScalar c = inv_factorial(2 * i + 1);
        if (i % 2 == 1) c = -c;
        p = (p + c) * r2;
    }
    IScalar s = r * (p + IScalar(1.0));
    IScalar rem = pow_k(iabs(r), 17) * inv_factorial(17);
    return s + IScalar(-rem.hi(), rem.hi());
}

IScalar cos_small(const IScalar& r) {
    IScalar r2 = sqr(r);
    IScalar p(0.0);
    for (long i = 8; i >= 1; --i) {
        IScalar c = inv_factorial(2 * i);
        if (i % 2 == 1) c = -c;
        p = (p + c) * r2;
    }
    IScalar s = p + IScalar(1.0);
    IScalar rem = pow_k(iabs(r), 18) * inv_factorial(18);
    s = s + IScalar(-rem.hi(), rem.hi());
    return intersect(s, IScalar(-1.0, 1.0));
}

IScalar sin_point(double x) {
    if (std::fabs(x) > 1e6) return IScalar(-1.0, 1.0); // out of the validated reduction range
    int q;
    IScalar r = reduce_pio2(x, q);
    switch (q) {
        case 0: return sin_small(r);
        case 1: return cos_small(r);
        case 2: return -sin_small(r);
        default: return -cos_small(r);
    }
}

IScalar cos_point(double x) {
    if (std::fabs(x) > 1e6) return IScalar(-1.0, 1.0);
    int q;
    IScalar r = reduce_pio2(x, q);
    switch (q) {
        case 0: return cos_small(r);
        case 1: return -sin_small(r);
        case 2: return -cos_small(r);
        default: return sin_small(r);
    }
}

// Critical points of sin (at pi/2 + j pi) or cos (at j pi) inside [a, b]:
// conservatively include the corresponding extremum when an integer j may
// lie in the enclosure of (x - offset)/pi.
void include_extrema(const IScalar& x, double offset_num, IScalar& out) {
    IScalar pi = pi_enclosure();
    IScalar j = (x - pi * IScalar(offset_num)) / pi;
    double j0 = std::floor(j.lo()), j1 = std::ceil(j.hi());
    for (double jj = j0; jj <= j1; jj += 1.0) {
        if (jj >= j.lo() && jj <= j.hi()) {
            bool even = std::fmod(std::fabs(jj), 2.0) < 0.5;
            out = hull(out, IScalar(even ? 1.0 : -1.0));
        }
    }
}

} // namespace

IScalar exp(const IScalar& x) {
    return IScalar(exp_point(x.lo()).lo(), exp_point(x.hi()).hi());
}

IScalar sqrt(const IScalar& x) {
    if (x.lo() < 0) throw DomainError("sqrt of an interval reaching below zero");
    return IScalar(detail::sqrt_down(x.lo()), detail::sqrt_up(x.hi()));
}

IScalar sin(const IScalar& x) {
    if (x.width() >= 6.283185307179586) return IScalar(-1.0, 1.0);
    IScalar out = hull(sin_point(x.lo()), sin_point(x.hi()));
    include_extrema(x, 0.5, out); // extrema of sin at pi/2 + j pi; sin there = (-1)^j
    return intersect(out, IScalar(-1.0, 1.0));
}

IScalar cos(const IScalar& x) {
    if (x.width() >= 6.283185307179586) return IScalar(-1.0, 1.0);
    IScalar out = hull(cos_point(x.lo()), cos_point(x.hi()));
    include_extrema(x, 0.0, out); // extrema of cos at j pi; cos there = (-1)^j
    return intersect(out, IScalar(-1.0, 1.0));
}

IScalar cosh(const IScalar& x) {
    auto point = [](double v) {
        IScalar e = exp_point(v), en = exp_point(-v);
        return (e + en) * IScalar(0.5);
    };
    if (x.lo() <= 0 && x.hi() >= 0) {
        IScalar hi = hull(point(x.lo()), point(x.hi()));
        return IScalar(1.0, hi.hi());
    }
    IScalar a = point(x.lo()), b = point(x.hi());
    return IScalar(std::fmin(a.lo(), b.lo()), std::fmax(a.hi(), b.hi()));
}

IScalar pow_k(const IScalar& x, long k) {
    if (k == 0) return IScalar(1.0);
    if (k < 0) return IScalar(1.0) / pow_k(x, -k);
    if (k == 2) {
        // squaring respects the sign coupling that plain x*x loses
        double lo = x.mig(), hi = x.mag();
        return IScalar(detail::mul_down(lo, lo), detail::mul_up(hi, hi));
    }
    IScalar acc(1.0), base = x;
    long e = k;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = pow_k(base, 2);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// decimal parsing / formatting

namespace {

struct DecimalDigits {
    bool neg = false;
    std::string digits; // no leading/trailing zeros, empty means zero
    long exp10 = 0;     // value = digits * 10^(exp10 - len(digits)) -- i.e. exp of first digit + 1
};

// normalize "−12.340e5"-style text into sign/digits/exponent
DecimalDigits normalize_decimal(const std::string& s) {
    DecimalDigits d;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) { d.neg = s[i] == '-'; ++i; }
    std::string intpart, fracpart;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) intpart += s[i++];
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) fracpart += s[i++];
    }
    long e = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) { eneg = s[i] == '-'; ++i; }
        if (i >= s.size()) throw FormatError("empty exponent in '" + s + "'");
        while (i < s.size() && std::isdigit((unsigned char)s[i])) e = e * 10 + (s[i++] - '0');
        if (eneg) e = -e;
    }
    if (i != s.size() || (intpart.empty() && fracpart.empty()))
        throw FormatError("not a decimal number: '" + s + "'");
    std::string all = intpart + fracpart;
    long point = long(intpart.size()) + e; // 10-exponent of the digit to the left of position 0
    size_t first = all.find_first_not_of('0');
    if (first == std::string::npos) return d; // zero
    size_t last = all.find_last_not_of('0');
    d.digits = all.substr(first, last - first + 1);
    d.exp10 = point - long(first);
    return d;
}

// every finite double has a finite decimal expansion; retrieve and normalize it
DecimalDigits exact_decimal_of(double v) {
    char buf[1200];
    std::snprintf(buf, sizeof buf, "%.*e", 767, v);
    return normalize_decimal(buf);
}

bool same_decimal(const DecimalDigits& a, const DecimalDigits& b) {
    if (a.digits.empty() && b.digits.empty()) return true;
    return a.neg == b.neg && a.digits == b.digits && a.exp10 == b.exp10;
}

} // namespace

IScalar parse_decimal_outward(const std::string& s) {
    std::string t = s;
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (t == "inf") return IScalar(DMAX, DINF);
    if (t == "-inf") return IScalar(-DINF, -DMAX);
    DecimalDigits want = normalize_decimal(t);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw FormatError("trailing junk in '" + s + "'");
    if (std::isinf(v)) return v > 0 ? IScalar(DMAX, DINF) : IScalar(-DINF, -DMAX);
    if (want.digits.empty()) return IScalar(0.0);
    if (v == 0.0) {
        // magnitude below the subnormal floor
        return want.neg ? IScalar(-DTINY, 0.0) : IScalar(0.0, DTINY);
    }
    if (same_decimal(want, exact_decimal_of(v))) return IScalar(v);
    return IScalar(next_down(v), next_up(v)); // strtod rounds to nearest, so the truth is inside
}

std::string shortest_decimal(double v) {
    if (std::isnan(v)) throw DomainError("cannot format NaN");
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace stripwave
