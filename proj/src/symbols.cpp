#include "stripwave/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace stripwave {

namespace {

// l_{n2} at a point frequency
IScalar l_n2_point(double xi1, int n2, double d2, const IScalar& c) {
    IScalar x(xi1);
    IScalar t2 = IScalar(double(n2)) / IScalar(2.0 * d2);
    return l_symbol(x, t2, c);
}

IScalar elementwise_min(const IScalar& x, const IScalar& y) {
    return IScalar(std::min(x.lo(), y.lo()), std::min(x.hi(), y.hi()));
}

// (2 pi n2~)^2 as an interval
IScalar mode_freq_sq(int n2, double d2) {
    IScalar v = pi_enclosure() * IScalar(double(n2)) / IScalar(d2);
    return sqr(v);
}

} // namespace

IScalar kappa1(const IScalar& c) {
    IScalar den = IScalar(1.0) - pow_k(c, 4) / IScalar(4.0);
    if (!(den.lo() > 0.0))
        throw DomainError("kappa1: wave speed must satisfy c^4 < 4");
    return IScalar(1.0) / den;
}

IScalar min_l_n2(int n2, double d2, const IScalar& c) {
    // minimize p(x) = (x + w)^2 - c^2 x + 1 over x = (2 pi xi_1)^2 >= 0,
    // w = (2 pi n2~)^2; unconstrained minimizer x = c^2/2 - w
    IScalar w = mode_freq_sq(n2, d2);
    IScalar c2 = sqr(c);
    IScalar inner = w * c2 + IScalar(1.0) - pow_k(c, 4) / IScalar(4.0); // x* > 0 branch
    IScalar edge = sqr(w) + IScalar(1.0);                               // x* <= 0 branch
    IScalar half_c2 = c2 / IScalar(2.0);
    if (w.hi() < half_c2.lo()) return inner;
    if (w.lo() > half_c2.hi()) return edge;
    return hull(inner, edge); // branches agree at the crossover
}

IScalar min_l_outside(int n1max, int n2max, double d1, double d2, const IScalar& c) {
    // complement of the index box = {n2 > n2max} union {n1 > n1max, n2 <= n2max}
    IScalar region_a = min_l_n2(n2max + 1, d2, c);
    // second region: minimize over n2 at n2 = 0 (the symbol grows with n2),
    // then over x = (2 pi n1~)^2 >= x0
    IScalar x0 = sqr(pi_enclosure() * IScalar(double(n1max + 1)) / IScalar(d1));
    IScalar half_c2 = sqr(c) / IScalar(2.0);
    IScalar region_b;
    if (x0.lo() >= half_c2.hi()) {
        region_b = x0 * (x0 - sqr(c)) + IScalar(1.0); // increasing past c^2/2
    } else {
        region_b = IScalar(1.0) - pow_k(c, 4) / IScalar(4.0); // global floor
    }
    return elementwise_min(region_a, region_b);
}

IScalar kappa2(double d2, const IScalar& c, int n2_terms) {
    kappa1(c); // validates the speed range
    const IScalar pi = pi_enclosure();
    // the analytic tail needs the split index N > d2 c / pi
    IScalar thr = IScalar(d2) * c / pi;
    int N = std::max(n2_terms, int(std::floor(thr.hi())) + 1);
    N = std::max(N, 1);

    const double T = 2.0; // quadrature window [0, T]; tail is analytic past T
    IScalar sum(0.0);
    for (int n2 = 0; n2 <= N; ++n2) {
        const int M = n2 <= 2 ? 32768 : n2 <= 8 ? 4096 : n2 <= 32 ? 1024 : 256;
        const double h = T / M;
        IScalar w = mode_freq_sq(n2, d2);
        IScalar minl = min_l_n2(n2, d2, c);
        if (!(minl.lo() > 0.0)) throw DomainError("kappa2: symbol is not positive");
        // interior critical frequency: xi^2 = c^2/(2 (2pi)^2) - n2~^2, if positive
        IScalar two_pi_sq = sqr(IScalar(2.0) * pi);
        IScalar crit_sq = sqr(c) / (IScalar(2.0) * two_pi_sq) - w / two_pi_sq;
        bool has_crit = crit_sq.hi() > 0.0;
        IScalar crit = has_crit ? sqrt(IScalar(std::max(0.0, crit_sq.lo()), crit_sq.hi()))
                                : IScalar(0.0);

        std::vector<IScalar> vals;
        vals.reserve(M + 1);
        for (int i = 0; i <= M; ++i) vals.push_back(l_n2_point(i * h, n2, d2, c));

        // exact per-cell ranges from the single-dip shape of l_{n2}
        IScalar integral(0.0);
        for (int i = 0; i < M; ++i) {
            double p = i * h, q = (i + 1) * h;
            IScalar range;
            if (has_crit && q <= crit.lo()) {
                range = IScalar(vals[i + 1].lo(), vals[i].hi()); // decreasing
            } else if (!has_crit || p >= crit.hi()) {
                range = IScalar(vals[i].lo(), vals[i + 1].hi()); // increasing
            } else {
                range = IScalar(minl.lo(), std::max(vals[i].hi(), vals[i + 1].hi()));
            }
            integral += IScalar(h) * pow_k(range, -2);
        }

        // for xi >= T: l_{n2} >= eta (2 pi)^4 xi^4 with eta = 1 - c^2/(2 pi T)^2
        IScalar eta = IScalar(1.0) - sqr(c) / (two_pi_sq * IScalar(T * T));
        if (!(eta.lo() > 0.0)) throw DomainError("kappa2: tail window too small");
        IScalar tail_xi = IScalar(1.0) /
                          (sqr(eta) * pow_k(IScalar(2.0) * pi, 8) * IScalar(7.0) * pow_k(IScalar(T), 7));
        IScalar l2sq = IScalar(2.0) * (integral + tail_xi); // both half-lines
        sum += (n2 == 0 ? IScalar(1.0) : IScalar(2.0)) * l2sq;
    }

    // 2 sum_{n2 > N} ||1/l_{n2}||^2 <= 5 (2 d2)^7 / (48 (2 pi)^7 N^6)
    IScalar tail = IScalar(5.0) * pow_k(IScalar(2.0 * d2), 7) /
                   (IScalar(48.0) * pow_k(IScalar(2.0) * pi, 7) * pow_k(IScalar(double(N)), 6));
    return sqrt(sum + tail);
}

DecayConstants decay_constants(int n2, double d2, const IScalar& c, const IScalar& mu) {
    // roots of (z + w)^2 - c^2 z + 1 - mu in z = xi^2 (xi the 2pi-rescaled
    // frequency) are (b +- i a)^2 up to signs; stable split below avoids the
    // cancellation in s -+ t for large / small modes
    IScalar w = mode_freq_sq(n2, d2);
    IScalar c2 = sqr(c);
    IScalar num = IScalar(4.0) * (IScalar(1.0) + c2 * w - mu) - pow_k(c, 4);
    if (!(num.lo() > 0.0))
        throw RadicandNotPositive("decay constants need c^4 < 4(1 + c^2 (2 pi n2~)^2 - mu)");
    IScalar t = IScalar(2.0) * w - c2;
    IScalar s = sqrt(sqr(t) + num);

    IScalar splus = s + t;   // = 4 a^2, cancels when t << 0 (never: t >= -c^2)
    IScalar sminus = s - t;  // = 4 b^2, cancels when t >> 0
    IScalar a2 = splus / IScalar(4.0);
    if (splus.lo() > 0.0) a2 = intersect(a2, num / (IScalar(4.0) * sminus));
    IScalar b2 = num / (IScalar(4.0) * splus);
    if (sminus.lo() > 0.0) b2 = intersect(b2, sminus / IScalar(4.0));

    DecayConstants out;
    out.a = sqrt(a2);
    out.b = sqrt(b2);
    // kernel: f(x) = e^{-a|x|}(b cos(bx) + a sign(x) sin(bx)) / (sqrt(num)(a^2+b^2)),
    // so the sharp envelope constant is 1/(sqrt(a^2+b^2) sqrt(num)), a^2+b^2 = s/2
    out.C = IScalar(1.0) / (sqrt(s / IScalar(2.0)) * sqrt(num));
    return out;
}

IScalar decay_rate_inf(double d2, const IScalar& c, const IScalar& mu) {
    // a_{n2}^2 = (s + t)/4 with t = 2 w - c^2, s = sqrt(t^2 + num); once
    // t >= 0 both t and num grow with w, hence so do s and a.  Scan up to
    // that point and one step beyond.
    IScalar best = decay_constants(0, d2, c, mu).a;
    for (int n2 = 1; n2 <= 1 << 20; ++n2) {
        IScalar w = mode_freq_sq(n2, d2);
        IScalar t = IScalar(2.0) * w - sqr(c);
        IScalar a = decay_constants(n2, d2, c, mu).a;
        best = elementwise_min(best, a);
        if (t.lo() >= 0.0) return best;
    }
    throw NonConvergence("decay_rate_inf: scan did not reach the monotone regime");
}

IScalar cd1_constant(const IScalar& a, double d1) {
    if (!(a.lo() > 0.0) || !(d1 > 0.0))
        throw DomainError("cd1_constant: need a > 0 and d1 > 0");
    IScalar ad1 = a * IScalar(d1);
    IScalar e1 = exp(IScalar(0.0) - ad1);
    IScalar e32 = exp(IScalar(0.0) - IScalar(1.5) * ad1);
    IScalar e2 = exp(IScalar(0.0) - IScalar(2.0) * ad1);
    return IScalar(4.0 * d1) + IScalar(4.0) * e1 / (a * (IScalar(1.0) - e32)) +
           IScalar(2.0) / (a * (IScalar(1.0) - e2));
}

} // namespace stripwave
