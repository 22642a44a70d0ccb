#pragma once
// The linear symbol l(xi) = |2 pi xi|^4 - c^2 (2 pi xi_1)^2 + 1 of the
// fourth-order operator, its per-mode restrictions l_{n2}, the embedding
// constants kappa1/kappa2, and the exponential decay data (a_{n2}, b_{n2},
// C_{n2}) of the mode Green's functions.  Everything here feeds the
// certification bounds, so the interval versions are the primary ones.

#include "stripwave/interval.hpp"
#include "stripwave/errors.hpp"
#include "stripwave/scalar_ops.hpp"

namespace stripwave {

// l evaluated at general frequencies
template <class S>
S l_symbol(const S& xi1, const S& xi2, const S& c) {
    S pi2 = S(2.0) * scal::pi_val<S>();
    S p2 = pi2 * pi2;
    S r2 = xi1 * xi1 + xi2 * xi2;
    return p2 * p2 * r2 * r2 - c * c * p2 * xi1 * xi1 + S(1.0);
}

// l at the lattice frequency (n1/(2 d1), n2/(2 d2))
template <class S>
S l_index(int n1, int n2, double d1, double d2, const S& c) {
    S t1 = S(double(n1)) / S(2.0 * d1);
    S t2 = S(double(n2)) / S(2.0 * d2);
    return l_symbol(t1, t2, c);
}

// min over xi_1 in R of l_{n2}(xi_1); positive for c in (0, sqrt(2))
IScalar min_l_n2(int n2, double d2, const IScalar& c);

// lower bound for l(n~) over all lattice indices OUTSIDE the box
// [0..n1max] x [0..n2max]
IScalar min_l_outside(int n1max, int n2max, double d1, double d2, const IScalar& c);

// kappa1 = 1/(1 - c^4/4); throws DomainError when c^4 >= 4
IScalar kappa1(const IScalar& c);

// kappa2 = (||1/l_0||_{L^2(R)}^2 + 2 sum_{n2>=1} ||1/l_{n2}||^2)^{1/2},
// head of the sum by interval quadrature, tail analytic.  n2_terms picks the
// split point and is clamped up until the tail estimate is valid.
IScalar kappa2(double d2, const IScalar& c, int n2_terms = 64);

// |f_{n2}(x)| <= C e^{-a|x|} where f_{n2} is the inverse Fourier transform
// of 1/l_{n2}; b is the oscillation rate of f_{n2} itself.  A nonzero shift
// mu produces the constants of the shifted symbol l_{n2} - mu (used by the
// spectral enclosures); a and b shrink with mu while C grows.
struct DecayConstants {
    IScalar a, b, C;
};
DecayConstants decay_constants(int n2, double d2, const IScalar& c,
                               const IScalar& mu = IScalar(0.0));

// inf over n2 of a_{n2} (attained near n2 = 0; the scan is closed off by a
// monotonicity argument once 2(2 pi n2~)^2 >= c^2)
IScalar decay_rate_inf(double d2, const IScalar& c, const IScalar& mu = IScalar(0.0));

// C(d1) = 4 d1 + 4 e^{-a d1}/(a(1-e^{-3 a d1/2})) + 2/(a(1-e^{-2 a d1}))
IScalar cd1_constant(const IScalar& a, double d1);

} // namespace stripwave
