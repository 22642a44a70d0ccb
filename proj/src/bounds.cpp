#include "stripwave/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace stripwave {

namespace {

IScalar emin(const IScalar& x, const IScalar& y) {
    return IScalar(std::min(x.lo(), y.lo()), std::min(x.hi(), y.hi()));
}
IScalar emax(const IScalar& x, const IScalar& y) {
    return IScalar(std::max(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

IScalar finite_or_throw(const IScalar& x, const char* who) {
    if (!std::isfinite(x.hi())) throw UnboundedInterval(std::string(who) + ": bound overflowed");
    return x;
}

void require_square_even(const OperatorBlock<IScalar>& BN) {
    if (BN.sector != Sector::even) throw ShapeMismatch("bound blocks live in the even sector");
    if (!(BN.rows_box == BN.cols_box)) throw ShapeMismatch("B^N must be square");
}

} // namespace

CoeffSeq<IScalar> e_sequence(IndexBox box, double d1, double d2, const IScalar& c,
                             const IScalar& mu) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw DomainError("e_sequence: need positive half-periods");
    CoeffSeq<IScalar> e(box, d1, d2);
    IScalar pi = pi_enclosure();
    IScalar id1(d1);
    for (int n2 = 0; n2 <= box.n2max; ++n2) {
        DecayConstants dc = decay_constants(n2, d2, c, mu);
        IScalar csq = sqr(dc.C);
        IScalar a4sq = IScalar(4.0) * sqr(dc.a);
        IScalar damp = IScalar(1.0) - exp(IScalar(-4.0) * dc.a * id1);
        for (int n1 = 0; n1 <= box.n1max; ++n1) {
            IScalar freq = pi * IScalar(double(n1)) / id1; // 2 pi n1~ = pi n1/d1
            IScalar val = csq * dc.a * damp / (id1 * (a4sq + sqr(freq)));
            e.at(n1, n2) = (n1 % 2 == 0) ? val : IScalar(0.0) - val;
        }
    }
    return e;
}

IScalar y0_bound(const CoeffSeq<IScalar>& ubar, const OperatorBlock<IScalar>& BN,
                 const EnclosedSeq& enc, const IScalar& c) {
    require_square_even(BN);
    IndexBox nbox = BN.cols_box, n0 = ubar.box;
    if (!(enc.head.box == n0)) throw ShapeMismatch("y0_bound: enclosure head must sit on ubar's box");
    if (nbox.n1max > n0.n1max || nbox.n2max > n0.n2max)
        throw ShapeMismatch("y0_bound: operator box exceeds the sequence box");
    if (ubar.d1 != enc.head.d1 || ubar.d2 != enc.head.d2)
        throw ShapeMismatch("y0_bound: domain mismatch between ubar and enclosure");
    const double d1 = ubar.d1, d2 = ubar.d2;

    // F(U) on the operator box: l(n~) U_n + (e^U)_n - U_n - (e_0)_n
    const long nn = sector_size(nbox, Sector::even);
    std::vector<IScalar> f(nn, IScalar(0.0));
    for (long i = 0; i < nn; ++i) {
        auto [n1, n2] = sector_unflat(nbox, Sector::even, i);
        IScalar fi = l_index(n1, n2, d1, d2, c) * ubar.at(n1, n2) + enc.head.at(n1, n2) -
                     ubar.at(n1, n2);
        if (n1 == 0 && n2 == 0) fi = fi - IScalar(1.0);
        f[i] = fi;
    }
    IScalar head(0.0);
    for (long i = 0; i < nn; ++i) {
        IScalar yi(0.0);
        for (long j = 0; j < nn; ++j) yi += BN.a(i, j) * f[j];
        auto [n1, n2] = sector_unflat(nbox, Sector::even, i);
        head += IScalar(sector_weight(Sector::even, n1, n2)) * sqr(yi);
    }

    // band I_{N0} \ I_N: (l(n~) - 1) U_n + (e^U)_n, the e_0 part never lands here
    IScalar band(0.0);
    for (int n1 = 0; n1 <= n0.n1max; ++n1)
        for (int n2 = 0; n2 <= n0.n2max; ++n2) {
            if (n1 <= nbox.n1max && n2 <= nbox.n2max) continue;
            IScalar g = (l_index(n1, n2, d1, d2, c) - IScalar(1.0)) * ubar.at(n1, n2) +
                        enc.head.at(n1, n2);
            band += IScalar(alpha_weight(n1, n2)) * sqr(g);
        }

    IScalar tail = tail_l2sq(enc.env, n0);
    return finite_or_throw(sqrt(IScalar(2.0 * d1) * (head + band + tail)), "y0_bound");
}

IScalar z1N_bound(const CoeffSeq<IScalar>& vbarN, const OperatorBlock<IScalar>& BN,
                  const IScalar& c) {
    require_square_even(BN);
    IndexBox nbox = BN.cols_box;
    if (!(vbarN.box == nbox)) throw ShapeMismatch("z1N_bound: V^N must live on the operator box");
    const double d1 = vbarN.d1, d2 = vbarN.d2;
    IndexBox twoN{2 * nbox.n1max, 2 * nbox.n2max};

    // upper block: pi^N - B^N (I + M_V L^{-1}) pi^{2N}
    OperatorBlock<IScalar> k = mult_block(vbarN, nbox, twoN, Sector::even);
    std::vector<IScalar> invl(sector_size(twoN, Sector::even), IScalar(0.0));
    for (long j = 0; j < long(invl.size()); ++j) {
        auto [k1, k2] = sector_unflat(twoN, Sector::even, j);
        invl[j] = IScalar(1.0) / l_index(k1, k2, d1, d2, c);
    }
    scale_cols(k, invl);
    for (long i = 0; i < k.rows(); ++i) {
        auto [n1, n2] = sector_unflat(nbox, Sector::even, i);
        long j = sector_flat(twoN, Sector::even, n1, n2);
        k.a(i, j) += IScalar(1.0);
    }
    OperatorBlock<IScalar> top = block_mul(BN, k);
    for (long i = 0; i < top.rows(); ++i)
        for (long j = 0; j < top.cols(); ++j) top.a(i, j) = IScalar(0.0) - top.a(i, j);
    for (long i = 0; i < top.rows(); ++i) {
        auto [n1, n2] = sector_unflat(nbox, Sector::even, i);
        long j = sector_flat(twoN, Sector::even, n1, n2);
        top.a(i, j) += IScalar(1.0);
    }
    IScalar norm_top = op_norm2_bound(top);

    // lower block: (pi^{2N} - pi^N) M_V L^{-1} pi^N; rows inside I_N are zeroed
    OperatorBlock<IScalar> low = mult_block(vbarN, twoN, nbox, Sector::even);
    std::vector<IScalar> invl_n(sector_size(nbox, Sector::even), IScalar(0.0));
    for (long j = 0; j < long(invl_n.size()); ++j) {
        auto [k1, k2] = sector_unflat(nbox, Sector::even, j);
        invl_n[j] = IScalar(1.0) / l_index(k1, k2, d1, d2, c);
    }
    scale_cols(low, invl_n);
    for (long i = 0; i < low.rows(); ++i) {
        auto [n1, n2] = sector_unflat(twoN, Sector::even, i);
        if (n1 <= nbox.n1max && n2 <= nbox.n2max)
            for (long j = 0; j < low.cols(); ++j) low.a(i, j) = IScalar(0.0);
    }
    IScalar norm_low = op_norm2_bound(low);

    IScalar tail = l1_norm(vbarN) / min_l_outside(nbox.n1max, nbox.n2max, d1, d2, c);
    return finite_or_throw(sqrt(sqr(norm_top) + sqr(norm_low) + sqr(tail)), "z1N_bound");
}

IScalar zu_bound(const CoeffSeq<IScalar>& vbarN, const IScalar& c, const IScalar& norm_BN) {
    const double d1 = vbarN.d1, d2 = vbarN.d2;
    IndexBox ebox{2 * vbarN.box.n1max, 2 * vbarN.box.n2max};
    CoeffSeq<IScalar> e = e_sequence(ebox, d1, d2, c);
    CoeffSeq<IScalar> conv = convolve(vbarN, e, vbarN.box);
    IScalar dot = dot2(vbarN, conv);
    dot = IScalar(std::max(0.0, dot.lo()), std::max(0.0, dot.hi()));

    IScalar a = decay_rate_inf(d2, c);
    IScalar zu1sq = IScalar(2.0 * d1) * dot;
    IScalar zu2sq = zu1sq + cd1_constant(a, d1) * exp(IScalar(-2.0 * d1) * a) * dot;
    return finite_or_throw(emax(IScalar(1.0), norm_BN) * sqrt(zu1sq + zu2sq), "zu_bound");
}

IScalar z1_total(const IScalar& z1N, const IScalar& zu, const IScalar& tail_l1_V,
                 const IScalar& norm_BN, const IScalar& c) {
    return z1N + zu + emax(IScalar(1.0), norm_BN) * kappa1(c) * tail_l1_V;
}

IScalar z2_coeff(const EnclosedSeq& exp_enc, const OperatorBlock<IScalar>& BN, const IScalar& c,
                 const IScalar& norm_BN) {
    require_square_even(BN);
    IndexBox nbox = BN.cols_box, hbox = exp_enc.head.box;
    IScalar max1b = emax(IScalar(1.0), norm_BN);
    IScalar head_l1 = l1_norm(exp_enc.head);
    IScalar tail = tail_l1(exp_enc.env, hbox);

    // ||B M_W||^2 <= ||B^N pi^N M_{W_head}||^2 + ||pi_N M_{W_head}||^2 for the
    // head part (the band of M_{W_head} empties past nbox + hbox), plus the
    // envelope tail passing through ||B|| = max{1, ||B^N||}
    IndexBox colk{nbox.n1max + hbox.n1max, nbox.n2max + hbox.n2max};
    OperatorBlock<IScalar> bm = block_mul(BN, mult_block(exp_enc.head, nbox, colk, Sector::even));
    IScalar finite = op_norm2_bound(bm);
    IScalar norm_bmw = sqrt(sqr(finite) + sqr(head_l1)) + max1b * tail;
    norm_bmw = emin(norm_bmw, max1b * (head_l1 + tail)); // coarse submultiplicative cap
    return finite_or_throw(kappa1(c) * emax(norm_bmw, IScalar(1.0)), "z2_coeff");
}

bool radii_conditions(const BoundSet& b, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) return false;
    IScalar ri(r);
    IScalar z2r = b.Z2_coeff * (exp(b.kappa2 * ri) - IScalar(1.0)); // = Z2(r) r
    IScalar quad = IScalar(0.5) * z2r * ri - (IScalar(1.0) - b.Z1) * ri + b.Y0;
    IScalar contr = b.Z1 + z2r;
    return quad.hi() < 0.0 && contr.hi() < 1.0;
}

RadiiResult radii_check(const BoundSet& b) {
    RadiiResult out;
    if (!(b.Z1.hi() < 1.0)) {
        out.failed_condition = RadiiFailure::contraction;
        return out;
    }

    // sweep down from 1 for any feasible radius; the feasible set is an
    // interval (convex quadratic condition, monotone contraction condition)
    const double seed = std::max(b.Y0.hi(), 0.0);
    double rstar = -1.0;
    for (double r = 1.0; r >= std::max(seed, 1e-300); r *= 0.85)
        if (radii_conditions(b, r)) {
            rstar = r;
            break;
        }
    if (rstar < 0.0 && b.Z1.hi() < 1.0 && seed > 0.0) {
        // probe near the analytic lower root Y0/(1-Z1) for narrow windows
        double r0 = seed / (1.0 - b.Z1.hi());
        for (double f : {1.0001, 1.001, 1.01, 1.1, 1.5, 2.0, 4.0, 8.0}) {
            if (r0 * f > 1.0) break;
            if (radii_conditions(b, r0 * f)) {
                rstar = r0 * f;
                break;
            }
        }
    }
    if (rstar < 0.0) {
        double probe = std::min(1.0, std::max(seed * 2.0, 1e-12));
        IScalar z2r = b.Z2_coeff * (exp(b.kappa2 * IScalar(probe)) - IScalar(1.0));
        out.failed_condition = ((b.Z1 + z2r).hi() >= 1.0) ? RadiiFailure::contraction
                                                          : RadiiFailure::quadratic;
        return out;
    }

    const double rel = 0x1p-20;
    double lo = seed, hi = rstar; // lo infeasible (or the window edge), hi feasible
    if (!radii_conditions(b, lo)) {
        while (hi - lo > rel * hi && hi > 1e-290) {
            double mid = 0.5 * (lo + hi);
            if (radii_conditions(b, mid))
                hi = mid;
            else
                lo = mid;
        }
    } else {
        hi = lo;
    }
    double rmin = hi;

    lo = rstar; // feasible
    hi = 1.0;
    if (radii_conditions(b, hi)) {
        lo = hi;
    } else {
        while (hi - lo > rel * hi) {
            double mid = 0.5 * (lo + hi);
            if (radii_conditions(b, mid))
                lo = mid;
            else
                hi = mid;
        }
    }
    double rmax = lo;

    out.success = true;
    out.r_min = IScalar(rmin);
    out.r_max = IScalar(rmax);
    return out;
}

} // namespace stripwave
