#include "stripwave/aliasing.hpp"

#include <cmath>

#include "stripwave/fft.hpp"

namespace stripwave {

namespace {

IScalar emin(const IScalar& x, const IScalar& y) {
    return IScalar(std::min(x.lo(), y.lo()), std::min(x.hi(), y.hi()));
}
IScalar emax(const IScalar& x, const IScalar& y) {
    return IScalar(std::max(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

void check_params(const CoeffSeq<IScalar>& u, const AnalyticityParams& par) {
    if (!(par.nu1 > 1.0) || !(par.nu2 > 1.0))
        throw DomainError("envelope bases must exceed 1");
    if (!is_pow2(par.nfft1) || !is_pow2(par.nfft2))
        throw ShapeMismatch("nfft must be a power of two");
    if (par.nfft1 < 2 * (u.box.n1max + 1) || par.nfft2 < 2 * (u.box.n2max + 1))
        throw ShapeMismatch("nfft too small for the coefficient support");
    if (par.head.n1max < u.box.n1max || par.head.n2max < u.box.n2max)
        throw ShapeMismatch("enclosure box must cover the coefficient support");
    if (par.head.n1max > par.nfft1 - 1 || par.head.n2max > par.nfft2 - 1)
        throw ShapeMismatch("enclosure box must stay below nfft");
}

} // namespace

IScalar nu_amplitude(const CoeffSeq<IScalar>& u, double nu1, double nu2) {
    return exp(nu_weighted_l1(u, nu1, nu2));
}

namespace {

// Upper bound for sup_x Re u(x1 + i*s1, x2 + i*s2) over the period rectangle,
// where s_i = d_i*lr_i/pi (so the mode (n1,n2) picks up cosh/sinh of n_i*lr_i).
// Midpoint values on a cell grid, first-order terms at the midpoints, and a
// global second-derivative remainder; every step in interval arithmetic.
bool contour_sup_re(const CoeffSeq<IScalar>& u, double lr1, double lr2, double& sup_hi) {
    const int B1 = u.box.n1max, B2 = u.box.n2max;
    int n1hi = -1, n2hi = -1;
    std::vector<char> row((size_t)B1 + 1, 0);
    for (int i = 0; i <= B1; ++i)
        for (int j = 0; j <= B2; ++j) {
            const IScalar& e = u.at(i, j);
            if (e.lo() == 0.0 && e.hi() == 0.0) continue;
            row[i] = 1;
            n1hi = std::max(n1hi, i);
            n2hi = std::max(n2hi, j);
        }
    if (n1hi < 0) { // zero sequence: Re u == 0
        sup_hi = 0.0;
        return true;
    }
    if (double(n1hi) * lr1 + double(n2hi) * lr2 > 640.0) return false; // cosh would saturate

    const bool ax2 = n2hi > 0;
    const int M1 = n1hi > 0 ? (ax2 ? 128 : 768) : 1;
    const int M2 = ax2 ? 48 : 1;

    std::vector<IScalar> ch1(n1hi + 1), sh1(n1hi + 1), ch2(n2hi + 1), sh2(n2hi + 1);
    std::vector<IScalar> w1(n1hi + 1), w2t(n2hi + 1);
    const IScalar pi = pi_enclosure();
    for (int n = 0; n <= n1hi; ++n) {
        IScalar e = exp(IScalar(double(n)) * IScalar(lr1)), ei = IScalar(1.0) / e;
        ch1[n] = (e + ei) * IScalar(0.5);
        sh1[n] = (e - ei) * IScalar(0.5);
        w1[n] = IScalar(double(n)) * pi / IScalar(u.d1);
    }
    for (int n = 0; n <= n2hi; ++n) {
        IScalar e = exp(IScalar(double(n)) * IScalar(lr2)), ei = IScalar(1.0) / e;
        ch2[n] = (e + ei) * IScalar(0.5);
        sh2[n] = (e - ei) * IScalar(0.5);
        w2t[n] = IScalar(double(n)) * pi / IScalar(u.d2);
    }

    // global Hessian bounds: |d^2 Re| per mode <= w_i w_j cosh cosh
    IScalar L11(0.0), L22(0.0), L12(0.0);
    for (int i = 0; i <= n1hi; ++i) {
        if (!row[i]) continue;
        IScalar p(0.0), q(0.0), r(0.0);
        for (int j = 0; j <= std::min(B2, n2hi); ++j) {
            IScalar mg = iabs(u.at(i, j));
            if (mg.hi() == 0.0) continue;
            IScalar a2 = IScalar(j ? 2.0 : 1.0);
            p = p + a2 * mg * ch2[j];
            q = q + a2 * mg * w2t[j] * ch2[j];
            r = r + a2 * mg * sqr(w2t[j]) * ch2[j];
        }
        IScalar a1 = IScalar(i ? 2.0 : 1.0);
        L11 = L11 + a1 * sqr(w1[i]) * ch1[i] * p;
        L12 = L12 + a1 * w1[i] * ch1[i] * q;
        L22 = L22 + a1 * ch1[i] * r;
    }

    // stage 1: contract the x2 axis onto the x2 grid (full period: the sum is
    // only even under the simultaneous reflection of both variables)
    const size_t R = (size_t)n1hi + 1;
    std::vector<IScalar> A(R * M2, IScalar(0.0)), Bv(R * M2, IScalar(0.0));
    std::vector<IScalar> A2(R * M2, IScalar(0.0)), B2v(R * M2, IScalar(0.0));
    for (int j2 = 0; j2 < M2; ++j2) {
        IScalar x2 = IScalar(2.0 * u.d2) * IScalar(2.0 * j2 + 1.0) / IScalar(2.0 * M2);
        for (int j = 0; j <= n2hi; ++j) {
            IScalar arg = w2t[j] * x2;
            IScalar c = cos(arg), s = sin(arg);
            IScalar a2 = IScalar(j ? 2.0 : 1.0);
            for (int i = 0; i <= n1hi; ++i) {
                if (!row[i] || j > B2) continue;
                IScalar v = a2 * u.at(i, j);
                if (v.lo() == 0.0 && v.hi() == 0.0) continue;
                A[i * M2 + j2] = A[i * M2 + j2] + v * c * ch2[j];
                Bv[i * M2 + j2] = Bv[i * M2 + j2] + v * s * sh2[j];
                A2[i * M2 + j2] = A2[i * M2 + j2] - v * w2t[j] * s * ch2[j];
                B2v[i * M2 + j2] = B2v[i * M2 + j2] + v * w2t[j] * c * sh2[j];
            }
        }
    }

    const IScalar e1 = IScalar(u.d1) / IScalar(2.0 * M1);
    const IScalar e2 = IScalar(2.0 * u.d2) / IScalar(2.0 * M2);
    double best = -std::numeric_limits<double>::infinity();
    for (int i1 = 0; i1 < M1; ++i1) {
        IScalar x1 = IScalar(u.d1) * IScalar(2.0 * i1 + 1.0) / IScalar(2.0 * M1);
        for (int j2 = 0; j2 < M2; ++j2) {
            IScalar f(0.0), f1(0.0), f2(0.0);
            for (int i = 0; i <= n1hi; ++i) {
                if (!row[i]) continue;
                IScalar arg = w1[i] * x1;
                IScalar c = cos(arg), s = sin(arg);
                IScalar a1 = IScalar(i ? 2.0 : 1.0);
                IScalar ca = a1 * c * ch1[i], sa = a1 * s * sh1[i];
                f = f + ca * A[i * M2 + j2] - sa * Bv[i * M2 + j2];
                f1 = f1 - w1[i] * (a1 * s * ch1[i] * A[i * M2 + j2] + a1 * c * sh1[i] * Bv[i * M2 + j2]);
                f2 = f2 + ca * A2[i * M2 + j2] - sa * B2v[i * M2 + j2];
            }
            IScalar cell = f + iabs(f1) * e1 + iabs(f2) * e2;
            best = std::max(best, cell.hi());
        }
    }
    IScalar rem = IScalar(0.5) * (L11 * sqr(e1) + IScalar(2.0) * L12 * e1 * e2 + L22 * sqr(e2));
    sup_hi = (IScalar(best) + rem).hi();
    return std::isfinite(sup_hi);
}

} // namespace

IScalar nu_amplitude_outside(const CoeffSeq<IScalar>& u, double nu1, double nu2, IndexBox box) {
    // |W_n| <= e^{||u||_nu'} nu'^{-n} for any steeper nu' >= nu; outside the
    // box, nu'^{-n} <= nu^{-n} max_i (nu_i/nu'_i)^{box_i+1}
    static const double kFactors[] = {1.0, 1.02, 1.05, 1.1, 1.2, 1.35, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0};
    IScalar best;
    bool first = true;
    auto consider = [&](const IScalar& cand) {
        best = first ? cand : emin(best, cand);
        first = false;
    };
    for (double f : kFactors) {
        double h1 = nu1 * f, h2 = nu2 * f;
        IScalar norm = nu_weighted_l1(u, h1, h2);
        if (!(norm.hi() < 700.0)) continue; // exp would saturate; steeper is hopeless too
        IScalar r1 = pow_k(IScalar(nu1) / IScalar(h1), box.n1max + 1);
        IScalar r2 = pow_k(IScalar(nu2) / IScalar(h2), box.n2max + 1);
        consider(exp(norm) * emax(r1, r2));
    }

    // A second family via the analytic continuation itself: for any rho >= nu,
    // |W_n| <= sup_{|Im x_i| = d_i log(rho_i)/pi} |e^{u(x)}| * rho^{-n}, and the
    // supremum of |e^u| is e^{sup Re u}, which sees the sign of u.  Deep troughs
    // cost nothing here, where the weighted-norm route explodes.
    static const double kC1[] = {1.0, 1.06, 1.13, 1.21, 1.3, 1.4, 1.52, 1.66, 1.82, 2.0, 2.3, 2.7, 3.2, 4.0};
    static const double kC2[] = {1.0, 1.2, 1.5, 2.0, 3.0, 5.0};
    bool ax1 = false, ax2 = false;
    long support = 0;
    for (int i = 0; i <= u.box.n1max; ++i)
        for (int j = 0; j <= u.box.n2max; ++j) {
            const IScalar& e = u.at(i, j);
            if (e.lo() == 0.0 && e.hi() == 0.0) continue;
            ++support;
            ax1 = ax1 || i > 0;
            ax2 = ax2 || j > 0;
        }
    if (support <= 6000) {
        // a content-free axis lets the base run off to +infinity for free
        std::vector<double> g1 = ax1 ? std::vector<double>(std::begin(kC1), std::end(kC1))
                                     : std::vector<double>{1e9};
        std::vector<double> g2 = ax2 ? std::vector<double>(std::begin(kC2), std::end(kC2))
                                     : std::vector<double>{1e9};
        for (double f2 : g2)
            for (double f1 : g1) {
                double lr1 = std::log(nu1 * f1), lr2 = std::log(nu2 * f2);
                double sup_re;
                if (!contour_sup_re(u, lr1, lr2, sup_re)) continue;
                IScalar rho1 = exp(IScalar(lr1)), rho2 = exp(IScalar(lr2));
                IScalar r1 = pow_k(IScalar(nu1) / rho1, box.n1max + 1);
                IScalar r2 = pow_k(IScalar(nu2) / rho2, box.n2max + 1);
                IScalar cand = exp(IScalar(sup_re)) * emax(r1, r2);
                if (std::isfinite(cand.hi())) consider(cand);
            }
    }
    if (first) throw NonConvergence("envelope amplitude overflows for every trial base");
    return best;
}

IScalar epsilon_n(double nu1, double nu2, int nfft1, int nfft2, int n1, int n2) {
    IScalar q1 = pow_k(IScalar(1.0) / IScalar(nu1), 2L * nfft1);
    IScalar q2 = pow_k(IScalar(1.0) / IScalar(nu2), 2L * nfft2);
    IScalar num = IScalar(2.0) * pow_k(IScalar(nu1), n1) * pow_k(IScalar(nu2), n2) * (q1 + q2);
    return num / ((IScalar(1.0) - q1) * (IScalar(1.0) - q2));
}

namespace {

// sum of alpha_n x^{n1} y^{n2} over all n outside [0..N1] x [0..N2]:
// closed geometric form (the alpha weights factorize per axis)
IScalar geom_outside(const IScalar& x, const IScalar& y, int N1, int N2) {
    IScalar xs = pow_k(x, N1 + 1), ys = pow_k(y, N2 + 1);
    IScalar num = IScalar(2.0) * xs * (IScalar(1.0) + y) + IScalar(2.0) * ys * (IScalar(1.0) + x) -
                  IScalar(4.0) * xs * ys;
    return num / ((IScalar(1.0) - x) * (IScalar(1.0) - y));
}

} // namespace

IScalar tail_l1(const TailEnvelope& env, IndexBox box) {
    IScalar x = IScalar(1.0) / IScalar(env.nu1), y = IScalar(1.0) / IScalar(env.nu2);
    return env.C * geom_outside(x, y, box.n1max, box.n2max);
}

IScalar tail_l2sq(const TailEnvelope& env, IndexBox box) {
    IScalar x = IScalar(1.0) / sqr(IScalar(env.nu1)), y = IScalar(1.0) / sqr(IScalar(env.nu2));
    return sqr(env.C) * geom_outside(x, y, box.n1max, box.n2max);
}

EnclosedSeq rigorous_exp(const CoeffSeq<IScalar>& u, const AnalyticityParams& par) {
    check_params(u, par);
    const long L1 = 2L * par.nfft1, L2 = 2L * par.nfft2;
    const IScalar C0 = nu_amplitude(u, par.nu1, par.nu2);
    if (!(C0.hi() < std::numeric_limits<double>::infinity()))
        throw NonConvergence("envelope amplitude overflows");

    EnclosedSeq out;
    out.head = CoeffSeq<IScalar>(par.head, u.d1, u.d2);
    out.env.nu1 = par.nu1;
    out.env.nu2 = par.nu2;
    out.env.C = emin(C0, nu_amplitude_outside(u, par.nu1, par.nu2, par.head));
    // every aliased image of a head index has a coordinate past 2*nfft - head
    // > head (check_params keeps head < nfft), so the outside constant also
    // covers the fold-back sum behind epsilon_n
    const IScalar Ca = out.env.C;

    auto two_sided = [&](long r, long L) { return r <= L / 2 ? r : r - L; };

    if (par.strict_fft) {
        out.mode = "fft-interval";
        std::vector<Cx<IScalar>> grid(L1 * L2);
        for (long r = 0; r < L1; ++r) {
            long i1 = std::labs(two_sided(r, L1));
            for (long c = 0; c < L2; ++c) {
                long i2 = std::labs(two_sided(c, L2));
                if (i1 <= u.box.n1max && i2 <= u.box.n2max)
                    grid[r * L2 + c].re = u.at(int(i1), int(i2));
            }
        }
        fft2_pow2(grid, L1, L2, true); // synthesis: samples of u on the refined grid
        for (auto& s : grid) {
            if (!s.im.contains(0.0)) throw Error("interval fft lost the real symmetry");
            s.re = exp(s.re);
            s.im = IScalar(0.0); // exact samples are real
        }
        fft2_pow2(grid, L1, L2, false); // analysis
        const double scale = 1.0 / double(L1 * L2); // exact power of two
        for (int n1 = 0; n1 <= par.head.n1max; ++n1)
            for (int n2 = 0; n2 <= par.head.n2max; ++n2) {
                const Cx<IScalar>& g = grid[long(n1) * L2 + n2];
                if (!g.im.contains(0.0)) throw Error("interval fft lost the real symmetry");
                IScalar eps = Ca * epsilon_n(par.nu1, par.nu2, par.nfft1, par.nfft2, n1, n2);
                out.head.at(n1, n2) = g.re * IScalar(scale) + IScalar(-eps.hi(), eps.hi());
            }
    } else {
        out.mode = "fft-float-gamma";
        std::vector<Cx<double>> grid(L1 * L2);
        for (long r = 0; r < L1; ++r) {
            long i1 = std::labs(two_sided(r, L1));
            for (long c = 0; c < L2; ++c) {
                long i2 = std::labs(two_sided(c, L2));
                if (i1 <= u.box.n1max && i2 <= u.box.n2max)
                    grid[r * L2 + c].re = u.at(int(i1), int(i2)).mid();
            }
        }
        fft2_pow2(grid, L1, L2, true);
        double wmax = 0.0;
        for (auto& s : grid) {
            s.re = std::exp(s.re);
            s.im = 0.0;
            wmax = std::max(wmax, std::fabs(s.re));
        }
        fft2_pow2(grid, L1, L2, false);
        const double scale = 1.0 / double(L1 * L2);
        // roundoff envelope for the transform pair + pointwise exp (see the
        // derivation notes shipped with the repo); plus the interval->midpoint
        // slack of the input coefficients
        double inrad = 0.0;
        for (int i = 0; i <= u.box.n1max; ++i)
            for (int j = 0; j <= u.box.n2max; ++j)
                inrad += alpha_weight(i, j) * 0.5 * u.at(i, j).width();
        const double gamma = 16.0;
        const double fp = gamma * (std::log2(double(L1)) + std::log2(double(L2)) + 2.0) * 0x1p-53 *
                              wmax * (1.0 + l1_norm(u).hi()) +
                          wmax * (std::exp(inrad) - 1.0 + 2 * 0x1p-53);
        for (int n1 = 0; n1 <= par.head.n1max; ++n1)
            for (int n2 = 0; n2 <= par.head.n2max; ++n2) {
                double centre = grid[long(n1) * L2 + n2].re * scale;
                IScalar eps = Ca * epsilon_n(par.nu1, par.nu2, par.nfft1, par.nfft2, n1, n2);
                double delta = eps.hi() + fp;
                out.head.at(n1, n2) = IScalar(centre - delta, centre + delta);
            }
    }
    return out;
}

} // namespace stripwave
