#include <doctest.h>

#include <cmath>
#include <random>

#include "stripwave/aliasing.hpp"
#include "stripwave/bounds.hpp"
#include "oracles.hpp"

using namespace stripwave;
using swtest::BigFloat;

namespace {

const double PI_D = 3.141592653589793238462643383279502884;

CoeffSeq<IScalar> random_iseq(IndexBox box, double d1, double d2, std::mt19937& rng,
                              double scale) {
    CoeffSeq<IScalar> u(box, d1, d2);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i <= box.n1max; ++i)
        for (int j = 0; j <= box.n2max; ++j)
            u.at(i, j) = IScalar(scale * uni(rng) / ((1.0 + i * i) * (1.0 + j * j)));
    return u;
}

// entrywise symmetric inflation of every enclosure in a sequence
void widen_seq(CoeffSeq<IScalar>& u, std::mt19937& rng, double w) {
    std::uniform_real_distribution<double> uni(0.0, w);
    for (int i = 0; i <= u.box.n1max; ++i)
        for (int j = 0; j <= u.box.n2max; ++j) {
            double h = uni(rng);
            u.at(i, j) = u.at(i, j) + IScalar(-h, h);
        }
}

void widen_block(OperatorBlock<IScalar>& m, std::mt19937& rng, double w) {
    std::uniform_real_distribution<double> uni(0.0, w);
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) {
            double h = uni(rng);
            m.a(i, j) = m.a(i, j) + IScalar(-h, h);
        }
}

} // namespace

TEST_CASE("E-sequence rows are the cosine coefficients of the decay profile") {
    // row n2 must hold the coefficients of x -> C^2 e^{-2 a d1} cosh(2 a x);
    // quadrature oracle per entry, plus the (-1)^{n1} sign pattern
    const double c = 1.2, d2 = PI_D / 0.8, d1 = 12.0;
    CoeffSeq<IScalar> e = e_sequence({7, 2}, d1, d2, IScalar(c));
    for (int n2 = 0; n2 <= 2; ++n2) {
        DecayConstants dc = decay_constants(n2, d2, IScalar(c));
        const double a = dc.a.mid(), C = dc.C.mid();
        for (int n1 = 0; n1 <= 7; ++n1) {
            auto f = [&](double x) {
                return C * C * std::exp(-2.0 * a * d1) * std::cosh(2.0 * a * x) *
                       std::cos(PI_D * n1 * x / d1);
            };
            double ref = swtest::integrate(f, -d1, d1, 1e-13) / (2.0 * d1);
            IScalar got = e.at(n1, n2);
            REQUIRE(std::fabs(got.mid() - ref) <= 1e-8 * std::fabs(ref) + 1e-14);
            REQUIRE(got.width() <= 1e-10 * std::fabs(ref) + 1e-16);
            if (n1 % 2 == 0)
                REQUIRE(got.lo() > 0.0);
            else
                REQUIRE(got.hi() < 0.0);
        }
    }
}

TEST_CASE("pairing against the convolved E-sequence equals a direct lattice sum") {
    std::mt19937 rng(7321);
    const double c = 1.2, d2 = PI_D / 0.8, d1 = 15.0;
    for (int rep = 0; rep < 6; ++rep) {
        CoeffSeq<IScalar> v = random_iseq({3, 2}, d1, d2, rng, 0.4);
        CoeffSeq<IScalar> e = e_sequence({6, 4}, d1, d2, IScalar(c));
        IScalar dot = dot2(v, convolve(v, e, v.box));

        // two-sided double sum over the reflected lattice, 256-bit accumulation
        auto vmid = [&](long i, long j) { return BigFloat(v.look(i, j).mid()); };
        auto emid = [&](long i, long j) { return BigFloat(e.look(i, j).mid()); };
        BigFloat acc(0.0);
        for (int n1 = 0; n1 <= 3; ++n1)
            for (int n2 = 0; n2 <= 2; ++n2) {
                BigFloat s(0.0);
                for (int m1 = -3; m1 <= 3; ++m1)
                    for (int m2 = -2; m2 <= 2; ++m2) s = s + vmid(m1, m2) * emid(n1 - m1, n2 - m2);
                acc = acc + BigFloat(alpha_weight(n1, n2)) * vmid(n1, n2) * s;
            }
        REQUIRE(acc.inside(dot + IScalar(-1e-13, 1e-13)));
    }
}

TEST_CASE("unbounded-domain remainder: assembly from the pairing, zero case, d1 decay") {
    const double c = 1.2, d2 = PI_D / 0.8;
    std::mt19937 rng(9194);

    // V = 0 kills the remainder exactly
    CoeffSeq<IScalar> zero({5, 3}, 30.0, d2);
    REQUIRE(zu_bound(zero, IScalar(c), IScalar(1.7)).hi() == 0.0);

    // reassemble from the published combination and compare
    CoeffSeq<IScalar> v = random_iseq({4, 3}, 25.0, d2, rng, 0.3);
    IScalar zu = zu_bound(v, IScalar(c), IScalar(0.5));
    REQUIRE(zu.lo() >= 0.0);
    CoeffSeq<IScalar> e = e_sequence({8, 6}, v.d1, v.d2, IScalar(c));
    double dot = dot2(v, convolve(v, e, v.box)).mid();
    double a = decay_rate_inf(d2, IScalar(c)).mid();
    double zu1sq = 2.0 * v.d1 * dot;
    double zu2sq = zu1sq + cd1_constant(IScalar(a), v.d1).mid() * std::exp(-2.0 * v.d1 * a) * dot;
    double expect = std::sqrt(zu1sq + zu2sq); // max{1, 0.5} = 1
    REQUIRE(zu.mid() == doctest::Approx(expect).epsilon(1e-9));

    // same coefficients on wider strips: the remainder decays
    double prev = 1e300;
    for (double d1 : {20.0, 40.0, 80.0}) {
        CoeffSeq<IScalar> w({4, 3}, d1, d2);
        w.a = v.a;
        double cur = zu_bound(w, IScalar(c), IScalar(1.0)).hi();
        REQUIRE(cur < prev);
        prev = cur;
    }
}

TEST_CASE("zero wave: residual bound collapses, finite defect block vanishes") {
    const double c = 1.2, d1 = 20.0, d2 = PI_D / 0.8;
    IndexBox nbox{8, 8}, n0{30, 30};
    CoeffSeq<IScalar> ubar(n0, d1, d2);
    OperatorBlock<IScalar> BN = identity_block<IScalar>(nbox, Sector::even);

    AnalyticityParams par;
    par.nu1 = 3.0;
    par.nu2 = 3.0;
    par.nfft1 = 64;
    par.nfft2 = 64;
    par.head = n0;
    EnclosedSeq enc = rigorous_exp(ubar, par);

    IScalar y0 = y0_bound(ubar, BN, enc, IScalar(c));
    REQUIRE(y0.lo() >= 0.0);
    REQUIRE(y0.hi() <= 1e-10);

    CoeffSeq<IScalar> vzero(nbox, d1, d2);
    IScalar z1 = z1N_bound(vzero, BN, IScalar(c));
    REQUIRE(z1.hi() == 0.0);
}

TEST_CASE("defect total is affine in the truncation tail") {
    const IScalar c(1.2);
    IScalar base = z1_total(IScalar(0.1), IScalar(0.05), IScalar(0.0), IScalar(1.7), c);
    REQUIRE(base.mid() == doctest::Approx(0.15));
    double delta = 1e-3;
    IScalar bumped = z1_total(IScalar(0.1), IScalar(0.05), IScalar(delta), IScalar(1.7), c);
    double expect = 1.7 * kappa1(c).mid() * delta;
    REQUIRE(bumped.mid() - base.mid() == doctest::Approx(expect).epsilon(1e-10));
    REQUIRE(z1_total(IScalar(0.0), IScalar(0.0), IScalar(0.0), IScalar(0.0), c).hi() == 0.0);
}

TEST_CASE("Lipschitz coefficient: constant wave gives the embedding constant; cap holds") {
    const double c = 1.2, d1 = 10.0, d2 = PI_D / 0.8;
    IndexBox nbox{6, 6}, hbox{16, 16};
    OperatorBlock<IScalar> BN = identity_block<IScalar>(nbox, Sector::even);
    IScalar norm_BN = op_norm2_bound(BN);
    REQUIRE(norm_BN.hi() == doctest::Approx(1.0));

    AnalyticityParams par;
    par.nu1 = 3.0;
    par.nu2 = 3.0;
    par.nfft1 = 64;
    par.nfft2 = 64;
    par.head = hbox;

    CoeffSeq<IScalar> zero(hbox, d1, d2);
    EnclosedSeq enc0 = rigorous_exp(zero, par);
    IScalar z2_0 = z2_coeff(enc0, BN, IScalar(c), norm_BN);
    IScalar k1 = kappa1(IScalar(1.2));
    REQUIRE(z2_0.mid() == doctest::Approx(k1.mid()).epsilon(1e-4));
    REQUIRE(z2_0.hi() >= k1.lo());

    std::mt19937 rng(55211);
    CoeffSeq<IScalar> u = random_iseq(hbox, d1, d2, rng, 0.1);
    par.nu1 = 1.2; // the random coefficients decay only polynomially
    par.nu2 = 1.2;
    EnclosedSeq enc = rigorous_exp(u, par);
    IScalar z2 = z2_coeff(enc, BN, IScalar(c), norm_BN);
    IScalar cap = k1 * IScalar(std::max(1.0, norm_BN.hi())) *
                  (l1_norm(enc.head) + tail_l1(enc.env, hbox));
    REQUIRE(z2.lo() >= 0.0);
    REQUIRE(z2.hi() <= cap.hi() * (1.0 + 1e-12));
    REQUIRE(z2.hi() >= k1.lo());
}

TEST_CASE("radius localization against the reference magnitudes") {
    BoundSet b;
    b.Y0 = IScalar(6.0005e-8);
    b.Z1 = IScalar(0.36608);
    b.Z2_coeff = IScalar(22.7926);
    b.kappa2 = kappa2(PI_D / 0.24, IScalar(1.2));
    b.norm_BN = IScalar(1.0);

    RadiiResult res = radii_check(b);
    REQUIRE(res.success);
    REQUIRE(res.failed_condition == RadiiFailure::none);
    REQUIRE(res.r_min.hi() == doctest::Approx(9.4657e-8).epsilon(1e-3));
    REQUIRE(res.r_max.hi() > 1e-4);
    REQUIRE(res.r_max.hi() < 1.0 + 1e-15);
    REQUIRE(radii_conditions(b, res.r_min.hi()));
    REQUIRE(radii_conditions(b, res.r_max.lo()));

    // the quadratic form itself is strictly negative at r_min
    IScalar r = res.r_min;
    IScalar z2r = b.Z2_coeff * (exp(b.kappa2 * r) - IScalar(1.0));
    IScalar quad = IScalar(0.5) * z2r * r - (IScalar(1.0) - b.Z1) * r + b.Y0;
    REQUIRE(quad.hi() < 0.0);
}

TEST_CASE("radius localization failure modes") {
    BoundSet b;
    b.kappa2 = IScalar(1.0);
    b.norm_BN = IScalar(1.0);

    b.Y0 = IScalar(1e-8);
    b.Z1 = IScalar(1.0);
    b.Z2_coeff = IScalar(0.1);
    RadiiResult res = radii_check(b);
    REQUIRE(!res.success);
    REQUIRE(res.failed_condition == RadiiFailure::contraction);

    b.Z1 = IScalar(0.99, 1.01); // straddling one is a failure, not a retry
    res = radii_check(b);
    REQUIRE(!res.success);
    REQUIRE(res.failed_condition == RadiiFailure::contraction);

    b.Z1 = IScalar(0.1); // contraction fine, quadratic obstructed by Y0
    b.Y0 = IScalar(0.9);
    b.Z2_coeff = IScalar(0.01);
    res = radii_check(b);
    REQUIRE(!res.success);
    REQUIRE(res.failed_condition == RadiiFailure::quadratic);

    b.Y0 = IScalar(0.0); // zero residual: any small radius validates
    b.Z1 = IScalar(0.36608);
    b.Z2_coeff = IScalar(22.7926);
    res = radii_check(b);
    REQUIRE(res.success);
    REQUIRE(res.r_min.hi() <= 1e-12);
    REQUIRE(radii_conditions(b, res.r_min.hi()));
}

TEST_CASE("outside-box symbol floor at the reference configuration") {
    const double c = 1.2, d1 = PI_D / 0.06, d2 = PI_D / 0.24;
    const int N1 = 40, N2 = 40;
    IScalar floor_v = min_l_outside(N1, N2, d1, d2, IScalar(c));
    double brute = 1e300;
    for (int n1 = 0; n1 <= 400; ++n1)
        for (int n2 = 0; n2 <= 400; ++n2) {
            if (n1 <= N1 && n2 <= N2) continue;
            brute = std::min(brute, l_index(n1, n2, d1, d2, c));
        }
    REQUIRE(floor_v.lo() > 0.0);
    REQUIRE(floor_v.lo() <= brute * (1 + 1e-12));
    // the floor is attained on the first excluded boundary layer
    double edge = 1e300;
    for (int n1 = 0; n1 <= 400; ++n1) edge = std::min(edge, l_index(n1, N2 + 1, d1, d2, c));
    for (int n2 = 0; n2 <= 400; ++n2) edge = std::min(edge, l_index(N1 + 1, n2, d1, d2, c));
    REQUIRE(brute == edge);
}

TEST_CASE("bounds widen monotonically with their inputs") {
    std::mt19937 rng(60601);
    const double c = 1.2, d1 = 8.0, d2 = PI_D / 0.8;
    IndexBox nbox{6, 6}, n0{10, 10};

    CoeffSeq<IScalar> ubar = random_iseq(n0, d1, d2, rng, 0.05);
    AnalyticityParams par;
    par.nu1 = 2.0;
    par.nu2 = 2.0;
    par.nfft1 = 32;
    par.nfft2 = 32;
    par.head = n0;
    EnclosedSeq enc = rigorous_exp(ubar, par);

    OperatorBlock<IScalar> BN = identity_block<IScalar>(nbox, Sector::even);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (long i = 0; i < BN.rows(); ++i)
        for (long j = 0; j < BN.cols(); ++j) BN.a(i, j) = BN.a(i, j) + IScalar(0.02 * uni(rng));
    IScalar norm_BN = op_norm2_bound(BN);

    CoeffSeq<IScalar> vN = random_iseq(nbox, d1, d2, rng, 0.2);

    double y0 = y0_bound(ubar, BN, enc, IScalar(c)).hi();
    double z1 = z1N_bound(vN, BN, IScalar(c)).hi();
    double zu = zu_bound(vN, IScalar(c), norm_BN).hi();
    double z2 = z2_coeff(enc, BN, IScalar(c), norm_BN).hi();

    std::uniform_real_distribution<double> dw(1e-9, 1e-5);
    for (int rep = 0; rep < 10; ++rep) {
        double w = dw(rng);
        CoeffSeq<IScalar> ubar_w = ubar;
        widen_seq(ubar_w, rng, w);
        EnclosedSeq enc_w = enc;
        widen_seq(enc_w.head, rng, w);
        enc_w.env.C = enc_w.env.C + IScalar(0.0, w);
        OperatorBlock<IScalar> BN_w = BN;
        widen_block(BN_w, rng, w);
        IScalar norm_w = norm_BN + IScalar(0.0, w);
        CoeffSeq<IScalar> vN_w = vN;
        widen_seq(vN_w, rng, w);

        REQUIRE(y0_bound(ubar_w, BN_w, enc_w, IScalar(c)).hi() >= y0);
        REQUIRE(z1N_bound(vN_w, BN_w, IScalar(c)).hi() >= z1);
        REQUIRE(zu_bound(vN_w, IScalar(c), norm_w).hi() >= zu);
        REQUIRE(z2_coeff(enc_w, BN_w, IScalar(c), norm_w).hi() >= z2);
    }
}
