#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <random>

#include "stripwave/interval.hpp"

using stripwave::IScalar;
using swtest::BigFloat;

namespace {

// deterministic sampler over a wide dynamic range, including negatives,
// zeros and large/small magnitudes
struct Sampler {
    std::mt19937_64 rng{0x5eed5eedULL};

    double point() {
        std::uniform_real_distribution<double> mant(-1.0, 1.0);
        std::uniform_int_distribution<int> expo(-40, 40);
        std::uniform_int_distribution<int> kind(0, 19);
        int k = kind(rng);
        if (k == 0) return 0.0;
        if (k == 1) return double(std::uniform_int_distribution<int>(-50, 50)(rng));
        return std::ldexp(mant(rng), expo(rng));
    }

    IScalar interval() {
        double a = point();
        std::uniform_int_distribution<int> kind(0, 3);
        if (kind(rng) == 0) return IScalar(a); // point intervals matter: exactness paths
        double w = std::fabs(point()) * 0x1p-30;
        return IScalar(a - w, a + w);
    }

    // a few representative reals inside [lo,hi]
    std::vector<double> reps(const IScalar& x, int n) {
        std::vector<double> v{x.lo(), x.hi()};
        std::uniform_real_distribution<double> t(0.0, 1.0);
        for (int i = 0; i + 2 < n; ++i) {
            double u = t(rng);
            v.push_back(x.lo() + u * (x.hi() - x.lo()));
        }
        return v;
    }
};

} // namespace

TEST_CASE("exact integer arithmetic stays exact") {
    IScalar one(1.0), two(2.0);
    IScalar three = one + two;
    CHECK(three.lo() == 3.0);
    CHECK(three.hi() == 3.0);
    IScalar p = IScalar(1.5) * IScalar(4.0);
    CHECK(p.lo() == 6.0);
    CHECK(p.hi() == 6.0);
    IScalar q = IScalar(1.0) / IScalar(4.0);
    CHECK(q.lo() == 0.25);
    CHECK(q.hi() == 0.25);
    IScalar s = stripwave::sqrt(IScalar(9.0));
    CHECK(s.lo() == 3.0);
    CHECK(s.hi() == 3.0);
}

TEST_CASE("inexact results are at most one ulp wide and contain the truth") {
    IScalar t = IScalar(1.0) / IScalar(3.0);
    CHECK(t.width() <= std::ldexp(1.0, -52)); // one ulp of 1/3
    CHECK(BigFloat(1.0).cmp(0.0) > 0);
    BigFloat third = BigFloat(1.0) / BigFloat(3.0);
    CHECK(third.inside(t));
}

TEST_CASE("fundamental containment: ring ops, 1e4 randomized cases") {
    Sampler s;
    for (int iter = 0; iter < 10000; ++iter) {
        IScalar a = s.interval(), b = s.interval();
        IScalar sum = a + b, dif = a - b, prod = a * b;
        bool can_div = !(b.lo() <= 0 && b.hi() >= 0);
        IScalar quo = can_div ? a / b : IScalar(0.0);
        for (double xa : s.reps(a, 10)) {
            for (double xb : s.reps(b, 3)) {
                BigFloat A(xa), B(xb);
                REQUIRE((A + B).inside(sum));
                REQUIRE((A - B).inside(dif));
                REQUIRE((A * B).inside(prod));
                if (can_div) REQUIRE((A / B).inside(quo));
            }
        }
    }
}

TEST_CASE("fundamental containment: transcendentals, 1e4 randomized cases") {
    Sampler s;
    std::uniform_real_distribution<double> arg(-40.0, 40.0);
    std::uniform_real_distribution<double> big(-2e4, 2e4);
    for (int iter = 0; iter < 10000; ++iter) {
        double c = (iter % 3 == 0) ? big(s.rng) : arg(s.rng);
        double w = std::fabs(s.point()) * 0x1p-28;
        IScalar x(c - w, c + w);
        IScalar ex = stripwave::exp(x);
        IScalar sx = stripwave::sin(x);
        IScalar cx = stripwave::cos(x);
        IScalar hx = stripwave::cosh(x);
        IScalar p3 = stripwave::pow_k(x, 3);
        IScalar sq = (x.lo() >= 0) ? stripwave::sqrt(x) : IScalar(0.0);
        for (double v : s.reps(x, 10)) {
            BigFloat V(v);
            REQUIRE(V.exp().inside(ex));
            REQUIRE(V.sin().inside(sx));
            REQUIRE(V.cos().inside(cx));
            REQUIRE(V.cosh().inside(hx));
            REQUIRE(V.pow_si(3).inside(p3));
            if (x.lo() >= 0) REQUIRE(V.sqrt().inside(sq));
        }
    }
}

TEST_CASE("transcendental enclosures are tight at points") {
    // width within a few ulps for point arguments in the working range
    for (double v : {0.1, 1.0, -3.7, 12.0, 200.0, -0.5, 1e-3}) {
        IScalar e = stripwave::exp(IScalar(v));
        CHECK(e.width() <= 8 * std::ldexp(std::fabs(e.hi()), -52) + 1e-300);
        IScalar si = stripwave::sin(IScalar(v));
        CHECK(si.width() <= 8 * std::ldexp(1.0, -52));
    }
}

TEST_CASE("inclusion monotonicity") {
    Sampler s;
    for (int iter = 0; iter < 2000; ++iter) {
        IScalar a = s.interval();
        double m = a.mid();
        double w4 = 0.25 * a.width();
        IScalar inner(std::fmax(a.lo(), m - w4), std::fmin(a.hi(), m + w4));
        IScalar b = s.interval();
        CHECK((a + b).contains(inner + b));
        CHECK((a * b).contains(inner * b));
        CHECK(stripwave::exp(a).contains(stripwave::exp(inner)));
        CHECK(stripwave::pow_k(a, 4).contains(stripwave::pow_k(inner, 4)));
    }
}

TEST_CASE("squaring respects sign coupling") {
    IScalar x(-1.0, 2.0);
    IScalar x2 = stripwave::pow_k(x, 2);
    CHECK(x2.lo() == 0.0);
    CHECK(x2.hi() == 4.0);
    CHECK(stripwave::pow_k(IScalar(-3.0, -2.0), 2).lo() == 4.0);
}

TEST_CASE("division by a zero-straddling interval throws") {
    CHECK_THROWS_AS(IScalar(1.0) / IScalar(-1.0, 1.0), stripwave::DomainError);
    CHECK_THROWS_AS(stripwave::sqrt(IScalar(-1.0, 1.0)), stripwave::DomainError);
    CHECK_THROWS_AS(IScalar(2.0, 1.0), stripwave::InvalidInterval);
}

TEST_CASE("overflow saturates to infinity rather than wrapping") {
    double m = std::numeric_limits<double>::max();
    IScalar big(m);
    IScalar twice = big + big;
    CHECK(std::isinf(twice.hi()));
    CHECK(twice.lo() <= m);
    IScalar e = stripwave::exp(IScalar(1000.0));
    CHECK(std::isinf(e.hi()));
    CHECK(e.lo() == m);
}

TEST_CASE("pi and ln2 enclosures verified against the oracle") {
    IScalar pi = stripwave::pi_enclosure();
    CHECK(BigFloat::pi().inside(pi));
    CHECK(pi.width() <= 2 * std::ldexp(1.0, -51));
    IScalar l2 = stripwave::ln2_enclosure();
    CHECK(BigFloat::ln2().inside(l2));

    // the argument-reduction splits used inside sin/cos/exp
    BigFloat rest = BigFloat::pi() / BigFloat(2.0)
                  - BigFloat(1.57079632673412561417e+00)
                  - BigFloat(6.07710050630396597660e-11)
                  - BigFloat(2.02226624871116645580e-21);
    CHECK(rest.cmp(8.4784276603e-32) > 0);
    CHECK(rest.cmp(8.4784276604e-32) < 0);
    BigFloat lrest = BigFloat::ln2() - BigFloat(6.93147180369123816490e-01)
                   - BigFloat(1.90821492927058770002e-10);
    CHECK(lrest.abs().cmp(2e-26) < 0);
}

TEST_CASE("decimal parsing rounds outward, exact decimals stay points") {
    IScalar one = stripwave::parse_decimal_outward("1");
    CHECK(one.lo() == 1.0);
    CHECK(one.hi() == 1.0);
    IScalar half = stripwave::parse_decimal_outward("0.5");
    CHECK(half.is_point());
    IScalar tenth = stripwave::parse_decimal_outward("0.1");
    CHECK(!tenth.is_point());
    CHECK(tenth.width() <= 2 * std::ldexp(0.1, -52) * 1.01);
    BigFloat exact("0.1");
    CHECK(exact.inside(tenth));
    CHECK((BigFloat(1.0) / BigFloat(10.0)).inside(tenth));
    IScalar neg = stripwave::parse_decimal_outward("-12.34e-5");
    CHECK(BigFloat("-12.34e-5").inside(neg));
    CHECK_THROWS_AS(stripwave::parse_decimal_outward("12.3.4"), stripwave::FormatError);
    CHECK_THROWS_AS(stripwave::parse_decimal_outward("abc"), stripwave::FormatError);
}

TEST_CASE("decimal format round-trips bit-exactly under nearest parsing") {
    // serialization uses shortest_decimal + strtod; outward parsing is the
    // user-facing path and must still *contain* the serialized double
    Sampler s;
    for (int i = 0; i < 5000; ++i) {
        double v = s.point();
        std::string repr = stripwave::shortest_decimal(v);
        CHECK(std::strtod(repr.c_str(), nullptr) == v);
        CHECK(stripwave::parse_decimal_outward(repr).contains(v));
    }
}

TEST_CASE("interval endpoints survive the nextafter nudges near zero") {
    IScalar tiny(0.0, std::numeric_limits<double>::denorm_min());
    IScalar prod = tiny * IScalar(0.5);
    CHECK(prod.lo() == 0.0);
    CHECK(prod.hi() > 0.0);
    // crossing zero with nudges
    CHECK(stripwave::detail::next_up(0.0) > 0.0);
    CHECK(stripwave::detail::next_down(0.0) < 0.0);
    CHECK(stripwave::detail::next_up(-std::numeric_limits<double>::denorm_min()) == 0.0);
}
