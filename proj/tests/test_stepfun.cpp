#include "doctest.h"
#include "lpq/counterexample.hpp"
#include "lpq/rng.hpp"
#include "lpq/stepfun.hpp"

#include <cmath>
#include <memory>

using namespace lpq;

namespace {

// brute-force integral of the materialized transform over [0, t]
double brute_head(const Seq& s, double e, double t) {
    double sum = 0;
    std::uint64_t k = 1;
    while (static_cast<double>(k) <= t) {
        sum += std::pow(s.at(k), e);
        ++k;
    }
    double frac = t - std::floor(t);
    if (frac > 0) sum += frac * std::pow(s.at(k), e);
    return sum;
}

double brute_tail(const Seq& s, double e, double t, std::uint64_t horizon) {
    double head = brute_head(s, e, t);
    double total = 0;
    for (std::uint64_t k = 1; k <= horizon; ++k) total += std::pow(s.at(k), e);
    return total - head;
}

}  // namespace

TEST_CASE("BaseStep integrals match direct summation on finite sequences") {
    Rng rng(601);
    for (int trial = 0; trial < 20; ++trial) {
        Seq s = rearrange(rng.uniform_vec(12, 0.0, 2.0));
        auto base = std::make_shared<BaseStep>(s, std::vector<double>{0.5, 1.0, 2.0});
        for (double e : {0.5, 1.0, 2.0}) {
            for (double t : {0.0, 0.4, 1.0, 3.7, 11.5, 12.0, 20.0}) {
                XInterval h = base->head(e, BigFloat::from_double(t));
                double brute = brute_head(s, e, t);
                CHECK(to_certified(h).lo <= brute + 1e-9);
                CHECK(to_certified(h).hi >= brute - 1e-9);
                XInterval tl = base->tail(e, BigFloat::from_double(t));
                double bt = brute_tail(s, e, t, 12);
                CHECK(to_certified(tl).lo <= bt + 1e-9);
                CHECK(to_certified(tl).hi >= bt - 1e-9);
            }
        }
    }
}

TEST_CASE("BaseStep power-tail integrals bracket the truth") {
    Seq g = Seq::power(1.0, 2.0, 50);
    BaseStep base(g, {1.0, 3.0});
    // head at a large point: compare against explicit summation
    double t = 4000.5;
    double brute = 0;
    for (int k = 1; k <= 4000; ++k) brute += std::pow(k, -2.0);
    brute += 0.5 * std::pow(4001.0, -2.0);
    XInterval h = base.head(1.0, BigFloat::from_double(t));
    CHECK(to_certified(h).lo <= brute);
    CHECK(to_certified(h).hi >= brute);

    double tail_brute = 0;
    for (int k = 4001; k <= 4000000; ++k) tail_brute += std::pow(k, -2.0);
    XInterval tl = base.tail(1.0, BigFloat::from_double(4000.0));
    CHECK(to_certified(tl).lo <= tail_brute + 3e-7);
    CHECK(to_certified(tl).hi >= tail_brute);

    XInterval pt = base.point(BigFloat::from_double(123456.0));
    CHECK(to_certified(pt).lo <= std::pow(123457.0, -2.0));
    CHECK(to_certified(pt).hi >= std::pow(123457.0, -2.0));
}

TEST_CASE("chain integrals match materialized transforms") {
    Rng rng(602);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<double> hv = rng.uniform_vec(10, 0.2, 2.0);
        Seq h = rearrange(hv);
        double q = 1.0;
        std::uint64_t a1 = 1 + rng.uniform_int(0, 3), b1 = 1 + rng.uniform_int(0, 3);
        std::uint64_t a2 = a1 + 1 + rng.uniform_int(0, 4), b2 = 1 + rng.uniform_int(0, 3);

        Seq m1 = tail_stretch(h, {a1, b1, q});
        Seq m2 = tail_stretch(m1, {a2, b2, q});

        auto base = std::make_shared<BaseStep>(h, std::vector<double>{0.5, 1.0, 2.0});
        StretchChain chain(base, q);
        chain.push(BigFloat::from_double(static_cast<double>(a1)),
                   BigFloat::from_double(static_cast<double>(b1)));
        chain.push(BigFloat::from_double(static_cast<double>(a2)),
                   BigFloat::from_double(static_cast<double>(b2)));

        std::uint64_t hor = m2.prefix_len() + 4;
        for (double e : {0.5, 1.0, 2.0}) {
            for (double t : {0.0, 1.0, 2.5, 7.0, 30.5, 200.0}) {
                double bh = brute_head(m2, e, t);
                CertifiedValue ch = to_certified(chain.head(e, BigFloat::from_double(t)));
                CHECK(ch.lo <= bh + 1e-9);
                CHECK(ch.hi >= bh - 1e-9);
                double bt = brute_tail(m2, e, t, hor);
                CertifiedValue ct = to_certified(chain.tail(e, BigFloat::from_double(t)));
                CHECK(ct.lo <= bt + 1e-9);
                CHECK(ct.hi >= bt - 1e-9);
            }
        }
        // point evaluations across the joint
        for (double t : {0.0, 0.5, 3.0, 12.2, 77.0}) {
            CertifiedValue cp = to_certified(chain.point(BigFloat::from_double(t)));
            double truth = m2.at(static_cast<std::uint64_t>(std::floor(t)) + 1);
            CHECK(cp.lo <= truth + 1e-12);
            CHECK(cp.hi >= truth - 1e-12);
        }
    }
}

TEST_CASE("chain q-mass is preserved and pullback contracts") {
    Seq g = Seq::power(1.0, 2.5, 1000);
    auto base = std::make_shared<BaseStep>(g, std::vector<double>{0.5});
    StretchChain chain(base, 0.5);
    chain.push(BigFloat::from_double(3.0), BigFloat::from_double(4.0));
    chain.push(BigFloat::from_double(10.0), BigFloat::from_double(8.0));

    CertifiedValue total_g = to_certified(base->tail(0.5, BigFloat::zero()));
    CertifiedValue total_f = to_certified(chain.tail(0.5, BigFloat::zero()));
    CHECK(total_f.lo <= total_g.hi + 1e-12);
    CHECK(total_f.hi >= total_g.lo - 1e-12);

    for (double t : {0.0, 1.0, 5.0, 20.0, 500.0}) {
        XInterval psi = chain.pullback(BigFloat::from_double(t));
        CHECK(psi.hi.to_double() <= t + 1e-9);
        // q-tails only grow under the transform
        CertifiedValue tf = to_certified(chain.tail(0.5, BigFloat::from_double(t)));
        CertifiedValue tg = to_certified(base->tail(0.5, BigFloat::from_double(t)));
        CHECK(tf.hi >= tg.lo - 1e-12);
    }
}

TEST_CASE("head_with/tail_with match a pushed link") {
    Seq g = Seq::power(1.0, 2.0, 200);
    auto base = std::make_shared<BaseStep>(g, std::vector<double>{0.5, 1.0});
    StretchChain chain(base, 1.0);
    chain.push(BigFloat::from_double(2.0), BigFloat::from_double(3.0));

    BigFloat a = BigFloat::from_double(9.0), b = BigFloat::from_double(5.0);
    StretchChain pushed = chain;
    pushed.push(a, b);
    for (double t : {4.0, 9.0, 12.5, 60.0}) {
        CertifiedValue w = to_certified(chain.head_with(a, b, 0.5, BigFloat::from_double(t)));
        CertifiedValue p = to_certified(pushed.head(0.5, BigFloat::from_double(t)));
        CHECK(w.lo <= p.hi + 1e-12);
        CHECK(w.hi >= p.lo - 1e-12);
        CertifiedValue wt = to_certified(chain.tail_with(a, b, 1.0, BigFloat::from_double(t)));
        CertifiedValue pt = to_certified(pushed.tail(1.0, BigFloat::from_double(t)));
        CHECK(wt.lo <= pt.hi + 1e-12);
        CHECK(wt.hi >= pt.lo - 1e-12);
    }
}

TEST_CASE("tail_stretch sequence form") {
    Seq h({1, 1});
    Seq out = tail_stretch(h, {1, 2, 1.0});
    REQUIRE(out.prefix_len() == 3);
    CHECK(out.at(1) == doctest::Approx(1.0));
    CHECK(out.at(2) == doctest::Approx(0.5));
    CHECK(out.at(3) == doctest::Approx(0.5));
    // q-mass preservation past a
    double mass_in = std::pow(h.at(2), 1.0);
    double mass_out = out.at(2) + out.at(3);
    CHECK(mass_out == doctest::Approx(mass_in));

    // b = 1 is the identity for every a
    Rng rng(603);
    Seq x = rearrange(rng.uniform_vec(7, 0.0, 1.0));
    for (std::uint64_t a : {1ull, 3ull, 6ull}) {
        Seq id = tail_stretch(x, {a, 1, 0.7});
        for (std::uint64_t k = 1; k <= 7; ++k) CHECK(id.at(k) == doctest::Approx(x.at(k)));
    }

    // index formula oracle
    for (int trial = 0; trial < 10; ++trial) {
        Seq hh = rearrange(rng.uniform_vec(9, 0.1, 2.0));
        std::uint64_t a = 1 + rng.uniform_int(0, 3), b = 2 + rng.uniform_int(0, 3);
        double q = 0.5 + rng.uniform() * 1.5;
        Seq img = tail_stretch(hh, {a, b, q});
        for (std::uint64_t n = 1; n <= img.prefix_len(); ++n) {
            double expect = n <= a ? hh.at(n)
                                   : std::pow(static_cast<double>(b), -1.0 / q) *
                                         hh.at(a + (n - 1 - a) / b + 1);
            CHECK(img.at(n) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}
