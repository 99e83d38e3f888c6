#include "doctest.h"
#include "lpq/rng.hpp"
#include "lpq/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace lpq;

TEST_CASE("rearrange sorts absolute values") {
    std::vector<double> v{0, 3, 1, 3};
    Seq s = rearrange(v);
    CHECK(s.prefix() == std::vector<double>{3, 3, 1, 0});
    std::vector<double> w{-2, 1};
    CHECK(rearrange(w).prefix() == std::vector<double>{2, 1});
}

TEST_CASE("rearrange matches selection oracle and is idempotent") {
    Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> v = rng.uniform_vec(50, -1.0, 1.0);
        Seq s = rearrange(v);
        // oracle: k-th largest by full sort of |v|
        std::vector<double> abs(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) abs[i] = std::fabs(v[i]);
        std::sort(abs.rbegin(), abs.rend());
        for (std::size_t k = 0; k < v.size(); ++k) CHECK(s.at(k + 1) == abs[k]);
        // idempotent, permutation-invariant
        Seq s2 = rearrange(s.prefix());
        CHECK(s2.prefix() == s.prefix());
        std::vector<double> perm = v;
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.uniform_int(0, i - 1)]);
        CHECK(rearrange(perm).prefix() == s.prefix());
    }
}

TEST_CASE("Seq invariants are enforced") {
    CHECK_THROWS_AS(Seq({1.0, 2.0}), std::invalid_argument);           // increasing
    CHECK_THROWS_AS(Seq({-1.0}), std::invalid_argument);               // negative
    CHECK_THROWS_AS(Seq({0.0}, Tail::power(1.0, 2.0)), std::invalid_argument);  // monotonicity
    CHECK_NOTHROW(Seq({1.0, 0.5}, Tail::power(1.0, 2.0)));             // 0.5 >= 3^-2
}

TEST_CASE("head_sum exact values") {
    Seq s({1, 1});
    CHECK(head_sum(s, 2, 1.0).mid() == doctest::Approx(2.0));
    CHECK(head_sum(s, 5, 2.0).mid() == doctest::Approx(2.0));  // zeros past support
    CHECK_THROWS(head_sum(s, 2, 0.0));
}

TEST_CASE("head_sum power tail matches direct summation oracle") {
    Seq s = Seq::power(1.0, 2.0);
    CertifiedValue enc = head_sum(s, 10, 1.0);
    double direct = 0;
    for (int k = 1; k <= 10; ++k) direct += std::pow(k, -2.0);
    CHECK(enc.lo <= direct);
    CHECK(enc.hi >= direct);
    CHECK(enc.width() < 1e-9);  // explicit summation path
}

TEST_CASE("tail_sum exact and bracketed") {
    Seq s({1, 1});
    CHECK(tail_sum(s, 2, 1.0).mid() == doctest::Approx(1.0));
    CHECK(tail_sum(s, 3, 0.5).mid() == doctest::Approx(0.0));

    Seq t = Seq::power(1.0, 3.0);
    CertifiedValue enc = tail_sum(t, 4, 1.0);
    // oracle: partial summation + integral remainder bracket
    double partial = 0;
    for (int k = 4; k <= 400000; ++k) partial += std::pow(k, -3.0);
    double rem_lo = 0.5 * std::pow(400001.0, -2.0);
    CHECK(enc.lo <= partial + rem_lo + 1e-15);
    CHECK(enc.hi >= partial);
    CHECK(enc.width() <= std::pow(4.0, -3.0) + 1e-15);
    CHECK_THROWS_AS(tail_sum(Seq::power(1.0, 0.5), 1, 1.0), std::domain_error);
}

TEST_CASE("tail_sum enclosures are nested in m") {
    Seq t = Seq::power(2.0, 1.5, 8);
    for (std::uint64_t m = 1; m < 30; ++m) {
        CertifiedValue a = tail_sum(t, m, 2.0);
        CertifiedValue b = tail_sum(t, m + 1, 2.0);
        CHECK(a.lo >= b.lo - 1e-15);
        CHECK(a.hi >= b.hi - 1e-15);
    }
}

TEST_CASE("head/tail consistency on full support") {
    Rng rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        Seq s = rearrange(rng.uniform_vec(12, 0.0, 2.0));
        double q = rng.uniform(0.3, 2.5);
        CertifiedValue h = head_sum(s, 12, q);
        CertifiedValue t = tail_sum(s, 1, q);
        CHECK(h.mid() == doctest::Approx(t.mid()).epsilon(1e-12));
    }
}

TEST_CASE("Pp and Qq follow the definitions") {
    Seq s({2, 1});
    CHECK(Pp(s, 2, 1.0).mid() == doctest::Approx(3.0));
    CHECK(Qq(s, 2, 1.0).mid() == doctest::Approx(1.0));
    Seq u({1, 1, 1, 1});
    CHECK(Pp(u, 4, 2.0).mid() == doctest::Approx(2.0));
}

TEST_CASE("dilate repeats terms and scales norms") {
    Seq s({3, 2, 1});
    Seq d2 = dilate(s, 2);
    CHECK(d2.prefix() == std::vector<double>{3, 3, 2, 2, 1, 1});
    CHECK(dilate(s, 1).prefix() == s.prefix());
    Seq d3 = dilate(s, 3);
    // oracle: index arithmetic, each term repeated three times
    std::vector<double> expect{3, 3, 3, 2, 2, 2, 1, 1, 1};
    CHECK(d3.prefix() == expect);

    // norm identities for zero tails
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        Seq x = rearrange(rng.uniform_vec(9, 0.0, 1.0));
        std::uint64_t n = 1 + rng.uniform_int(0, 4);
        double qq = rng.uniform(0.4, 2.0);
        Seq dx = dilate(x, n);
        CHECK(head_sum(dx, dx.prefix_len(), qq).mid() ==
              doctest::Approx(n * head_sum(x, x.prefix_len(), qq).mid()).epsilon(1e-12));
        CHECK(*l0_norm(dx) == n * *l0_norm(x));
    }
    CHECK_THROWS_AS(dilate(Seq::power(1, 2), 2), std::invalid_argument);
}

TEST_CASE("cesaro_p explicit values and domination") {
    Seq ones(std::vector<double>(6, 1.0));
    Seq c = cesaro_p(ones, 1.0, 6);
    for (int k = 1; k <= 6; ++k) CHECK(c.at(k) == doctest::Approx(1.0));

    Seq e1({1.0});
    Seq c1 = cesaro_p(e1, 1.0, 5);
    for (int k = 1; k <= 5; ++k) CHECK(c1.at(k) == doctest::Approx(1.0 / k));

    Seq s({2, 1});
    Seq c2 = cesaro_p(s, 2.0, 3);
    CHECK(c2.at(1) == doctest::Approx(2.0));
    CHECK(c2.at(2) == doctest::Approx(std::sqrt(5.0 / 2.0)));
    CHECK(c2.at(3) == doctest::Approx(std::sqrt(5.0 / 3.0)));

    // the p-mean of the top n terms dominates the n-th term
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        Seq x = rearrange(rng.uniform_vec(15, 0.0, 3.0));
        double p = rng.uniform(0.3, 2.0);
        Seq cp = cesaro_p(x, p, 15);
        for (int k = 1; k <= 15; ++k) CHECK(cp.at(k) >= x.at(k) - 1e-12);
    }
}

TEST_CASE("l0_norm counts support") {
    CHECK(*l0_norm(Seq({3, 1, 0, 0})) == 2);
    CHECK(*l0_norm(Seq(std::vector<double>{})) == 0);
    CHECK_FALSE(l0_norm(Seq::power(1, 2)).has_value());
}

TEST_CASE("CoupleParams validates and derives alpha") {
    CoupleParams c(1.0, 2.0);
    CHECK(c.alpha == doctest::Approx(2.0));
    CoupleParams ci(0.5, std::numeric_limits<double>::infinity());
    CHECK(ci.alpha == doctest::Approx(0.5));
    CoupleParams c0(0.0, 1.0);
    CHECK(std::isnan(c0.alpha));
    CHECK_THROWS_AS(CoupleParams(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CoupleParams(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("tail_pointwise_dominated covers the model cases") {
    Seq x = Seq::power(1.0, 2.0, 4);
    Seq y = Seq::power(1.0, 3.0, 4);
    CHECK(tail_pointwise_dominated(x, y, 4) == Verdict::Pass);
    CHECK(tail_pointwise_dominated(y, x, 4) == Verdict::Fail);
    Seq z({1, 0.5});
    CHECK(tail_pointwise_dominated(x, z, 2) == Verdict::Pass);
    CHECK(tail_pointwise_dominated(z, x, 4) == Verdict::Fail);
}
