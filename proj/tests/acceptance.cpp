// Acceptance suite: ten criteria, each printed as one pass/fail line.
// Tolerances and thresholds are pinned in code; run via ctest or directly
// (lpq_acceptance -s for per-assertion detail).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include "lpq/counterexample.hpp"
#include "lpq/decomposer.hpp"
#include "lpq/functionals.hpp"
#include "lpq/opnorms.hpp"
#include "lpq/rng.hpp"
#include "lpq/seqio.hpp"

using namespace lpq;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Criterion {
    std::string name;
    int failures = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Criterion(std::string n) : name(std::move(n)) {}

    void expect(bool ok, const std::string& what) {
        CHECK_MESSAGE(ok, name << ": " << what);
        if (!ok) ++failures;
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    void finish(double budget_s = 0.0) {
        double t = elapsed();
        if (budget_s > 0) expect(t <= budget_s, "runtime within budget");
        std::string budget_note =
            budget_s > 0 ? ", budget " + std::to_string(static_cast<int>(budget_s)) + " s" : "";
        std::printf("[%s] %s (%.1f s%s)\n", name.c_str(), failures == 0 ? "PASS" : "FAIL", t,
                    budget_note.c_str());
        std::fflush(stdout);
    }
};

struct OracleCase {
    Seq x;
    CoupleParams couple{0.5, 1.0};
    double t = 1.0;
};

std::vector<OracleCase> oracle_corpus(std::uint64_t seed) {
    // 200 random finite sequences (len <= 6, entries in [0, 2]) x 3 couples
    Rng rng(seed);
    std::vector<std::pair<double, double>> couples{{0.5, 1.0}, {1.0, 2.0}, {0.7, 0.9}};
    std::vector<OracleCase> corpus;
    for (int i = 0; i < 200; ++i) {
        std::size_t len = 1 + rng.uniform_int(0, 5);
        Seq x = rearrange(rng.uniform_vec(len, 0.0, 2.0));
        double t = std::exp2(rng.uniform(-4.0, 4.0));
        for (auto [p, q] : couples) corpus.push_back({x, CoupleParams(p, q), t});
    }
    return corpus;
}

// Minimum of F(u) = (Sum u^p)^{1/p} + t (Sum (x-u)^q)^{1/q} over the dense
// grid with absolute step 1e-3 per coordinate.
//
// For q <= 1 (and p <= 1) F is concave in each coordinate: dF/du_k = a - b
// where a = (A_rest + u^p)^{1/p-1} u^{p-1} is nonincreasing (its log
// derivative is (p-1) A_rest / (u (A_rest + u^p)) <= 0) and
// b = t (B_rest + v^q)^{1/q-1} v^{q-1}, v = x_k - u, is nondecreasing (the
// mirrored computation gives -(1-q) B_rest / (v (B_rest + v^q)) <= 0 in v).
// A per-coordinate concave function on an interval is minimized at an
// endpoint, so the full grid minimum equals the minimum over the 2^n corner
// points u_k in {0, x_k} — enumerated exactly below.
//
// For q > 1 (the (1,2) couple) F is jointly convex and a branch-and-bound
// over index boxes is used: on a box the head sum is minimized at the lower
// corner and the tail sum at the upper corner, so the corner-mix value is a
// sound lower bound and boxes above the incumbent are discarded whole.
double grid_minimum(const std::vector<double>& x, double t, double p, double q, double seed_value) {
    const std::size_t n_coords = x.size();
    if (q <= 1.0) {
        double best = seed_value;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n_coords); ++mask) {
            double A = 0, B = 0;
            for (std::size_t k = 0; k < n_coords; ++k) {
                if (mask >> k & 1)
                    A += std::pow(x[k], p);
                else
                    B += std::pow(x[k], q);
            }
            best = std::min(best, std::pow(A, 1.0 / p) + t * std::pow(B, 1.0 / q));
        }
        return best;
    }
    const double step = 1e-3;
    const std::size_t n = x.size();
    std::vector<std::vector<double>> P(n), Q(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> u;
        for (double v = 0.0; v < x[k]; v += step) u.push_back(v);
        u.push_back(x[k]);
        P[k].resize(u.size());
        Q[k].resize(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            P[k][i] = std::pow(u[i], p);           // increasing in i
            Q[k][i] = std::pow(x[k] - u[i], q);    // decreasing in i
        }
    }
    double best = seed_value;
    struct Box {
        std::array<std::size_t, 6> lo, hi;  // inclusive index ranges
    };
    Box root{};
    for (std::size_t k = 0; k < n; ++k) {
        root.lo[k] = 0;
        root.hi[k] = P[k].size() - 1;
    }
    auto bound = [&](const Box& b) {
        double A = 0, B = 0;
        for (std::size_t k = 0; k < n; ++k) {
            A += P[k][b.lo[k]];
            B += Q[k][b.hi[k]];
        }
        return std::pow(A, 1.0 / p) + t * std::pow(B, 1.0 / q);
    };
    auto value_at = [&](const std::array<std::size_t, 6>& idx) {
        double A = 0, B = 0;
        for (std::size_t k = 0; k < n; ++k) {
            A += P[k][idx[k]];
            B += Q[k][idx[k]];
        }
        return std::pow(A, 1.0 / p) + t * std::pow(B, 1.0 / q);
    };
    std::vector<Box> stack{root};
    while (!stack.empty()) {
        Box b = stack.back();
        stack.pop_back();
        if (bound(b) >= best) continue;
        std::size_t widest = 0, width = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (b.hi[k] - b.lo[k] > width) {
                width = b.hi[k] - b.lo[k];
                widest = k;
            }
        if (width == 0) {
            best = std::min(best, value_at(b.lo));
            continue;
        }
        std::size_t mid = b.lo[widest] + width / 2;
        Box left = b, right = b;
        left.hi[widest] = mid;
        right.lo[widest] = mid + 1;
        stack.push_back(left);
        stack.push_back(right);
    }
    return best;
}

template <typename Fn>
void parallel_over(std::size_t count, Fn&& fn) {
    unsigned workers = std::max(2u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

std::pair<Seq, Seq> hypothesis_pair(Rng& rng, const CoupleParams& couple, std::uint64_t horizon) {
    for (;;) {
        std::size_t len = 4 + rng.uniform_int(0, 12);
        Seq x = rearrange(rng.uniform_vec(len, 0.0, 2.0));
        std::vector<double> yv(len);
        for (std::size_t i = 0; i < len; ++i) yv[i] = x.at(i + 1) * rng.uniform(0.0, 1.0);
        if (rng.uniform() < 0.5 && len > 2) {
            std::size_t k = rng.uniform_int(0, 2);
            yv[k] = std::min(yv[k] * rng.uniform(1.0, 1.6), 2.5);
        }
        Seq y = rearrange(yv);
        if (holmstedt_majorizes(x, y, couple, horizon).verdict == Verdict::Pass) return {x, y};
    }
}

}  // namespace

TEST_CASE("criterion 1: K-oracle agrees with the dense-grid brute force") {
    Criterion cr("criterion 1");
    auto corpus = oracle_corpus(1001);
    std::atomic<int> checked{0};
    std::atomic<int> disagreements{0};
    std::vector<double> diffs(corpus.size(), 0.0);
    parallel_over(corpus.size(), [&](std::size_t i) {
        const auto& c = corpus[i];
        if (c.x.support_size() > 3) return;
        std::vector<double> xv(c.x.prefix().begin(),
                               c.x.prefix().begin() + c.x.support_size());
        if (xv.empty()) return;
        double oracle = k_exact_oracle(c.x, c.t, c.couple).value;
        double grid = grid_minimum(xv, c.t, c.couple.p, c.couple.q, oracle + 1.2e-5);
        diffs[i] = std::fabs(oracle - grid);
        if (diffs[i] > 1e-5) ++disagreements;
        ++checked;
    });
    cr.expect(checked.load() > 50, "enough len<=3 cases in the corpus");
    cr.expect(disagreements.load() == 0, "all oracle values within 1e-5 of the grid minimum");
    cr.finish(60.0);
}

TEST_CASE("criterion 2: Holmstedt dominates the oracle; sup H/K logged") {
    Criterion cr("criterion 2");
    auto corpus = oracle_corpus(1001);
    std::atomic<int> violations{0};
    std::vector<double> sup_ratio(corpus.size(), 0.0);
    parallel_over(corpus.size(), [&](std::size_t i) {
        const auto& c = corpus[i];
        if (c.x.support_size() == 0) return;
        Rng rng(9000 + i);
        for (int j = 0; j < 20; ++j) {
            double t = std::exp2(rng.uniform(-4.0, 4.0));
            double k = k_exact_oracle(c.x, t, c.couple).value;
            CertifiedValue h = holmstedt(c.x, t, c.couple);
            if (k > h.hi + 1e-9) ++violations;
            if (k > 1e-12) sup_ratio[i] = std::max(sup_ratio[i], h.hi / k);
        }
    });
    cr.expect(violations.load() == 0, "oracle <= holmstedt + 1e-9 in 100% of cases");
    double measured = 0;
    for (double v : sup_ratio) measured = std::max(measured, v);
    cr.expect(std::isfinite(measured) && measured >= 1.0, "measured sup H/K is finite");
    std::printf("  measured sup H/K over the corpus: %.4f\n", measured);
    cr.finish(120.0);
}

TEST_CASE("criterion 3: E<->K implication checks on constructed dominated pairs") {
    Criterion cr("criterion 3");
    std::vector<double> grid = dyadic_grid(8);
    int impl1_fail = 0, impl2_fail = 0;
    for (double q : {0.5, 1.0, 2.0, kInf}) {
        Rng rng(3000 + static_cast<std::uint64_t>(q * 10));
        for (int trial = 0; trial < 100; ++trial) {
            std::size_t len = 2 + rng.uniform_int(0, 10);
            Seq x = rearrange(rng.uniform_vec(len, 0.0, 2.0));
            std::vector<double> yv(len);
            for (std::size_t i = 0; i < len; ++i) yv[i] = x.at(i + 1) * rng.uniform(0.0, 1.0);
            Seq y = rearrange(yv);
            ImplReport r1 = check_impl1(x, y, q, grid, 32);
            if (!(r1.hypothesis_certified && r1.verdict == Verdict::Pass)) ++impl1_fail;
            ImplReport r2 = check_impl2(x, y, 1.0, q, grid, 32);
            if (!(r2.hypothesis_certified && r2.verdict == Verdict::Pass)) ++impl2_fail;
        }
    }
    cr.expect(impl1_fail == 0, "check_impl1 pass on 100 pairs for each q");
    cr.expect(impl2_fail == 0, "check_impl2 pass on 100 pairs for each q");
    cr.finish();
}

TEST_CASE("criterion 4: decomposition pipeline on 100 hypothesis-satisfying pairs") {
    Criterion cr("criterion 4");
    Rng rng(4001);
    int count = 0, coverage_fail = 0, cert_fail = 0, residual_fail = 0;
    double worst_t_excess = 0.0, worst_s_excess = 0.0;
    for (double p : {0.5, 1.0}) {
        for (double q : {1.0, 2.0}) {
            if (!(p < q)) continue;
            CoupleParams couple(p, q);
            for (int trial = 0; trial < (p == 0.5 && q == 1.0 ? 34 : 33); ++trial) {
                auto [x, y] = hypothesis_pair(rng, couple, 24);
                ++count;
                IntervalPartition part = ab_partition(x, y, couple, 24);
                if (part.coverage != Verdict::Pass) {
                    ++coverage_fail;
                    continue;
                }
                for (const auto& c : block_certificates(x, y, part, couple))
                    if (c.verdict != Verdict::Pass) ++cert_fail;
                SplitResult res = split_operator(x, y, couple, 24);
                if (res.residual > 1e-10) ++residual_fail;
                worst_t_excess = std::max(worst_t_excess, res.t_norm_p.hi - res.t_target_p);
                worst_s_excess = std::max(worst_s_excess,
                                          std::max(res.s_norm_0.hi, res.s_norm_q.hi) - 18.0);
            }
        }
    }
    cr.expect(count == 100, "ran 100 pairs");
    cr.expect(coverage_fail == 0, "A u B covers 1..horizon in 100/100");
    cr.expect(cert_fail == 0, "all block certificates pass");
    cr.expect(residual_fail == 0, "split residual <= 1e-10 in 100/100");
    std::printf("  transport norms vs reference constants: worst T excess %+.3f, worst S excess "
                "%+.3f (informational)\n",
                worst_t_excess, worst_s_excess);
    cr.finish();
}

TEST_CASE("criterion 5: (l^0, l^inf) orbit operator norm <= 2 on 100 instances") {
    Criterion cr("criterion 5");
    Rng rng(5001);
    int ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t len = 1 + rng.uniform_int(0, 9);
        Seq x = rearrange(rng.uniform_vec(len, 0.1, 2.0));
        std::size_t ylen = 2 * len;
        std::vector<double> u(ylen);
        double cur = rng.uniform(0.0, 1.0);
        for (std::size_t i = 0; i < ylen; ++i) {
            u[i] = cur;
            cur *= rng.uniform(0.5, 1.0);
        }
        std::vector<double> yv(ylen);
        for (std::size_t k = 1; k <= ylen; ++k) yv[k - 1] = u[k - 1] * 2.0 * x.at((k + 1) / 2);
        for (std::size_t i = 1; i < ylen; ++i) yv[i] = std::min(yv[i], yv[i - 1]);
        Seq y(yv);
        OperatorMatrix S = orbit_op_l0_linf(x, y);
        CoupleNormReport rep;
        rep.endpoint0 = norm_l0(S);
        rep.endpoint1 = norm_linf(S);
        double combined = std::max(rep.endpoint0.hi, rep.endpoint1.hi);
        std::vector<double> xv(S.cols());
        for (std::size_t k = 0; k < xv.size(); ++k) xv[k] = x.at(k + 1);
        std::vector<double> img = S.apply(xv);
        bool exact = true;
        for (std::size_t k = 1; k <= ylen; ++k) {
            double got = k <= img.size() ? img[k - 1] : 0.0;
            if (std::fabs(got - y.at(k)) > 1e-12) exact = false;
        }
        if (exact && combined <= 2.0 + 1e-12) ++ok;
    }
    cr.expect(ok == 100, "Sx = y exactly and measured couple norm <= 2 + 1e-12, 100/100");
    cr.finish();
}

TEST_CASE("criterion 6: transform property suite along the doubling ladder") {
    Criterion cr("criterion 6");
    std::vector<std::pair<std::string, Seq>> hs;
    hs.push_back({"finite steps", Seq({1, 1, 0.5, 0.5, 0.25, 0.25, 0.125, 0.125})});
    std::vector<double> trunc;
    for (int k = 1; k <= 64; ++k) trunc.push_back(std::pow(static_cast<double>(k), -2.0));
    hs.push_back({"truncated power", Seq(std::move(trunc))});
    hs.push_back({"power tail", Seq::power(1.0, 3.0, 128)});
    for (const auto& [label, h] : hs) {
        for (std::uint64_t a : {1ull, 3ull, 10ull}) {
            std::vector<double> grid;
            for (double t : {0.5, 1.0, static_cast<double>(a), a + 1.0, 2.0 * a, 4.0 * a, 12.0})
                if (t > 0) grid.push_back(t);
            LemmaTabReport rep = lemma_tab_verify(h, a, 0.5, 1.0, 2.0, grid, 1u << 16);
            cr.expect(rep.overall == Verdict::Pass,
                      label + " a=" + std::to_string(a) + " all items certified");
            for (const auto& rec : rep.item5)
                if (!rec.skipped)
                    cr.expect(rec.minimal_passing_b <= static_cast<std::uint64_t>(
                                                           std::floor(rec.threshold)) +
                                                           1,
                              label + ": minimal passing b recorded at or below the threshold");
        }
    }
    cr.finish(60.0);
}

TEST_CASE("criterion 7: counterexample generator end-to-end") {
    Criterion cr("criterion 7");
    // regime p = 0, q = 0.5, r = inf, g = (n^{-2.5}), 20 steps
    {
        Seq g = Seq::power(1.0, 2.5);
        GenResult gen = gen_counterexample(g, 0.0, 0.5, kInf, 20);
        VerifyReport rep = verify_counterexample(gen.f, g, 0.0, 0.5, kInf, gen.trace, 4096);
        cr.expect(rep.steps_certified == Verdict::Pass, "regime A: per-step conditions certified");
        cr.expect(rep.mass_conserved == Verdict::Pass, "regime A: ||f||_q = ||g||_q certified");
        cr.expect(rep.mass_width <= 1e-6, "regime A: norm enclosure width <= 1e-6");
        cr.expect(rep.tail_domination == Verdict::Pass,
                  "regime A: tail majorization certified for all m <= 4096");
        double min_ratio = kInf;
        bool monotone = true;
        double prev = kInf;
        for (const auto& cp : rep.checkpoints) {
            min_ratio = std::min(min_ratio, cp.ratio_hi);
            if (cp.n >= 3) {
                if (cp.ratio_hi > prev * (1.0 + 1e-9)) monotone = false;
                prev = cp.ratio_hi;
            }
        }
        cr.expect(min_ratio < 0.1, "regime A: checkpoint ratio drops below 0.1 within 20 steps");
        cr.expect(monotone, "regime A: ratios nonincreasing after step 3");
    }
    // regime 0 < p < r < inf with (p, q, r) = (0.4, 0.5, 1), 12 steps
    {
        Seq g = Seq::power(1.0, default_sigma(0.4, 0.5));
        GenResult gen = gen_counterexample(g, 0.4, 0.5, 1.0, 12);
        VerifyReport rep = verify_counterexample(gen.f, g, 0.4, 0.5, 1.0, gen.trace, 1024);
        cr.expect(rep.steps_certified == Verdict::Pass, "regime B: per-step conditions certified");
        cr.expect(rep.mass_conserved == Verdict::Pass, "regime B: mass conserved");
        cr.expect(rep.tail_domination == Verdict::Pass, "regime B: tail majorization certified");
        cr.expect(!rep.checkpoints.empty(), "regime B: checkpoints produced");
        if (!rep.checkpoints.empty())
            cr.expect(rep.checkpoints.back().ratio_hi < 0.25,
                      "regime B: ratio below 0.25 by the last checkpoint");
    }
    cr.finish(600.0);
}

TEST_CASE("criterion 8: witness pair and the operator norm floor") {
    Criterion cr("criterion 8");
    WitnessResult w = cm_witness(0.0, 0.5, 10.0);
    cr.expect(w.N == 11, "N = 11 exactly");
    cr.expect(w.hypothesis == Verdict::Pass, "tail-sum hypothesis certified");
    std::size_t n = w.N;
    std::vector<double> xv(n);
    for (std::size_t k = 0; k < n; ++k) xv[k] = w.x.at(k + 1);
    double xx = 0;
    for (double v : xv) xx += v * v;
    std::vector<Triplet> tr;
    for (std::size_t k = 0; k < n; ++k) tr.push_back({0, k, xv[k] / xx});
    OperatorMatrix S0 = OperatorMatrix::from_triplets(n, n, tr);
    Rng rng(8001);
    int ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Triplet> vt;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> row(n);
            for (auto& v : row) v = rng.uniform(-2.0, 2.0);
            double dot = 0;
            for (std::size_t k = 0; k < n; ++k) dot += row[k] * xv[k];
            for (std::size_t k = 0; k < n; ++k) {
                double v = row[k] - dot * xv[k] / xx;
                if (v != 0.0) vt.push_back({j, k, v});
            }
        }
        OperatorMatrix S = S0 + OperatorMatrix::from_triplets(n, n, vt);
        if (cm_witness_verify(w.x, w.y, w.N, 0.5, S) == Verdict::Pass &&
            norm_lq_exact(S, 0.5).hi >= 11.0 - 1e-9)
            ++ok;
    }
    cr.expect(ok == 100, "100 null-space-sampled operators all have l^{1/2} norm >= 11 - 1e-9");
    cr.finish(30.0);
}

TEST_CASE("criterion 9: exact norm formulas against probing and exhaustive oracles") {
    Criterion cr("criterion 9");
    Rng rng(9001);
    int probe_violations = 0, attain_misses = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t dim = 3 + rng.uniform_int(0, 4);
        std::vector<Triplet> tr;
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = 0; k < dim; ++k)
                if (rng.uniform() < 0.7) tr.push_back({j, k, rng.uniform(-1.0, 1.0)});
        OperatorMatrix m = OperatorMatrix::from_triplets(dim, dim, tr);
        double q = std::vector<double>{0.3, 0.5, 1.0}[trial % 3];
        double norm = norm_lq_exact(m, q).hi;
        auto qn = [&](std::span<const double> v) {
            double s = 0;
            for (double z : v) s += std::pow(std::fabs(z), q);
            return std::pow(s, 1.0 / q);
        };
        for (int i = 0; i < 40; ++i) {
            std::vector<double> xr = rng.uniform_vec(dim, -1.0, 1.0);
            double nx = qn(xr);
            if (nx == 0) continue;
            if (qn(m.apply(xr)) > norm * nx * (1.0 + 1e-9)) ++probe_violations;
        }
        double basis_best = 0;
        for (std::size_t k = 0; k < dim; ++k) {
            std::vector<double> e(dim, 0.0);
            e[k] = 1.0;
            basis_best = std::max(basis_best, qn(m.apply(e)));
        }
        if (std::fabs(basis_best - norm) > 1e-9 * std::max(1.0, norm)) ++attain_misses;
    }
    cr.expect(probe_violations == 0, "random probes never exceed the exact l^q norm");
    cr.expect(attain_misses == 0, "a basis vector attains the exact l^q norm");

    int l0_misses = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t dim = 5 + rng.uniform_int(0, 2);
        std::vector<Triplet> tr;
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = 0; k < dim; ++k)
                if (rng.uniform() < 0.3) tr.push_back({j, k, rng.uniform(-1.0, 1.0)});
        OperatorMatrix m = OperatorMatrix::from_triplets(dim, dim, tr);
        double reported = norm_l0(m).hi;
        double best = 0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j)
                for (std::size_t k = j; k < dim; ++k) {
                    std::vector<double> x(dim, 0.0);
                    x[i] = x[j] = x[k] = 1.0;
                    double sx = 0, sy = 0;
                    for (double v : x) sx += v != 0;
                    for (double v : m.apply(x)) sy += v != 0;
                    if (sx > 0) best = std::max(best, sy / sx);
                }
        if (best > reported + 1e-12) ++l0_misses;
        // single-support attainment
        double attained = 0;
        for (std::size_t k = 0; k < dim; ++k) {
            std::vector<double> x(dim, 0.0);
            x[k] = 1.0;
            double s = 0;
            for (double v : m.apply(x)) s += v != 0;
            attained = std::max(attained, s);
        }
        if (attained != reported) ++l0_misses;
    }
    cr.expect(l0_misses == 0, "l^0 norm matches the exhaustive small-support search");

    int ext_fail = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Triplet> tr;
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t k = 0; k < 6; ++k)
                if (rng.uniform() < 0.4) tr.push_back({j, k, rng.uniform(-1.0, 1.0)});
        OperatorMatrix m = OperatorMatrix::from_triplets(6, 6, tr);
        if (check_extension_theorem(m, 0.3, 0.8).verdict != Verdict::Pass) ++ext_fail;
    }
    cr.expect(ext_fail == 0, "column-norm monotonicity holds in 100/100 cases");
    cr.finish();
}

TEST_CASE("criterion 10: determinism of the counterexample traces") {
    Criterion cr("criterion 10");
    Seq gA = Seq::power(1.0, 2.5);
    GenResult a1 = gen_counterexample(gA, 0.0, 0.5, kInf, 20);
    GenResult a2 = gen_counterexample(gA, 0.0, 0.5, kInf, 20);
    cr.expect(trace_to_json(a1.trace).dump(2) == trace_to_json(a2.trace).dump(2),
              "regime A trace JSON is byte-identical across runs");
    Seq gB = Seq::power(1.0, default_sigma(0.4, 0.5));
    GenResult b1 = gen_counterexample(gB, 0.4, 0.5, 1.0, 12);
    GenResult b2 = gen_counterexample(gB, 0.4, 0.5, 1.0, 12);
    cr.expect(trace_to_json(b1.trace).dump(2) == trace_to_json(b2.trace).dump(2),
              "regime B trace JSON is byte-identical across runs");
    cr.expect(ratios_csv(b1.trace) == ratios_csv(b2.trace), "ratio CSV is byte-identical");
    cr.finish();
}
