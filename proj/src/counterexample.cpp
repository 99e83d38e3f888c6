#include "lpq/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "lpq/rng.hpp"

namespace lpq {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::PposRfin: return "ppos-rfin";
        case Regime::PposRinf: return "ppos-rinf";
        case Regime::P0Rfin: return "p0-rfin";
        default: return "p0-rinf";
    }
}

double default_sigma(double p, double q) {
    if (p == 0.0) return 1.0 / q + 0.5;
    return 0.5 * (1.0 / q + std::min(1.0 / p, 1.0 / q + 1.0));
}

// ---------------------------------------------------------------------------
// Sequence-level transform.
// ---------------------------------------------------------------------------

Seq tail_stretch(const Seq& h, const StretchParams& prm, std::size_t horizon) {
    if (prm.a < 1 || prm.b < 1) throw std::invalid_argument("tail_stretch: a, b >= 1");
    if (!(prm.q > 0) || std::isinf(prm.q)) throw std::invalid_argument("tail_stretch: q in (0, inf)");
    constexpr std::size_t kMaxLen = 10'000'000;
    std::size_t n_out;
    if (h.is_finite()) {
        std::uint64_t S = h.support_size();
        n_out = S <= prm.a ? S : prm.a + prm.b * (S - prm.a);
        if (n_out > kMaxLen)
            throw std::length_error("tail_stretch: materialization exceeds the 1e7 entry guard");
    } else {
        n_out = std::min(horizon, kMaxLen);
    }
    double scale = std::pow(static_cast<double>(prm.b), -1.0 / prm.q);
    std::vector<double> out(n_out);
    for (std::uint64_t n = 1; n <= n_out; ++n) {
        if (n <= prm.a) {
            out[n - 1] = h.at(n);
        } else {
            std::uint64_t j = (n - 1 - prm.a) / prm.b;
            out[n - 1] = scale * h.at(prm.a + j + 1);
        }
    }
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::min(out[i], out[i - 1]);
    return Seq(std::move(out));
}

// ---------------------------------------------------------------------------
// Transform property verification.
// ---------------------------------------------------------------------------

namespace {

Verdict ge_with_slack(const XInterval& a, const XInterval& b, double rtol) {
    // a >= b up to the enclosure widths plus a relative slack; a Fail still
    // requires the intervals to separate beyond their own widths
    CertifiedValue ca = to_certified(a), cb = to_certified(b);
    double tol = ca.width() + cb.width() + rtol * std::max(1.0, std::fabs(cb.mid()));
    return certified_le(cb, ca, tol);
}

Verdict eq_with_slack(const XInterval& a, const XInterval& b, double rtol) {
    return worst(ge_with_slack(a, b, rtol), ge_with_slack(b, a, rtol));
}

}  // namespace

LemmaTabReport lemma_tab_verify(const Seq& h, std::uint64_t a, double p, double q, double r,
                                std::span<const double> t_grid, std::uint64_t b_max) {
    if (!(0 < p && p < q && q < r) || std::isinf(r))
        throw std::invalid_argument("lemma_tab_verify: 0 < p < q < r < inf");
    if (a < 1) throw std::invalid_argument("lemma_tab_verify: a >= 1");
    LemmaTabReport rep;
    auto base = std::make_shared<BaseStep>(h, std::vector<double>{p, q, r});
    const BigFloat a_bf = BigFloat::from_double(static_cast<double>(a));

    std::vector<std::uint64_t> ladder;
    for (std::uint64_t b = 1; b <= b_max; b *= 2) ladder.push_back(b);

    auto make_chain = [&](std::uint64_t b) {
        StretchChain ch(base, q);
        ch.push(a_bf, BigFloat::from_double(static_cast<double>(b)));
        return ch;
    };

    XInterval head_a = base->head(p, a_bf);
    XInterval h_at_a = base->point(a_bf);

    rep.head_convergence = Verdict::Pass;
    rep.tail_domination = Verdict::Pass;
    rep.head_equality = Verdict::Pass;
    rep.tail_r_vanishes = Verdict::Pass;
    rep.item1_final_gap = 0.0;

    XInterval tail_r_a = base->tail(r, a_bf);
    for (std::uint64_t b : ladder) {
        StretchChain ch = make_chain(b);
        double bfac = std::pow(static_cast<double>(b), -p / q);
        for (double t : t_grid) {
            BigFloat t_bf = BigFloat::from_double(t);
            if (t > static_cast<double>(a)) {
                // item 1: int_0^t (W h)^p -> int_0^a h^p, with the provable
                // envelope b^{-p/q} (t-a) h(a)^p
                XInterval diff = (ch.head(p, t_bf) - head_a).clamped_below();
                double envelope =
                    bfac * (t - static_cast<double>(a)) * std::pow(to_certified(h_at_a).hi, p);
                if (to_certified(diff).lo > envelope * (1.0 + 1e-9) + 1e-12)
                    rep.head_convergence = Verdict::Fail;
                if (b == ladder.back())
                    rep.item1_final_gap = std::max(rep.item1_final_gap, to_certified(diff).hi);
            }
            // item 2: tail q-mass can only grow
            rep.tail_domination = worst(
                rep.tail_domination, ge_with_slack(ch.tail(q, t_bf), base->tail(q, t_bf), 1e-9));
            // item 3: equality at or below the joint
            if (t <= static_cast<double>(a))
                rep.head_equality = worst(
                    rep.head_equality, eq_with_slack(ch.tail(q, t_bf), base->tail(q, t_bf), 1e-9));
        }
        // item 4: int_a^inf (W h)^r = b^{1-r/q} int_a^inf h^r -> 0
        XInterval tr = ch.tail(r, a_bf);
        XInterval closed = tail_r_a * XInterval::point(
                                          std::pow(static_cast<double>(b), 1.0 - r / q));
        rep.tail_r_vanishes = worst(rep.tail_r_vanishes, eq_with_slack(tr, closed, 1e-9));
        if (b == ladder.back()) rep.item4_final_tail = to_certified(tr).hi;
    }

    // item 5: the threshold that forces tail r-domination
    rep.tail_r_threshold = Verdict::Pass;
    for (double t : t_grid) {
        LemmaTabReport::ThresholdRecord rec;
        rec.t = t;
        BigFloat t_bf = BigFloat::from_double(t);
        CertifiedValue den = to_certified(base->tail(r, t_bf));
        CertifiedValue num = to_certified(tail_r_a);
        if (!(den.lo > 0)) {
            rec.skipped = true;
            rep.item5.push_back(rec);
            continue;
        }
        rec.threshold = std::pow(num.hi / den.lo, q / (r - q));
        std::uint64_t b_star = static_cast<std::uint64_t>(std::floor(rec.threshold)) + 1;
        auto passes = [&](std::uint64_t b) {
            StretchChain ch = make_chain(b);
            return ge_with_slack(base->tail(r, t_bf), ch.tail(r, t_bf), 1e-9) == Verdict::Pass;
        };
        if (!passes(b_star)) {
            rep.tail_r_threshold = Verdict::Fail;
            rep.detail += "item5 failed just above threshold at t=" + std::to_string(t) + "; ";
        }
        for (std::uint64_t b : ladder)
            if (b > b_star && !passes(b)) rep.tail_r_threshold = Verdict::Fail;
        // minimal passing b (the map is monotone in b)
        std::uint64_t lo = 1, hi = b_star;
        if (passes(1)) {
            rec.minimal_passing_b = 1;
        } else {
            while (hi - lo > 1) {
                std::uint64_t mid = lo + (hi - lo) / 2;
                (passes(mid) ? hi : lo) = mid;
            }
            rec.minimal_passing_b = hi;
        }
        rep.item5.push_back(rec);
    }

    rep.overall = worst(worst(rep.head_convergence, rep.tail_domination),
                        worst(worst(rep.head_equality, rep.tail_r_vanishes), rep.tail_r_threshold));
    return rep;
}

// ---------------------------------------------------------------------------
// Generator.
// ---------------------------------------------------------------------------

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Regime classify(double p, double r) {
    if (p > 0) return std::isinf(r) ? Regime::PposRinf : Regime::PposRfin;
    return std::isinf(r) ? Regime::P0Rinf : Regime::P0Rfin;
}

// Base materialization length for tight total-mass enclosures: the
// remainder-bracket width c^q L^{-sigma q} is driven below 5e-8.
std::size_t pick_materialization(const Seq& g, double q) {
    double beta = g.tail().sigma * q;
    double c_e = std::pow(g.tail().c, q);
    double L = std::pow(c_e / 5e-8, 1.0 / beta);
    return static_cast<std::size_t>(std::clamp(L, 1e4, 1.5e6));
}

// smallest integral m >= start with pred(m) true; pred monotone in m
BigFloat min_integer_where(BigFloat start, const std::function<bool(const BigFloat&)>& pred,
                           const char* what) {
    BigFloat m = bf_ceil(max(start, BigFloat::one()));
    if (pred(m)) return m;
    BigFloat lo = m, hi = m;
    const BigFloat two = BigFloat::from_double(2.0);
    int guard = 0;
    do {
        lo = hi;
        hi = hi * two;
        if (++guard > 600000)
            throw std::runtime_error(std::string("search for ") + what + " did not converge");
        if (guard % 5000 == 0)
            std::fprintf(stderr, "  [search %s] %d doublings, at 2^%lld\n", what, guard,
                         static_cast<long long>(hi.exp2));
    } while (!pred(hi));
    // bisect down to the boundary (integer resolution while representable)
    while (true) {
        BigFloat gap = hi - lo;
        if (gap <= BigFloat::one()) break;
        if (hi.exp2 > 60 && gap < hi * BigFloat::from_double(1e-9)) break;
        BigFloat mid = bf_floor(lo + gap * BigFloat::from_double(0.5));
        if (mid <= lo) break;
        (pred(mid) ? hi : lo) = mid;
    }
    return bf_ceil(hi);
}

struct StepContext {
    double p, q, r;
    Regime reg;
    const BaseStep* base;
};

// Conditions the (n+1)-th link must satisfy, certified.
bool cond_head_damping(const StepContext& cx, const StretchChain& chain, int n,
                       const BigFloat& a_next, const BigFloat& b, const BigFloat& delta) {
    // int_0^delta G_{n+1}^p <= n^{-p} int_0^delta g~^p
    XInterval lhs = chain.head_with(a_next, b, cx.p, delta);
    XInterval rhs = cx.base->head(cx.p, delta) *
                    XInterval::point(std::pow(static_cast<double>(n), -cx.p));
    return certified_le(lhs, rhs);
}

bool cond_tail_damping(const StepContext& cx, const StretchChain& chain, int n,
                       const BigFloat& a_next, const BigFloat& b, const BigFloat& delta) {
    // b^{1-r/q} int_{a_{n+1}}^inf G_n^r <= n^{-r} int_delta^inf g~^r
    XInterval lhs = chain.tail(cx.r, a_next) *
                    pow(XInterval::point(b), 1.0 - cx.r / cx.q);
    XInterval rhs = cx.base->tail(cx.r, delta) *
                    XInterval::point(std::pow(static_cast<double>(n), -cx.r));
    return certified_le(lhs, rhs);
}

void compute_checkpoints(const StretchChain& chain, const BaseStep& base,
                         CounterexampleTrace& tr) {
    tr.checkpoints.clear();
    const double p = tr.p, r = tr.r;
    const auto& rows = tr.steps;
    const int N = static_cast<int>(rows.size());
    auto push_cp = [&](int n, const BigFloat& t, const XInterval& vf, const XInterval& vg) {
        Checkpoint cp;
        cp.n = n;
        cp.t = t;
        cp.value_f = vf;
        cp.value_g = vg;
        XInterval ratio = vf / vg;
        cp.ratio_lo = to_certified(ratio).lo;
        cp.ratio_hi = to_certified(ratio).hi;
        tr.checkpoints.push_back(cp);
    };
    switch (tr.regime) {
        case Regime::PposRfin: {
            double inv_alpha = 1.0 / p - 1.0 / r;
            for (int n = 1; n + 1 <= N; ++n) {
                const BigFloat& delta = rows[n].delta;  // delta_{n+1}
                BigFloat t = lpq::pow(delta, inv_alpha);
                XInterval tI = XInterval::point(t);
                XInterval hf = pow(chain.head(p, delta), 1.0 / p) +
                               tI * pow(chain.tail(r, delta), 1.0 / r);
                XInterval hg = pow(base.head(p, delta), 1.0 / p) +
                               tI * pow(base.tail(r, delta), 1.0 / r);
                push_cp(n, t, hf, hg);
            }
            break;
        }
        case Regime::PposRinf: {
            for (int n = 1; n + 1 <= N; ++n) {
                const BigFloat& delta = rows[n].delta;
                BigFloat t = lpq::pow(delta, 1.0 / p);
                XInterval hf = pow(chain.head(p, delta), 1.0 / p);
                XInterval hg = pow(base.head(p, delta), 1.0 / p);
                push_cp(n, t, hf, hg);
            }
            break;
        }
        case Regime::P0Rfin: {
            // K(t; l^0, l^r) = inf_m (m + t E(m)) via a geometric certified scan
            auto k_inf = [&](auto&& tail_at, const BigFloat& t) {
                XInterval tI = XInterval::point(t);
                auto value_at = [&](const BigFloat& m) {
                    XInterval E = pow(tail_at(m), 1.0 / r);
                    return XInterval::point(m) + tI * E;
                };
                XInterval v0 = value_at(BigFloat::zero());
                BigFloat best_hi = v0.hi;
                BigFloat lo_min = v0.lo;
                BigFloat m = BigFloat::one();
                std::vector<std::pair<BigFloat, BigFloat>> segs;  // (seg start, bound)
                BigFloat prev = BigFloat::zero();
                while (m < best_hi) {
                    XInterval vm = value_at(m);
                    if (vm.hi < best_hi) best_hi = vm.hi;
                    if (vm.lo < lo_min) lo_min = vm.lo;
                    // on (prev, m]: value >= prev + t E(m).lo
                    BigFloat bound = (XInterval::point(prev) +
                                      tI * pow(tail_at(m), 1.0 / r))
                                         .lo;
                    segs.push_back({prev, bound});
                    prev = m;
                    m = m * BigFloat::from_double(2.0);
                }
                BigFloat lo = min(lo_min, best_hi);
                for (auto& sgm : segs) lo = min(lo, sgm.second);
                return XInterval(min(lo, best_hi), best_hi);
            };
            for (int n = 1; n + 1 <= N; ++n) {
                const BigFloat& a_next = rows[n].a;
                BigFloat m_star = a_next * BigFloat::from_double(static_cast<double>(n));
                XInterval Eg = pow(base.tail(r, m_star), 1.0 / r);
                BigFloat t = (XInterval::point(m_star) / Eg).mid();
                XInterval kf = k_inf([&](const BigFloat& m) { return chain.tail(r, m); }, t);
                XInterval kg = k_inf([&](const BigFloat& m) { return base.tail(r, m); }, t);
                push_cp(n, t, kf, kg);
            }
            break;
        }
        case Regime::P0Rinf: {
            for (int n = 2; n <= N; ++n) {
                const BigFloat& a_n = rows[n - 1].a;
                BigFloat t = a_n + BigFloat::one();
                XInterval vf = chain.point(t);
                XInterval vg = base.point(t * BigFloat::from_double(static_cast<double>(n)));
                push_cp(n, t, vf, vg);
            }
            break;
        }
    }
}

}  // namespace

GenResult gen_counterexample(const Seq& g, double p, double q, double r, int steps,
                             std::size_t f_horizon) {
    if (!(p >= 0) || !(p < q) || !(q < r)) throw std::invalid_argument("need 0 <= p < q < r <= inf");
    if (std::isinf(q)) throw std::invalid_argument("gen_counterexample: q < inf");
    if (steps < 2) throw std::invalid_argument("gen_counterexample: steps >= 2");
    if (g.is_finite())
        throw std::invalid_argument("gen_counterexample: g must lie outside l^p (infinite support)");
    double sigma = g.tail().sigma;
    if (!(sigma * q > 1.0)) throw std::domain_error("gen_counterexample: g not in l^q");
    if (p > 0 && sigma * p > 1.0)
        throw std::domain_error("gen_counterexample: g in l^p, hypothesis violated");

    Regime reg = classify(p, r);
    std::vector<double> exps{q};
    if (p > 0) exps.push_back(p);
    if (!std::isinf(r)) exps.push_back(r);
    auto base = std::make_shared<BaseStep>(g.materialized(pick_materialization(g, q)), exps);
    StretchChain chain(base, q);

    CounterexampleTrace tr;
    tr.regime = reg;
    tr.p = p;
    tr.q = q;
    tr.r = r;

    StepContext cx{p, q, r, reg, base.get()};
    const BigFloat one = BigFloat::one();
    chain.push(one, one);  // a_1 = b_1 = 1
    BigFloat a_n = one, b_n = one, delta_n = one;

    for (int n = 1; n <= steps; ++n) {
        // gamma_n: least m with tail q-mass of G_n past m at most 1/n
        double inv_n = 1.0 / static_cast<double>(n);
        BigFloat gamma = min_integer_where(
            a_n,
            [&](const BigFloat& m) { return chain.tail(q, m).hi <= BigFloat::from_double(inv_n); },
            "gamma");
        tr.steps.push_back({n, a_n, b_n, gamma, delta_n});
        if (n == steps) break;

        BigFloat a_next = max(gamma, max(delta_n, a_n + one));
        BigFloat delta_next = BigFloat::zero();
        if (p > 0) {
            XInterval target = chain.head(p, a_next) *
                               XInterval::point(2.0 * std::pow(static_cast<double>(n), p));
            BigFloat floor_delta = a_next * BigFloat::from_double(static_cast<double>(n)) + one;
            delta_next = min_integer_where(
                floor_delta,
                [&](const BigFloat& d) { return base->head(p, d).lo >= target.hi; }, "delta");
        } else if (!std::isinf(r)) {
            delta_next = a_next * BigFloat::from_double(static_cast<double>(n)) + one;
        }

        BigFloat b_next = one;
        if (reg == Regime::P0Rinf) {
            XInterval ratio = (chain.point(a_next) *
                               XInterval::point(static_cast<double>(n + 1))) /
                              base->point(a_next * BigFloat::from_double(static_cast<double>(n)) +
                                          BigFloat::from_double(static_cast<double>(n)));
            b_next = bf_floor(lpq::pow(ratio.hi, q)) + one;
        } else {
            if (!std::isinf(r)) {
                XInterval X = chain.tail(r, a_next);
                XInterval Y = base->tail(r, delta_next) *
                              XInterval::point(std::pow(static_cast<double>(n), -r));
                BigFloat need = lpq::pow(X.hi / Y.lo, q / (r - q));
                b_next = max(one, bf_ceil(need));
                if (!cond_tail_damping(cx, chain, n, a_next, b_next, delta_next))
                    b_next = min_integer_where(
                        b_next,
                        [&](const BigFloat& b) {
                            return cond_tail_damping(cx, chain, n, a_next, b, delta_next);
                        },
                        "b (tail damping)");
            }
            if (p > 0) {
                auto ok7 = [&](const BigFloat& b) {
                    return cond_head_damping(cx, chain, n, a_next, b, delta_next);
                };
                if (!ok7(b_next))
                    b_next = min_integer_where(b_next, ok7, "b (head damping)");
            }
            // re-certify the full condition set at the chosen b
            if (!std::isinf(r) && !cond_tail_damping(cx, chain, n, a_next, b_next, delta_next))
                throw std::runtime_error("gen_counterexample: tail damping lost after b search");
            if (p > 0 && !cond_head_damping(cx, chain, n, a_next, b_next, delta_next))
                throw std::runtime_error("gen_counterexample: head damping not certified");
        }

        chain.push(a_next, b_next);
        a_n = a_next;
        b_n = b_next;
        delta_n = delta_next;
    }

    GenResult out;
    out.trace = tr;

    // f (the final chain) stabilizes up to a_{N+1} = max(gamma_N, delta_N, a_N + 1)
    const TraceStep& last = tr.steps.back();
    out.stabilized_to = max(last.gamma, max(last.delta, last.a + one));
    double stab_d = out.stabilized_to.fits_double() ? out.stabilized_to.to_double() : 1e308;
    std::size_t flen = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(f_horizon), stab_d));
    std::vector<double> fv(flen);
    for (std::size_t k = 1; k <= flen; ++k) {
        XInterval v = chain.point(BigFloat::from_double(static_cast<double>(k) - 0.5));
        fv[k - 1] = to_certified(v).mid();
    }
    for (std::size_t i = 1; i < fv.size(); ++i) fv[i] = std::min(fv[i], fv[i - 1]);
    out.f = Seq(std::move(fv));

    XInterval mass_f = chain.head(q, last.a) + chain.tail(q, last.a);
    XInterval mass_g = base->head(q, last.a) + base->tail(q, last.a);
    out.f_norm_q = to_certified(pow(mass_f, 1.0 / q));
    out.g_norm_q = to_certified(pow(mass_g, 1.0 / q));

    compute_checkpoints(chain, *base, out.trace);
    return out;
}

// ---------------------------------------------------------------------------
// Verifier.
// ---------------------------------------------------------------------------

VerifyReport verify_counterexample(const Seq& f, const Seq& g, double p, double q, double r,
                                   const CounterexampleTrace& trace, std::uint64_t tail_horizon) {
    if (trace.steps.empty()) throw std::invalid_argument("verify_counterexample: empty trace");
    VerifyReport rep;
    Regime reg = classify(p, r);
    std::vector<double> exps{q};
    if (p > 0) exps.push_back(p);
    if (!std::isinf(r)) exps.push_back(r);
    auto base = std::make_shared<BaseStep>(g.materialized(pick_materialization(g, q)), exps);
    StretchChain chain(base, q);
    StepContext cx{p, q, r, reg, base.get()};

    rep.steps_certified = Verdict::Pass;
    const auto& rows = trace.steps;
    chain.push(rows[0].a, rows[0].b);
    const BigFloat one = BigFloat::one();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        int n = rows[i - 1].n;  // conditions for choosing step i+1 use index n
        const BigFloat& a_next = rows[i].a;
        const BigFloat& b_next = rows[i].b;
        const BigFloat& delta_next = rows[i].delta;
        // a_{n+1} >= gamma_n: the chain's q-mass past a_{n+1} is at most 1/n
        if (!(chain.tail(q, a_next).hi <= BigFloat::from_double(1.0 / n)))
            rep.steps_certified = Verdict::Fail;
        if (p > 0 || !std::isinf(r)) {
            BigFloat floor_delta = a_next * BigFloat::from_double(static_cast<double>(n));
            if (!(floor_delta < delta_next)) rep.steps_certified = Verdict::Fail;
        }
        if (p > 0) {
            XInterval target = chain.head(p, a_next) *
                               XInterval::point(2.0 * std::pow(static_cast<double>(n), p));
            if (!(base->head(p, delta_next).lo >= target.hi)) rep.steps_certified = Verdict::Fail;
            if (!cond_head_damping(cx, chain, n, a_next, b_next, delta_next))
                rep.steps_certified = Verdict::Fail;
        }
        if (!std::isinf(r)) {
            if (!cond_tail_damping(cx, chain, n, a_next, b_next, delta_next))
                rep.steps_certified = Verdict::Fail;
        }
        if (reg == Regime::P0Rinf) {
            // b^{1/q} g~(n(a+1)) >= (n+1) G_n(a): the closed formula's content
            XInterval scaled = XInterval::point(lpq::pow(b_next, 1.0 / q)) *
                               base->point(a_next * BigFloat::from_double(static_cast<double>(n)) +
                                           BigFloat::from_double(static_cast<double>(n)));
            XInterval rhs = chain.point(a_next) * XInterval::point(static_cast<double>(n + 1));
            if (!(scaled.lo >= rhs.hi)) rep.steps_certified = Verdict::Fail;
        }
        chain.push(a_next, b_next);
    }

    const TraceStep& last = rows.back();
    XInterval mass_f = chain.head(q, last.a) + chain.tail(q, last.a);
    XInterval mass_g = base->head(q, last.a) + base->tail(q, last.a);
    CertifiedValue nf = to_certified(pow(mass_f, 1.0 / q));
    CertifiedValue ng = to_certified(pow(mass_g, 1.0 / q));
    rep.mass_width = std::max(nf.width(), ng.width());
    rep.mass_conserved = certified_eq(nf, ng, rep.mass_width + 1e-12);

    // tail domination via the pull-back: psi(m) <= m
    rep.tail_domination = Verdict::Pass;
    rep.tail_checked_to = tail_horizon;
    for (std::uint64_t m = 1; m <= tail_horizon; ++m) {
        XInterval psi = chain.pullback(BigFloat::from_double(static_cast<double>(m - 1)));
        if (!(psi.hi <= BigFloat::from_double(static_cast<double>(m - 1) * (1.0 + 1e-9) + 1e-12))) {
            rep.tail_domination = Verdict::Fail;
            break;
        }
    }

    // stabilization: the returned prefix matches the chain
    rep.stabilization = Verdict::Pass;
    BigFloat stab = max(last.gamma, max(last.delta, last.a + one));
    std::uint64_t check_len = f.prefix_len();
    if (stab.fits_double())
        check_len = std::min<std::uint64_t>(check_len, static_cast<std::uint64_t>(stab.to_double()));
    for (std::uint64_t k = 1; k <= check_len; ++k) {
        CertifiedValue v =
            to_certified(chain.point(BigFloat::from_double(static_cast<double>(k) - 0.5)));
        double fk = f.at(k);
        if (fk > v.hi + 1e-9 * std::max(1.0, v.hi) || fk < v.lo - 1e-9 * std::max(1.0, v.hi)) {
            rep.stabilization = Verdict::Fail;
            break;
        }
    }

    CounterexampleTrace tr = trace;
    compute_checkpoints(chain, *base, tr);
    rep.checkpoints = tr.checkpoints;
    rep.least_ratio = std::numeric_limits<double>::infinity();
    for (const auto& cp : rep.checkpoints) rep.least_ratio = std::min(rep.least_ratio, cp.ratio_hi);
    return rep;
}

// ---------------------------------------------------------------------------
// Witnesses.
// ---------------------------------------------------------------------------

WitnessResult cm_witness(double p, double q, double C, std::uint64_t seed) {
    if (!(0 <= p && p < q && q < 1.0)) throw std::invalid_argument("cm_witness: 0 <= p < q < 1");
    if (!(C >= 1.0)) throw std::invalid_argument("cm_witness: C >= 1");
    WitnessResult w;
    w.y = Seq::basis(1);
    const double exponent = 1.0 / q - 1.0;

    if (p == 0.0) {
        std::uint64_t N = 1;
        while (!(std::pow(static_cast<double>(N), exponent) > C)) {
            if (++N > 100'000'000ull) throw std::runtime_error("cm_witness: N search overflow");
        }
        w.N = N;
        w.c_hat = 1.0;
        w.bound = std::pow(static_cast<double>(N), exponent);
        std::vector<double> xv(N, std::pow(static_cast<double>(N), -1.0 / q));
        w.x = Seq(std::move(xv));
        // (Q_q y)_n <= (Q_q x)_n for all n
        w.hypothesis = Verdict::Pass;
        for (std::uint64_t n = 1; n <= N + 1; ++n) {
            Verdict v = certified_le(Qq(w.y, n, q), Qq(w.x, n, q), 1e-12);
            w.hypothesis = worst(w.hypothesis, v);
        }
        return w;
    }

    // measured almost-increasing constant of n -> (P_p z)_n + n^{1/alpha}(Q_q z)_n
    CoupleParams couple(p, q);
    Rng rng(seed);
    double c_hat = 1.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t len = 2 + rng.uniform_int(0, 28);
        std::vector<double> v = rng.uniform_vec(len, 0.0, 1.0);
        Seq z = rearrange(v);
        std::size_t m_max = len + 5;
        std::vector<double> hvals(m_max);
        for (std::size_t n = 1; n <= m_max; ++n) {
            double wgt = std::pow(static_cast<double>(n), 1.0 / couple.alpha);
            hvals[n - 1] = Pp(z, n, p).mid() + wgt * Qq(z, n, q).mid();
        }
        double running_max = 0.0;
        for (std::size_t n = 0; n < m_max; ++n) {
            running_max = std::max(running_max, hvals[n]);
            if (hvals[n] > 0) c_hat = std::max(c_hat, running_max / hvals[n]);
        }
    }
    w.c_hat = c_hat;

    std::uint64_t N = 1;
    while (!(std::pow(static_cast<double>(N), exponent) / (2.0 * c_hat) > C)) {
        if (++N > 1'000'000'000ull) throw std::runtime_error("cm_witness: N search overflow");
    }
    w.N = N;
    w.bound = std::pow(static_cast<double>(N), exponent) / (2.0 * c_hat);
    std::vector<double> xv(N, 2.0 * c_hat * std::pow(static_cast<double>(N), -1.0 / q));
    w.x = Seq(std::move(xv));

    w.hypothesis = Verdict::Pass;
    for (std::uint64_t n = 1; n <= N + 5; ++n) {
        double wgt = std::pow(static_cast<double>(n), 1.0 / couple.alpha);
        CertifiedValue lhs = Pp(w.y, n, p) + Qq(w.y, n, q).scaled(wgt);
        CertifiedValue rhs = Pp(w.x, n, p) + Qq(w.x, n, q).scaled(wgt);
        w.hypothesis = worst(w.hypothesis, certified_le(lhs, rhs, 1e-9));
    }
    return w;
}

Verdict cm_witness_verify(const Seq& x, const Seq& y, std::uint64_t N, double q,
                          const OperatorMatrix& S, double bound) {
    if (!(q > 0 && q <= 1.0)) throw std::invalid_argument("cm_witness_verify: q in (0, 1]");
    std::vector<double> xv(std::max<std::size_t>(S.cols(), x.prefix_len()));
    for (std::size_t k = 0; k < xv.size(); ++k) xv[k] = x.at(k + 1);
    std::vector<double> img = S.apply(xv);
    double resid = 0.0;
    std::uint64_t rows = std::max<std::uint64_t>(img.size(), y.prefix_len());
    for (std::uint64_t k = 1; k <= rows; ++k) {
        double got = k <= img.size() ? img[k - 1] : 0.0;
        resid = std::max(resid, std::fabs(got - y.at(k)));
    }
    if (resid > 1e-10)
        throw std::invalid_argument("cm_witness_verify: Sx != y (residual " +
                                    std::to_string(resid) + "), rejected");
    (void)N;
    double norm = norm_lq_exact(S, q).hi;
    return norm >= bound - 1e-9 ? Verdict::Pass : Verdict::Fail;
}

Verdict cm_witness_verify(const Seq& x, const Seq& y, std::uint64_t N, double q,
                          const OperatorMatrix& S) {
    return cm_witness_verify(x, y, N, q, S, std::pow(static_cast<double>(N), 1.0 / q - 1.0));
}

// ---------------------------------------------------------------------------
// Serialization.
// ---------------------------------------------------------------------------

nlohmann::json big_to_json(const BigFloat& v) {
    if (v.fits_double()) return v.to_double();
    return to_string_sci(v);
}

nlohmann::json trace_to_json(const CounterexampleTrace& trace) {
    nlohmann::json j;
    j["regime"] = to_string(trace.regime);
    j["p"] = trace.p;
    j["q"] = trace.q;
    j["r"] = std::isinf(trace.r) ? nlohmann::json("inf") : nlohmann::json(trace.r);
    auto steps = nlohmann::json::array();
    for (const auto& s : trace.steps) {
        steps.push_back({{"n", s.n},
                         {"a", big_to_json(s.a)},
                         {"b", big_to_json(s.b)},
                         {"gamma", big_to_json(s.gamma)},
                         {"delta", big_to_json(s.delta)}});
    }
    j["steps"] = steps;
    auto cps = nlohmann::json::array();
    for (const auto& c : trace.checkpoints)
        cps.push_back({{"t", big_to_json(c.t)}, {"ratio", c.ratio_hi}});
    j["checkpoints"] = cps;
    return j;
}

std::string ratios_csv(const CounterexampleTrace& trace) {
    std::string out = "n,t,K_f,K_g,ratio\n";
    char buf[256];
    for (const auto& c : trace.checkpoints) {
        auto fmt = [](const BigFloat& v) {
            if (v.fits_double()) {
                char b[40];
                std::snprintf(b, sizeof(b), "%.17g", v.to_double());
                return std::string(b);
            }
            return to_string_sci(v);
        };
        std::snprintf(buf, sizeof(buf), "%d,%s,%s,%s,%.17g\n", c.n, fmt(c.t).c_str(),
                      fmt(c.value_f.mid()).c_str(), fmt(c.value_g.mid()).c_str(), c.ratio_hi);
        out += buf;
    }
    return out;
}

}  // namespace lpq
