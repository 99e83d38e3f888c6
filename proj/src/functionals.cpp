#include "lpq/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpq {

const char* to_string(KMethod m) {
    switch (m) {
        case KMethod::ExactOracle: return "exact-oracle";
        case KMethod::FromE: return "from-E";
        default: return "holmstedt";
    }
}

void KCurve::validate(double tol) const {
    if (grid.size() != values.size()) throw std::logic_error("KCurve: grid/value size mismatch");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i] < grid[i + 1])) throw std::logic_error("KCurve: grid not increasing");
        double scale = std::max(1.0, std::fabs(values[i].mid()));
        if (values[i + 1].mid() < values[i].mid() - tol * scale)
            throw std::logic_error("KCurve: values not nondecreasing");
        if (values[i + 1].mid() / grid[i + 1] > values[i].mid() / grid[i] + tol * scale)
            throw std::logic_error("KCurve: K(t)/t not nonincreasing");
    }
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
        double s1 = (values[i + 1].mid() - values[i].mid()) / (grid[i + 1] - grid[i]);
        double s2 = (values[i + 2].mid() - values[i + 1].mid()) / (grid[i + 2] - grid[i + 1]);
        double scale = std::max(1.0, std::fabs(s1));
        if (s2 > s1 + tol * scale) throw std::logic_error("KCurve: discrete concavity violated");
    }
}

double PiecewiseConvex::eval(double t) const {
    if (breakpoints.empty()) throw std::logic_error("PiecewiseConvex: empty");
    if (breakpoints.size() == 1) return breakpoints.front().second;
    if (t < breakpoints.front().first - 1e-12 || t > breakpoints.back().first + 1e-12)
        throw std::out_of_range("PiecewiseConvex: t outside breakpoint range");
    t = std::clamp(t, breakpoints.front().first, breakpoints.back().first);
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t,
                               [](const auto& bp, double v) { return bp.first < v; });
    if (it == breakpoints.begin()) return it->second;
    if (it == breakpoints.end()) return breakpoints.back().second;
    auto [t1, v1] = *std::prev(it);
    auto [t2, v2] = *it;
    double w = (t - t1) / (t2 - t1);
    return v1 + w * (v2 - v1);
}

// ---------------------------------------------------------------------------
// E-functional and K from E.
// ---------------------------------------------------------------------------

namespace {

// Cached tail q-sums: suffix array over the prefix + tail bracket.
class ETable {
public:
    ETable(const Seq& s, double q) : s_(s), q_(q), q_inf_(std::isinf(q)) {
        if (!(q > 0)) throw std::invalid_argument("ETable: q > 0 required");
        if (!q_inf_) {
            const auto& pre = s.prefix();
            suffix_.assign(pre.size() + 2, 0.0);
            for (std::size_t k = pre.size(); k >= 1; --k)
                suffix_[k] = suffix_[k + 1] + std::pow(pre[k - 1], q_);
            if (!s.tail().is_zero()) {
                double beta = s.tail().sigma * q_;
                if (beta <= 1.0) throw std::domain_error("ETable: divergent tail");
                c_e_ = std::pow(s.tail().c, q_);
                beta_ = beta;
            }
        }
    }

    // Sum_{k>=m} s_k^q as an enclosure.
    CertifiedValue tail_from(std::uint64_t m) const {
        const auto& pre = s_.prefix();
        double exact = m <= pre.size() ? suffix_[m] : 0.0;
        if (s_.tail().is_zero()) return CertifiedValue::exact(exact);
        double K = static_cast<double>(std::max<std::uint64_t>(m, pre.size() + 1));
        double integral = c_e_ * std::pow(K, 1.0 - beta_) / (beta_ - 1.0);
        return CertifiedValue(exact + integral, exact + integral + c_e_ * std::pow(K, -beta_));
    }

    // E(m) at integer threshold m.
    CertifiedValue E(std::uint64_t m) const {
        if (q_inf_) return CertifiedValue::exact(s_.at(m + 1));
        return pow_cert(tail_from(m + 1), 1.0 / q_);
    }

private:
    const Seq& s_;
    double q_;
    bool q_inf_;
    std::vector<double> suffix_;
    double c_e_ = 0.0, beta_ = 0.0;
};

}  // namespace

CertifiedValue e_functional(const Seq& s, double t, double q) {
    if (t < 0) throw std::invalid_argument("e_functional: t >= 0");
    std::uint64_t m = static_cast<std::uint64_t>(std::floor(t));
    if (std::isinf(q)) return CertifiedValue::exact(s.at(m + 1));
    ETable et(s, q);
    return pow_cert(et.tail_from(m + 1), 1.0 / q);
}

CertifiedValue k_from_e(const Seq& s, double t, double q) {
    if (!(t >= 0)) throw std::invalid_argument("k_from_e: t >= 0");
    if (t == 0.0) return CertifiedValue::exact(0.0);
    ETable et(s, q);

    double best_hi = std::numeric_limits<double>::infinity();
    double lo_min = std::numeric_limits<double>::infinity();
    constexpr std::uint64_t kEnumCap = 4096;
    std::uint64_t m = 0;
    bool exhausted = false;
    for (;; ++m) {
        CertifiedValue E = et.E(m);
        best_hi = std::min(best_hi, static_cast<double>(m) + t * E.hi);
        lo_min = std::min(lo_min, static_cast<double>(m) + t * E.lo);
        if (static_cast<double>(m) + 1.0 > best_hi) {
            exhausted = true;  // every larger m costs at least m+1 > best_hi
            break;
        }
        if (m >= kEnumCap) break;
    }
    if (exhausted) return CertifiedValue(std::min(lo_min, best_hi), best_hi);

    // Branch and bound over segments (a, b]: value there is >= a+1 + t*E(b).
    struct Segment {
        std::uint64_t a, b;
        double bound;
    };
    auto seg_bound = [&](std::uint64_t a, std::uint64_t b) {
        return static_cast<double>(a) + 1.0 + t * et.E(b).lo;
    };
    std::vector<Segment> segs;
    std::uint64_t a = kEnumCap;
    while (static_cast<double>(a) < best_hi) {
        std::uint64_t b = std::max(a + 1, static_cast<std::uint64_t>(
                                              std::min(2.0 * static_cast<double>(a), best_hi + 1.0)));
        CertifiedValue Eb = et.E(b);
        best_hi = std::min(best_hi, static_cast<double>(b) + t * Eb.hi);
        segs.push_back({a, b, static_cast<double>(a) + 1.0 + t * Eb.lo});
        a = b;
    }
    for (int iter = 0; iter < 400; ++iter) {
        auto it = std::min_element(segs.begin(), segs.end(),
                                   [](const Segment& u, const Segment& v) { return u.bound < v.bound; });
        if (it == segs.end() || it->bound >= best_hi * (1.0 - 1e-12) - 1e-300) break;
        Segment cur = *it;
        segs.erase(it);
        if (cur.b - cur.a <= 2) {
            for (std::uint64_t mm = cur.a + 1; mm <= cur.b; ++mm) {
                CertifiedValue E = et.E(mm);
                best_hi = std::min(best_hi, static_cast<double>(mm) + t * E.hi);
                lo_min = std::min(lo_min, static_cast<double>(mm) + t * E.lo);
            }
            continue;
        }
        std::uint64_t mid = cur.a + (cur.b - cur.a) / 2;
        CertifiedValue Em = et.E(mid);
        best_hi = std::min(best_hi, static_cast<double>(mid) + t * Em.hi);
        segs.push_back({cur.a, mid, seg_bound(cur.a, mid)});
        segs.push_back({mid, cur.b, seg_bound(mid, cur.b)});
    }
    double lo = std::min(lo_min, best_hi);
    for (const auto& sgm : segs) lo = std::min(lo, sgm.bound);
    return CertifiedValue(std::min(lo, best_hi), best_hi);
}

// ---------------------------------------------------------------------------
// Exact K oracle (finite sequences, p > 0).
// ---------------------------------------------------------------------------

namespace {

struct OracleProblem {
    std::vector<double> x;
    double t, p, q;

    double value(const std::vector<double>& u) const {
        double sp = 0, sq = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            sp += std::pow(u[k], p);
            sq += std::pow(x[k] - u[k], q);
        }
        return std::pow(sp, 1.0 / p) + t * std::pow(sq, 1.0 / q);
    }

    // Minimize over u_k in [0, x_k] with the complementary sums fixed.
    double line_min(double sp_rest, double sq_rest, double xk, double& uk) const {
        auto f = [&](double u) {
            return std::pow(sp_rest + std::pow(u, p), 1.0 / p) +
                   t * std::pow(sq_rest + std::pow(xk - u, q), 1.0 / q);
        };
        if (xk == 0.0) {
            uk = 0.0;
            return f(0.0);
        }
        const int kGrid = 13;
        double best_u = 0.0, best_v = f(0.0);
        for (int i = 1; i <= kGrid; ++i) {
            double u = xk * i / kGrid;
            double v = f(u);
            if (v < best_v) {
                best_v = v;
                best_u = u;
            }
        }
        double lo = std::max(0.0, best_u - xk / kGrid);
        double hi = std::min(xk, best_u + xk / kGrid);
        const double gr = 0.6180339887498949;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = f(c), fd = f(d);
        for (int i = 0; i < 36 && hi - lo > 1e-13 * xk; ++i) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = f(d);
            }
        }
        double u = 0.5 * (lo + hi), v = f(u);
        if (v < best_v) {
            best_v = v;
            best_u = u;
        }
        uk = best_u;
        return best_v;
    }
};

// q = inf: K(t) = inf_theta ( (Sum (x_k - theta)_+^p)^{1/p} + t*theta ),
// smooth between the kinks at theta = x_k.
double oracle_sup_case(const std::vector<double>& x, double t, double p,
                       std::vector<double>* minimizer) {
    auto head = [&](double theta) {
        double s = 0;
        for (double v : x)
            if (v > theta) s += std::pow(v - theta, p);
        return s == 0 ? 0.0 : std::pow(s, 1.0 / p);
    };
    auto f = [&](double theta) { return head(theta) + t * theta; };
    std::vector<double> knots = x;
    knots.push_back(0.0);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    double best_th = 0.0, best_v = f(0.0);
    auto consider = [&](double th) {
        double v = f(th);
        if (v < best_v) {
            best_v = v;
            best_th = th;
        }
    };
    for (std::size_t i = 0; i < knots.size(); ++i) {
        consider(knots[i]);
        if (i + 1 == knots.size()) break;
        double lo = knots[i], hi = knots[i + 1];
        const double gr = 0.6180339887498949;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = f(c), fd = f(d);
        for (int it = 0; it < 48 && hi - lo > 1e-14 * knots.back(); ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = f(d);
            }
        }
        consider(0.5 * (lo + hi));
    }
    if (minimizer) {
        minimizer->assign(x.size(), 0.0);
        for (std::size_t k = 0; k < x.size(); ++k) (*minimizer)[k] = std::max(x[k] - best_th, 0.0);
    }
    return best_v;
}

}  // namespace

OracleResult k_exact_oracle(const Seq& x_seq, double t, const CoupleParams& couple,
                            const OracleOptions& opts) {
    if (!(couple.p > 0)) throw std::invalid_argument("k_exact_oracle: p > 0 (use k_from_e for p = 0)");
    if (!x_seq.is_finite()) throw std::invalid_argument("k_exact_oracle: finite sequences only");
    if (!(t > 0)) throw std::invalid_argument("k_exact_oracle: t > 0");
    std::vector<double> x(x_seq.prefix().begin(),
                          x_seq.prefix().begin() + x_seq.support_size());
    OracleResult res;
    if (x.empty()) {
        res.value = 0.0;
        return res;
    }
    const double p = couple.p, q = couple.q;
    if (couple.q_is_inf()) {
        res.value = oracle_sup_case(x, t, p, &res.minimizer);
        return res;
    }

    OracleProblem prob{x, t, p, q};
    const std::size_t n = x.size();

    // Start points: corners, proportional splits, prefix splits, the
    // fractional Holmstedt split (guarantees F(start) <= H(t)), a threshold cut.
    std::vector<std::vector<double>> starts;
    starts.emplace_back(n, 0.0);
    starts.push_back(x);
    for (int i = 1; i <= 7 && static_cast<int>(starts.size()) < opts.starts; ++i) {
        std::vector<double> u(n);
        for (std::size_t k = 0; k < n; ++k) u[k] = x[k] * i / 8.0;
        starts.push_back(std::move(u));
    }
    double tau = std::pow(t, couple.alpha);
    {
        std::vector<double> u(n, 0.0);
        std::size_t j = static_cast<std::size_t>(std::min<double>(std::floor(tau), n));
        for (std::size_t k = 0; k < j; ++k) u[k] = x[k];
        if (j < n) u[j] = x[j] * std::pow(std::min(1.0, tau - static_cast<double>(j)), 1.0 / p);
        starts.push_back(std::move(u));
    }
    for (std::size_t j = 1; j < n && static_cast<int>(starts.size()) < opts.starts; ++j) {
        std::vector<double> u(n, 0.0);
        for (std::size_t k = 0; k < j; ++k) u[k] = x[k];
        starts.push_back(std::move(u));
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_u;
    for (auto& u0 : starts) {
        std::vector<double> u = u0;
        double sp = 0, sq = 0;
        for (std::size_t k = 0; k < n; ++k) {
            sp += std::pow(u[k], p);
            sq += std::pow(x[k] - u[k], q);
        }
        double val = std::pow(sp, 1.0 / p) + t * std::pow(sq, 1.0 / q);
        for (int sweep = 0; sweep < opts.sweeps; ++sweep) {
            double prev = val;
            for (std::size_t k = 0; k < n; ++k) {
                double sp_rest = std::max(0.0, sp - std::pow(u[k], p));
                double sq_rest = std::max(0.0, sq - std::pow(x[k] - u[k], q));
                double uk;
                val = prob.line_min(sp_rest, sq_rest, x[k], uk);
                u[k] = uk;
                sp = sp_rest + std::pow(uk, p);
                sq = sq_rest + std::pow(x[k] - uk, q);
            }
            if (prev - val <= opts.rel_tol * std::max(1.0, std::fabs(val))) break;
        }
        val = prob.value(u);  // re-evaluate without accumulation drift
        if (val < best) {
            best = val;
            best_u = u;
        }
    }
    res.value = best;
    res.minimizer = best_u;

    if (opts.with_grid_gap && n <= 4) {
        const int g = static_cast<int>(std::round(1.0 / opts.gap_step));
        std::vector<int> idx(n, 0);
        double grid_min = std::numeric_limits<double>::infinity();
        std::vector<double> u(n);
        for (;;) {
            for (std::size_t k = 0; k < n; ++k) u[k] = x[k] * idx[k] / g;
            grid_min = std::min(grid_min, prob.value(u));
            std::size_t k = 0;
            while (k < n && ++idx[k] > g) idx[k++] = 0;
            if (k == n) break;
        }
        double dx = *std::max_element(x.begin(), x.end()) * opts.gap_step;
        double modulus = std::pow(static_cast<double>(n), 1.0 / std::min(1.0, p)) * dx +
                         t * std::pow(static_cast<double>(n), 1.0 / std::min(1.0, q)) * dx;
        res.grid_gap = std::max(0.0, best - grid_min) + modulus;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Holmstedt estimates.
// ---------------------------------------------------------------------------

namespace {

// int_0^tau of the step extension raised to e.
CertifiedValue head_integral(const Seq& s, double tau, double e) {
    if (tau < 0) throw std::invalid_argument("head_integral: tau >= 0");
    if (tau > 0x1p62) throw std::out_of_range("head_integral: tau too large");
    std::uint64_t j = static_cast<std::uint64_t>(std::floor(tau));
    double frac = tau - static_cast<double>(j);
    CertifiedValue out = j >= 1 ? head_sum(s, j, e) : CertifiedValue::exact(0.0);
    if (frac > 0) out = out + CertifiedValue::exact(frac * std::pow(s.at(j + 1), e));
    return out;
}

// int_tau^inf of the step extension raised to e.
CertifiedValue tail_integral(const Seq& s, double tau, double e) {
    if (tau < 0) throw std::invalid_argument("tail_integral: tau >= 0");
    if (tau > 0x1p62) throw std::out_of_range("tail_integral: tau too large");
    std::uint64_t j = static_cast<std::uint64_t>(std::floor(tau));
    double frac = tau - static_cast<double>(j);
    CertifiedValue out = tail_sum(s, j + 2, e);
    out = out + CertifiedValue::exact((1.0 - frac) * std::pow(s.at(j + 1), e));
    return out;
}

}  // namespace

CertifiedValue holmstedt(const Seq& x, double t, const CoupleParams& couple) {
    if (!(couple.p > 0)) throw std::invalid_argument("holmstedt: p > 0 required");
    if (!(t > 0)) throw std::invalid_argument("holmstedt: t > 0");
    const double p = couple.p;
    if (couple.q_is_inf()) {
        double tau = std::pow(t, p);
        return pow_cert(head_integral(x, tau, p), 1.0 / p);
    }
    double tau = std::pow(t, couple.alpha);
    CertifiedValue head = pow_cert(head_integral(x, tau, p), 1.0 / p);
    CertifiedValue tail = pow_cert(tail_integral(x, tau, couple.q), 1.0 / couple.q);
    return head + tail.scaled(t);
}

KCurve holmstedt_grid(const Seq& x, const CoupleParams& couple, std::size_t N) {
    if (!(couple.p > 0)) throw std::invalid_argument("holmstedt_grid: p > 0 required");
    KCurve curve;
    curve.method = KMethod::Holmstedt;
    for (std::size_t n = 1; n <= N; ++n) {
        if (couple.q_is_inf()) {
            curve.grid.push_back(std::pow(static_cast<double>(n), 1.0 / couple.p));
            curve.values.push_back(Pp(x, n, couple.p));
        } else {
            double tn = std::pow(static_cast<double>(n), 1.0 / couple.alpha);
            curve.grid.push_back(tn);
            curve.values.push_back(Pp(x, n, couple.p) + Qq(x, n, couple.q).scaled(tn));
        }
    }
    return curve;
}

PiecewiseConvex convex_minorant(std::span<const std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("convex_minorant: at least one point");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (!(points[i].first < points[i + 1].first))
            throw std::invalid_argument("convex_minorant: t must be strictly increasing");
    PiecewiseConvex hull;
    auto& bp = hull.breakpoints;
    for (const auto& pt : points) {
        while (bp.size() >= 2) {
            auto [t1, v1] = bp[bp.size() - 2];
            auto [t2, v2] = bp[bp.size() - 1];
            // keep only strictly convex turns
            if ((v2 - v1) * (pt.first - t2) >= (pt.second - v2) * (t2 - t1))
                bp.pop_back();
            else
                break;
        }
        bp.push_back(pt);
    }
    return hull;
}

// ---------------------------------------------------------------------------
// E <-> K implications and K-majorization.
// ---------------------------------------------------------------------------

namespace {

std::uint64_t effective_horizon(const Seq& x, const Seq& y, std::uint64_t horizon) {
    std::uint64_t h = horizon;
    if (x.is_finite()) h = std::max<std::uint64_t>(h, x.support_size());
    if (y.is_finite()) h = std::max<std::uint64_t>(h, y.support_size());
    return h;
}

}  // namespace

ImplReport check_impl1(const Seq& x, const Seq& y, double q, std::span<const double> grid,
                       std::uint64_t horizon) {
    ImplReport rep;
    const bool qinf = std::isinf(q);
    std::uint64_t h = effective_horizon(x, y, horizon);

    // Hypothesis: E(m, y) <= E(m, x) at every integer threshold (E is constant
    // between integers for these couples, so this is the full hypothesis).
    Verdict hyp = Verdict::Pass;
    for (std::uint64_t m = 0; m <= h && hyp == Verdict::Pass; ++m) {
        Verdict v = qinf ? certified_le(CertifiedValue::exact(y.at(m + 1)),
                                        CertifiedValue::exact(x.at(m + 1)))
                         : certified_le(tail_sum(y, m + 1, q), tail_sum(x, m + 1, q));
        hyp = worst(hyp, v);
    }
    if (hyp == Verdict::Pass && !(y.is_finite() && x.is_finite()))
        hyp = worst(hyp, tail_pointwise_dominated(x, y, h));
    rep.hypothesis_certified = (hyp == Verdict::Pass);
    if (!rep.hypothesis_certified) {
        rep.verdict = Verdict::Undecided;
        rep.detail = "hypothesis not certified (refused)";
        return rep;
    }

    rep.verdict = Verdict::Pass;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        CertifiedValue ky = k_from_e(y, t, q);
        CertifiedValue kx = k_from_e(x, t, q);
        rep.verdict = worst(rep.verdict, certified_le(ky, kx, 1e-9));
        rep.worst_margin = std::min(rep.worst_margin, kx.lo - ky.hi);
    }
    return rep;
}

ImplReport check_impl2(const Seq& x, const Seq& y, double C, double q,
                       std::span<const double> grid, std::uint64_t horizon) {
    if (!(C >= 1.0)) throw std::invalid_argument("check_impl2: C >= 1");
    ImplReport rep;
    const bool qinf = std::isinf(q);

    Verdict hyp = Verdict::Pass;
    for (double t : grid) {
        CertifiedValue ky = k_from_e(y, t, q);
        CertifiedValue kx = k_from_e(x, t, q).scaled(C);
        hyp = worst(hyp, certified_le(ky, kx, 1e-9));
    }
    rep.hypothesis_certified = (hyp == Verdict::Pass);
    if (!rep.hypothesis_certified) {
        rep.verdict = Verdict::Undecided;
        rep.detail = "hypothesis not certified (refused)";
        return rep;
    }

    std::uint64_t h = effective_horizon(x, y, horizon);
    rep.verdict = Verdict::Pass;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::uint64_t m = 0; m <= h; ++m) {
        double shifted = static_cast<double>(m) / (2.0 * C);
        std::uint64_t ms = static_cast<std::uint64_t>(std::floor(shifted));
        CertifiedValue lhs, rhs;
        if (qinf) {
            lhs = CertifiedValue::exact(y.at(m + 1));
            rhs = CertifiedValue::exact(2.0 * C * x.at(ms + 1));
        } else {
            lhs = tail_sum(y, m + 1, q);
            rhs = tail_sum(x, ms + 1, q).scaled(std::pow(2.0 * C, q));
        }
        rep.verdict = worst(rep.verdict, certified_le(lhs, rhs, 1e-9));
        rep.worst_margin = std::min(rep.worst_margin, rhs.lo - lhs.hi);
    }
    return rep;
}

CertifiedValue k_certified(const Seq& s, double t, const CoupleParams& couple) {
    if (couple.p == 0.0) return k_from_e(s, t, couple.q);
    return holmstedt(s, t, couple);
}

CertifiedValue k_majorization_constant(const Seq& x, const Seq& y, const CoupleParams& couple,
                                       std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("k_majorization_constant: empty grid");
    bool x_zero = x.is_finite() && x.support_size() == 0;
    if (x_zero) throw std::invalid_argument("k_majorization_constant: x must be nonzero");

    double sup_lo = 0.0, sup_hi = 0.0, mesh = 1.0;
    CertifiedValue k_x_first, k_x_last;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CertifiedValue ky = k_certified(y, grid[i], couple);
        CertifiedValue kx = k_certified(x, grid[i], couple);
        if (!(kx.lo > 0)) throw std::domain_error("k_majorization_constant: K(t, x) not bounded away from 0");
        sup_lo = std::max(sup_lo, ky.lo / kx.hi);
        sup_hi = std::max(sup_hi, ky.hi / kx.lo);
        if (i > 0) mesh = std::max(mesh, grid[i] / grid[i - 1]);
        if (i == 0) k_x_first = kx;
        if (i + 1 == grid.size()) k_x_last = kx;
    }
    // Inside the span: K nondecreasing and K(t)/t nonincreasing bound the
    // ratio between grid points by the endpoint ratio times the mesh factor.
    double hi = sup_hi * mesh;

    // Below the span: K(t,y) <= t*||y||_q and K(t,x) >= t*K(t0,x)/t0.
    double norm_q_y = couple.q_is_inf() ? y.at(1) : pow_cert(tail_sum(y, 1, couple.q), 1.0 / couple.q).hi;
    hi = std::max(hi, grid.front() * norm_q_y / k_x_first.lo);

    // Above the span: K(t,y) <= ||y||_{X0} when that norm is finite.
    double cap = std::numeric_limits<double>::infinity();
    if (couple.p == 0.0) {
        auto n0 = l0_norm(y);
        if (n0) cap = static_cast<double>(*n0);
    } else if (y.is_finite() || y.tail().sigma * couple.p > 1.0) {
        cap = pow_cert(tail_sum(y, 1, couple.p), 1.0 / couple.p).hi;
    }
    hi = std::isinf(cap) ? std::numeric_limits<double>::infinity()
                         : std::max(hi, cap / k_x_last.lo);
    return CertifiedValue(sup_lo, std::max(sup_lo, hi));
}

std::vector<double> dyadic_grid(int k) {
    std::vector<double> g;
    for (int i = -k; i <= k; ++i) g.push_back(std::ldexp(1.0, i));
    return g;
}

std::vector<double> default_grid(const CoupleParams& couple, int k, std::size_t breakpoints) {
    std::vector<double> g = dyadic_grid(k);
    if (couple.p > 0) {
        double inv_alpha = couple.q_is_inf() ? 1.0 / couple.p : 1.0 / couple.alpha;
        for (std::size_t n = 1; n <= breakpoints; ++n)
            g.push_back(std::pow(static_cast<double>(n), inv_alpha));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

}  // namespace lpq
