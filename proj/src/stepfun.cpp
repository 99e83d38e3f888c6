#include "lpq/stepfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpq {

BigFloat bf_floor(const BigFloat& v) {
    if (v.is_zero() || v.exp2 >= 52) return v;
    return BigFloat::from_double(std::floor(v.to_double()));
}

BigFloat bf_ceil(const BigFloat& v) {
    if (v.is_zero() || v.exp2 >= 52) return v;
    return BigFloat::from_double(std::ceil(v.to_double()));
}

// ---------------------------------------------------------------------------
// BaseStep
// ---------------------------------------------------------------------------

BaseStep::BaseStep(Seq s, std::vector<double> exponents) : s_(std::move(s)) {
    const auto& pre = s_.prefix();
    for (double e : exponents) {
        if (!(e > 0) || std::isinf(e))
            throw std::invalid_argument("BaseStep: exponents must be positive and finite");
        if (has_exponent(e)) continue;
        Cache c;
        c.e = e;
        c.cum.assign(pre.size() + 1, 0.0);
        c.suffix.assign(pre.size() + 2, 0.0);
        for (std::size_t k = 1; k <= pre.size(); ++k)
            c.cum[k] = c.cum[k - 1] + std::pow(pre[k - 1], e);
        for (std::size_t k = pre.size(); k >= 1; --k)
            c.suffix[k] = c.suffix[k + 1] + std::pow(pre[k - 1], e);
        if (!s_.tail().is_zero()) {
            c.c_e = std::pow(s_.tail().c, e);
            c.beta = s_.tail().sigma * e;
            c.tail_ok = c.beta > 1.0;
        } else {
            c.tail_ok = true;
        }
        caches_.push_back(std::move(c));
    }
}

std::vector<double> BaseStep::exponents() const {
    std::vector<double> out;
    for (const auto& c : caches_) out.push_back(c.e);
    return out;
}

bool BaseStep::has_exponent(double e) const {
    for (const auto& c : caches_)
        if (c.e == e) return true;
    return false;
}

bool BaseStep::tail_converges(double e) const { return cache_for(e).tail_ok; }

const BaseStep::Cache& BaseStep::cache_for(double e) const {
    for (const auto& c : caches_)
        if (c.e == e) return c;
    throw std::logic_error("BaseStep: exponent not cached");
}

namespace {

// int_a^b of c_e x^(-beta) over 0 < a <= b; b may be infinite (beta > 1 then).
XInterval power_int(double c_e, double beta, const BigFloat& a, const BigFloat& b) {
    if (c_e == 0.0) return XInterval::zero();
    if (b.is_finite() && !(a < b)) return XInterval::zero();
    XInterval ca = pow(XInterval::point(a), 1.0 - beta);
    if (b.is_finite()) {
        if (std::fabs(beta - 1.0) < 1e-14) {
            double l = (b.log2_abs() - a.log2_abs()) * 0.6931471805599453;
            return (XInterval::point(BigFloat::from_double(c_e * l))).widened().clamped_below();
        }
        XInterval cb = pow(XInterval::point(b), 1.0 - beta);
        XInterval diff = beta > 1.0 ? ca - cb : cb - ca;
        return (diff * XInterval::point(std::fabs(c_e / (1.0 - beta)))).clamped_below();
    }
    if (!(beta > 1.0)) throw std::domain_error("power_int: divergent integral");
    return (ca * XInterval::point(c_e / (beta - 1.0))).clamped_below();
}

// Enclosure of int_{t0}^{t1} of the power-model step (cell [x] holds
// c_e * (floor(x)+1)^(-beta)); valid for 0 <= t0 <= t1 finite.
XInterval power_step_increment(double c_e, double beta, const BigFloat& t0, const BigFloat& t1) {
    if (!(t0 < t1)) return XInterval::zero();
    const BigFloat one = BigFloat::one();
    // the step value at x is phi(floor(x)+1), phi decreasing, with
    // floor(x)+1 in [max(x,1), x+1]
    BigFloat lo_b = power_int(c_e, beta, t0 + one, t1 + one).lo;
    BigFloat hi_b;
    if (t0 < one) {
        // cells below x = 1 hold exactly phi(1) = c_e
        BigFloat span = min(t1, one) - t0;
        XInterval first = XInterval::point(span) * XInterval::point(c_e);
        hi_b = first.hi + (one < t1 ? power_int(c_e, beta, one, t1).hi : BigFloat::zero());
        BigFloat alt = first.lo + (one < t1 ? power_int(c_e, beta, one + one, t1 + one).lo
                                            : BigFloat::zero());
        lo_b = max(lo_b, alt);
    } else {
        hi_b = power_int(c_e, beta, t0, t1).hi;
    }
    if (hi_b < lo_b) std::swap(lo_b, hi_b);
    return XInterval(lo_b, hi_b).clamped_below();
}

}  // namespace

XInterval BaseStep::point(const BigFloat& t) const {
    if (t.sign() < 0) throw std::invalid_argument("BaseStep::point: t >= 0");
    const auto& pre = s_.prefix();
    BigFloat len = BigFloat::from_double(static_cast<double>(pre.size()));
    if (t < len) {
        std::size_t k = static_cast<std::size_t>(std::floor(t.to_double()));
        if (k >= pre.size()) k = pre.size() - 1;
        return XInterval::point(pre[k]);
    }
    if (s_.tail().is_zero()) return XInterval::zero();
    // the cell index floor(t)+1 lies in [max(t,1), t+1]
    BigFloat hi = lpq::pow(max(t, BigFloat::one()), -s_.tail().sigma);
    BigFloat lo = lpq::pow(t + BigFloat::one(), -s_.tail().sigma);
    XInterval v(min(lo, hi), max(lo, hi));
    return (v * XInterval::point(s_.tail().c)).widened();
}

// Exact integral over [t0, t1] inside the prefix region (t1 <= len).
XInterval BaseStep::prefix_increment(const Cache& c, double t0, double t1) const {
    const auto& pre = s_.prefix();
    std::size_t k0 = static_cast<std::size_t>(std::floor(t0));
    std::size_t k1 = static_cast<std::size_t>(std::floor(t1));
    if (k0 > pre.size()) k0 = pre.size();
    if (k1 > pre.size()) k1 = pre.size();
    if (k0 == k1) {
        double v = k0 < pre.size() ? std::pow(pre[k0], c.e) : 0.0;
        return XInterval::point((t1 - t0) * v).widened();
    }
    double head_cell = (static_cast<double>(k0) + 1.0 - t0) *
                       (k0 < pre.size() ? std::pow(pre[k0], c.e) : 0.0);
    double tail_cell = (t1 - static_cast<double>(k1)) *
                       (k1 < pre.size() ? std::pow(pre[k1], c.e) : 0.0);
    double mid;
    double slack;
    if (k1 - k0 <= 4096) {
        mid = 0.0;
        for (std::size_t k = k0 + 1; k < k1; ++k) mid += std::pow(pre[k], c.e);
        slack = 4e-16 * mid;
    } else {
        mid = c.cum[k1] - c.cum[k0 + 1];
        slack = 4e-16 * (c.cum[k1] + c.cum[k0 + 1]);  // cancellation allowance
    }
    double v = head_cell + mid + tail_cell;
    return XInterval(BigFloat::from_double(std::max(0.0, v - slack)),
                     BigFloat::from_double(v + slack))
        .widened();
}

XInterval BaseStep::head_increment(double e, const BigFloat& t0, const BigFloat& dt) const {
    const Cache& c = cache_for(e);
    if (t0.sign() < 0 || dt.sign() < 0)
        throw std::invalid_argument("BaseStep::head_increment: t0, dt >= 0");
    if (dt.is_zero()) return XInterval::zero();
    BigFloat t1 = t0 + dt;
    const auto& pre = s_.prefix();
    BigFloat len = BigFloat::from_double(static_cast<double>(pre.size()));
    if (t1 <= len) return prefix_increment(c, t0.to_double(), t1.to_double());
    if (t0 >= len) {
        if (s_.tail().is_zero()) return XInterval::zero();
        return power_step_increment(c.c_e, c.beta, t0, t1);
    }
    XInterval first = prefix_increment(c, t0.to_double(), static_cast<double>(pre.size()));
    if (s_.tail().is_zero()) return first;
    return first + power_step_increment(c.c_e, c.beta, len, t1);
}

XInterval BaseStep::head(double e, const BigFloat& t) const {
    return head_increment(e, BigFloat::zero(), t);
}

XInterval BaseStep::tail(double e, const BigFloat& t) const {
    const Cache& c = cache_for(e);
    if (t.sign() < 0) throw std::invalid_argument("BaseStep::tail: t >= 0");
    if (!c.tail_ok) throw std::domain_error("BaseStep::tail: divergent tail (sigma*e <= 1)");
    const auto& pre = s_.prefix();
    double len = static_cast<double>(pre.size());
    if (t <= BigFloat::from_double(len)) {
        double td = t.to_double();
        std::size_t k = static_cast<std::size_t>(std::floor(td));
        double exact;
        if (k >= pre.size()) {
            exact = 0.0;  // td == len
        } else {
            double frac = td - static_cast<double>(k);
            exact = (1.0 - frac) * std::pow(pre[k], e) + c.suffix[k + 2];
        }
        XInterval out = XInterval::point(std::max(exact, 0.0)).widened();
        if (!s_.tail().is_zero()) {
            BigFloat K = BigFloat::from_double(len);
            XInterval hi_part = power_int(c.c_e, c.beta, max(K, BigFloat::one()), BigFloat::inf());
            if (len == 0.0) hi_part = hi_part + XInterval::point(c.c_e);  // first cell bound
            XInterval lo_part = power_int(c.c_e, c.beta, K + BigFloat::one(), BigFloat::inf());
            out = out + XInterval(lo_part.lo, hi_part.hi);
        }
        return out;
    }
    if (s_.tail().is_zero()) return XInterval::zero();
    XInterval lower = power_int(c.c_e, c.beta, t + BigFloat::one(), BigFloat::inf());
    XInterval upper = power_int(c.c_e, c.beta, max(t, BigFloat::one()), BigFloat::inf());
    return XInterval(lower.lo, upper.hi);
}

// ---------------------------------------------------------------------------
// StretchChain
// ---------------------------------------------------------------------------

StretchChain::StretchChain(std::shared_ptr<const BaseStep> base, double q)
    : base_(std::move(base)), q_(q) {
    if (!(q > 0) || std::isinf(q)) throw std::invalid_argument("StretchChain: q in (0, inf)");
    if (!base_->has_exponent(q))
        throw std::invalid_argument("StretchChain: base must cache the mass exponent q");
    exps_ = base_->exponents();
    for (double e : exps_) tail_ok_.push_back(base_->tail_converges(e));
    head_at_a_.resize(exps_.size());
    tail_at_a_.resize(exps_.size());
}

std::size_t StretchChain::exp_slot(double e) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] == e) return i;
    throw std::logic_error("StretchChain: exponent not registered at construction");
}

void StretchChain::push(const BigFloat& a, const BigFloat& b) {
    if (a < BigFloat::one() || b < BigFloat::one())
        throw std::invalid_argument("StretchChain::push: a, b >= 1");
    if (!links_.empty() && a < links_.back().a)
        throw std::invalid_argument("StretchChain::push: a must be nondecreasing");
    std::size_t k = links_.size();
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        head_at_a_[i].push_back(head_level(k, exps_[i], a));
        tail_at_a_[i].push_back(tail_ok_[i] ? tail_level(k, exps_[i], a) : XInterval::zero());
    }
    links_.push_back({a, b});
}

XInterval StretchChain::head_level(std::size_t k, double e, const BigFloat& t) const {
    if (k == 0) return base_->head(e, t);
    const StretchLink& L = links_[k - 1];
    if (t <= L.a) return head_level(k - 1, e, t);
    const XInterval& at_a = head_at_a_[exp_slot(e)][k - 1];
    XInterval inner = inc_level(k - 1, e, L.a, (t - L.a) / L.b);
    XInterval factor = pow(XInterval::point(L.b), 1.0 - e / q_);
    return (at_a + factor * inner).clamped_below();
}

XInterval StretchChain::inc_level(std::size_t k, double e, const BigFloat& t0,
                                  const BigFloat& dt) const {
    if (dt.sign() <= 0) return XInterval::zero();
    if (k == 0) return base_->head_increment(e, t0, dt);
    const StretchLink& L = links_[k - 1];
    BigFloat t1 = t0 + dt;
    if (t1 <= L.a) return inc_level(k - 1, e, t0, dt);
    XInterval factor = pow(XInterval::point(L.b), 1.0 - e / q_);
    if (t0 >= L.a) {
        BigFloat pulled = L.a + (t0 - L.a) / L.b;
        return (factor * inc_level(k - 1, e, pulled, dt / L.b)).clamped_below();
    }
    XInterval below = inc_level(k - 1, e, t0, L.a - t0);
    XInterval above = factor * inc_level(k - 1, e, L.a, (t1 - L.a) / L.b);
    return (below + above).clamped_below();
}

XInterval StretchChain::tail_level(std::size_t k, double e, const BigFloat& t) const {
    if (!tail_ok_[exp_slot(e)])
        throw std::domain_error("StretchChain::tail: divergent tail exponent");
    if (k == 0) return base_->tail(e, t);
    const StretchLink& L = links_[k - 1];
    XInterval factor = pow(XInterval::point(L.b), 1.0 - e / q_);
    if (t >= L.a) {
        BigFloat pulled = L.a + (t - L.a) / L.b;
        return (factor * tail_level(k - 1, e, pulled)).clamped_below();
    }
    XInterval between = inc_level(k - 1, e, t, L.a - t);
    const XInterval& tail_a = tail_at_a_[exp_slot(e)][k - 1];
    return (between + factor * tail_a).clamped_below();
}

XInterval StretchChain::head(double e, const BigFloat& t) const {
    return head_level(links_.size(), e, t);
}

XInterval StretchChain::head_increment(double e, const BigFloat& t0, const BigFloat& dt) const {
    return inc_level(links_.size(), e, t0, dt);
}

XInterval StretchChain::tail(double e, const BigFloat& t) const {
    return tail_level(links_.size(), e, t);
}

XInterval StretchChain::point(const BigFloat& t) const {
    BigFloat x = t;
    XInterval scale = XInterval::point(1.0);
    for (std::size_t k = links_.size(); k >= 1; --k) {
        const StretchLink& L = links_[k - 1];
        if (x >= L.a) {
            x = L.a + (x - L.a) / L.b;
            scale = scale * pow(XInterval::point(L.b), -1.0 / q_);
        }
        if (k == 1) break;
    }
    return scale * base_->point(x);
}

XInterval StretchChain::pullback(const BigFloat& t) const {
    XInterval x = XInterval::point(t);
    for (std::size_t k = links_.size(); k >= 1; --k) {
        const StretchLink& L = links_[k - 1];
        XInterval a = XInterval::point(L.a);
        if (x.lo >= L.a) {
            x = a + (x - a) / XInterval::point(L.b);
        } else if (L.a < x.hi) {
            XInterval mapped = a + (x - a) / XInterval::point(L.b);
            x = XInterval(min(x.lo, mapped.lo), max(a.hi, mapped.hi));
        }
        if (k == 1) break;
    }
    return x;
}

XInterval StretchChain::head_with(const BigFloat& a, const BigFloat& b, double e,
                                  const BigFloat& t) const {
    if (t <= a) return head_level(links_.size(), e, t);
    XInterval at_a = head_level(links_.size(), e, a);
    XInterval inner = inc_level(links_.size(), e, a, (t - a) / b);
    return (at_a + pow(XInterval::point(b), 1.0 - e / q_) * inner).clamped_below();
}

XInterval StretchChain::tail_with(const BigFloat& a, const BigFloat& b, double e,
                                  const BigFloat& t) const {
    XInterval factor = pow(XInterval::point(b), 1.0 - e / q_);
    if (t >= a) {
        BigFloat pulled = a + (t - a) / b;
        return (factor * tail_level(links_.size(), e, pulled)).clamped_below();
    }
    XInterval between = inc_level(links_.size(), e, t, a - t);
    XInterval tail_a = tail_level(links_.size(), e, a);
    return (between + factor * tail_a).clamped_below();
}

}  // namespace lpq
