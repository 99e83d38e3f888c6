#pragma once

// Step functions on [0, inf) and keep-head/stretch-tail transforms.
//
// A BaseStep is the unit-step extension of a Seq with cached power sums.
// A StretchChain applies links W_{a,b}: h(t) for t < a, b^{-1/q} h(a+(t-a)/b)
// for t >= a (integers a, b >= 1, a nondecreasing along the chain). Point
// values and the integrals int_0^t G^e, int_t^inf G^e are evaluated by exact
// pull-back through the links:
//   int_0^t (W h)^e = int_0^a h^e + b^{1-e/q} int_a^{a+(t-a)/b} h^e
//   int_t^inf (W h)^e = b^{1-e/q} int_{a+(t-a)/b}^inf h^e          (t >= a)
// so the q-mass past any s <= a is preserved exactly. Short-range integrals
// are evaluated in increment form (never as differences of large heads); the
// stretch factors b^{1-e/q} the generator produces are enormous and would
// otherwise amplify cancellation noise. Everything runs in extended-range
// interval arithmetic.
//
// The exponent set is fixed at construction (per-level caches are built as
// links are pushed); instances are immutable between pushes and safe for
// concurrent reads.

#include <memory>
#include <vector>

#include "lpq/seqcore.hpp"
#include "lpq/xfloat.hpp"

namespace lpq {

class BaseStep {
public:
    BaseStep(Seq s, std::vector<double> exponents);

    const Seq& seq() const { return s_; }
    std::vector<double> exponents() const;
    bool has_exponent(double e) const;
    bool tail_converges(double e) const;

    // Value of the step extension at t >= 0 (cell [k-1, k) holds s_k).
    XInterval point(const BigFloat& t) const;
    // int_0^t of the step extension to the power e.
    XInterval head(double e, const BigFloat& t) const;
    // int_{t0}^{t0+dt}.
    XInterval head_increment(double e, const BigFloat& t0, const BigFloat& dt) const;
    // int_t^inf; requires a zero tail or sigma*e > 1.
    XInterval tail(double e, const BigFloat& t) const;

private:
    struct Cache {
        double e = 0.0;
        std::vector<double> cum;     // cum[k] = sum_{i<=k} pre_i^e
        std::vector<double> suffix;  // suffix[k] = sum_{i>=k} pre_i^e
        double c_e = 0.0, beta = 0.0;
        bool tail_ok = false;
    };
    const Cache& cache_for(double e) const;
    XInterval prefix_increment(const Cache& c, double t0, double t1) const;

    Seq s_;
    std::vector<Cache> caches_;
};

struct StretchLink {
    BigFloat a, b;
};

class StretchChain {
public:
    StretchChain(std::shared_ptr<const BaseStep> base, double q);

    const BaseStep& base() const { return *base_; }
    double q() const { return q_; }
    std::size_t depth() const { return links_.size(); }
    const std::vector<StretchLink>& links() const { return links_; }

    void push(const BigFloat& a, const BigFloat& b);

    XInterval point(const BigFloat& t) const;
    XInterval head(double e, const BigFloat& t) const;
    XInterval head_increment(double e, const BigFloat& t0, const BigFloat& dt) const;
    XInterval tail(double e, const BigFloat& t) const;

    // psi(t): the pull-back of t through every link; psi(t) <= t and
    // int_t^inf G^q = int_{psi(t)}^inf base^q exactly.
    XInterval pullback(const BigFloat& t) const;

    // head/tail of the chain extended by one more link (a, b), without
    // mutating the chain (used by the b-search).
    XInterval head_with(const BigFloat& a, const BigFloat& b, double e, const BigFloat& t) const;
    XInterval tail_with(const BigFloat& a, const BigFloat& b, double e, const BigFloat& t) const;

private:
    XInterval head_level(std::size_t k, double e, const BigFloat& t) const;
    XInterval inc_level(std::size_t k, double e, const BigFloat& t0, const BigFloat& dt) const;
    XInterval tail_level(std::size_t k, double e, const BigFloat& t) const;
    std::size_t exp_slot(double e) const;

    std::shared_ptr<const BaseStep> base_;
    double q_;
    std::vector<double> exps_;
    std::vector<bool> tail_ok_;
    std::vector<StretchLink> links_;
    // per exponent slot, per level k: head/tail of G_k at a_{k+1}
    std::vector<std::vector<XInterval>> head_at_a_, tail_at_a_;
};

// floor/ceil for BigFloat; values at or beyond 2^52 are already integral.
BigFloat bf_floor(const BigFloat& v);
BigFloat bf_ceil(const BigFloat& v);

}  // namespace lpq
