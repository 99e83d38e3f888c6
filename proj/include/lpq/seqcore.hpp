#pragma once

// Sequence models for the couples (l^p, l^q): a nonincreasing nonnegative
// prefix plus an optional analytic power tail s_n = c * n^(-sigma) for
// n > len(prefix). Head/tail power sums are exact on the prefix and
// certified by integral bracketing on the tail.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpq/certified.hpp"

namespace lpq {

enum class TailKind { Zero, Power };

struct Tail {
    TailKind kind = TailKind::Zero;
    double c = 0.0;
    double sigma = 0.0;

    static Tail zero() { return Tail{}; }
    static Tail power(double c, double sigma) { return Tail{TailKind::Power, c, sigma}; }
    bool is_zero() const { return kind == TailKind::Zero; }
};

class Seq {
public:
    Seq() = default;
    explicit Seq(std::vector<double> prefix, Tail tail = Tail::zero());

    // Pure power tail c * n^(-sigma), prefix materialized to `materialize` terms.
    static Seq power(double c, double sigma, std::size_t materialize = 0);
    // Standard basis vector e_n (1 at position n).
    static Seq basis(std::size_t n = 1);

    const std::vector<double>& prefix() const { return prefix_; }
    const Tail& tail() const { return tail_; }
    std::size_t prefix_len() const { return prefix_.size(); }
    bool is_finite() const { return tail_.is_zero(); }

    // 1-based term access; the tail formula is used past the prefix.
    double at(std::uint64_t k) const;

    // Largest index with a nonzero entry (finite sequences only).
    std::uint64_t support_size() const;

    // Copy with the prefix extended to at least n entries from the tail formula.
    Seq materialized(std::size_t n) const;

private:
    std::vector<double> prefix_;
    Tail tail_;
};

struct CoupleParams {
    double p = 0.0;    // in [0, inf)
    double q = 1.0;    // in (0, inf]
    double alpha = 0;  // 1/alpha = 1/p - 1/q; equals p when q = inf; NaN when p = 0

    CoupleParams(double p_, double q_);
    bool q_is_inf() const { return std::isinf(q); }
};

// Nonincreasing rearrangement of the absolute values.
Seq rearrange(std::span<const double> v);

// Sum_{k<=n} (s_k)^p. Exact on the prefix, bracketed past it.
CertifiedValue head_sum(const Seq& s, std::uint64_t n, double p);

// Sum_{k>=m} (s_k)^q. Exact for zero tails; requires sigma*q > 1 otherwise.
CertifiedValue tail_sum(const Seq& s, std::uint64_t m, double q);

// (P_p s)_n = head_sum^(1/p), (Q_q s)_n = tail_sum(n)^(1/q), as enclosures.
CertifiedValue Pp(const Seq& s, std::uint64_t n, double p);
CertifiedValue Qq(const Seq& s, std::uint64_t n, double q);

// Repeats every term n times. Zero-tail sequences only (a dilated power
// tail is a staircase the model cannot represent).
Seq dilate(const Seq& s, std::uint64_t n);

// First N terms of n -> ((1/n) * Sum_{k<=n} s_k^p)^(1/p).
Seq cesaro_p(const Seq& s, double p, std::size_t N);

// Support cardinality; nullopt means infinite.
std::optional<std::uint64_t> l0_norm(const Seq& s);

// Certifies y_k <= x_k for every k > from, from the tail models alone
// (Pass carries head- and tail-sum domination past `from` at any exponent).
Verdict tail_pointwise_dominated(const Seq& x, const Seq& y, std::uint64_t from);

}  // namespace lpq
