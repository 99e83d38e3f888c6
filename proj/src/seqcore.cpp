#include "lpq/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpq {

namespace {

constexpr std::uint64_t kExplicitCap = 1u << 16;  // terms summed before bracketing

// Neumaier-compensated accumulation; keeps long exact sums at ~1 ulp.
struct Accum {
    double s = 0.0, comp = 0.0;
    void add(double v) {
        double t = s + v;
        if (std::fabs(s) >= std::fabs(v))
            comp += (s - t) + v;
        else
            comp += (v - t) + s;
        s = t;
    }
    double value() const { return s + comp; }
};

// Integral of c_e * x^(-beta) over [a, b] (b may be infinity; needs beta > 1 then).
double power_integral(double c_e, double beta, double a, double b) {
    if (std::isinf(b)) return c_e * std::pow(a, 1.0 - beta) / (beta - 1.0);
    if (beta == 1.0) return c_e * std::log(b / a);
    return c_e * (std::pow(a, 1.0 - beta) - std::pow(b, 1.0 - beta)) / (beta - 1.0);
}

// Enclosure of Sum_{k=a..b} c_e * k^(-beta) for a decreasing summand.
CertifiedValue power_sum_range(double c_e, double beta, std::uint64_t a, std::uint64_t b) {
    if (a > b) return CertifiedValue::exact(0.0);
    if (b - a + 1 <= kExplicitCap) {
        Accum acc;
        for (std::uint64_t k = a; k <= b; ++k)
            acc.add(c_e * std::pow(static_cast<double>(k), -beta));
        return CertifiedValue::exact(acc.value());
    }
    double da = static_cast<double>(a), db = static_cast<double>(b);
    double lo = power_integral(c_e, beta, da, db + 1.0);
    double hi = c_e * std::pow(da, -beta) + power_integral(c_e, beta, da, db);
    return CertifiedValue(std::min(lo, hi), std::max(lo, hi));
}

}  // namespace

Seq::Seq(std::vector<double> prefix, Tail tail) : prefix_(std::move(prefix)), tail_(tail) {
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
        if (!(prefix_[i] >= 0.0) || !std::isfinite(prefix_[i]))
            throw std::invalid_argument("Seq: entries must be finite and nonnegative");
        if (i > 0 && prefix_[i] > prefix_[i - 1] * (1.0 + 1e-15) + 1e-300)
            throw std::invalid_argument("Seq: prefix must be nonincreasing");
    }
    if (tail_.kind == TailKind::Power) {
        if (!(tail_.c > 0.0) || !(tail_.sigma > 0.0))
            throw std::invalid_argument("Seq: power tail needs c > 0, sigma > 0");
        double first = tail_.c * std::pow(static_cast<double>(prefix_.size() + 1), -tail_.sigma);
        if (!prefix_.empty() && prefix_.back() < first * (1.0 - 1e-12))
            throw std::invalid_argument("Seq: tail would break global monotonicity");
    }
}

Seq Seq::power(double c, double sigma, std::size_t materialize) {
    Seq s(std::vector<double>{}, Tail::power(c, sigma));
    return materialize > 0 ? s.materialized(materialize) : s;
}

Seq Seq::basis(std::size_t n) {
    std::vector<double> v(n, 0.0);
    v[0] = 1.0;  // nonincreasing form of e_n
    return Seq(std::move(v));
}

double Seq::at(std::uint64_t k) const {
    if (k == 0) throw std::invalid_argument("Seq::at: indices are 1-based");
    if (k <= prefix_.size()) return prefix_[k - 1];
    if (tail_.is_zero()) return 0.0;
    return tail_.c * std::pow(static_cast<double>(k), -tail_.sigma);
}

std::uint64_t Seq::support_size() const {
    if (!tail_.is_zero())
        throw std::logic_error("Seq::support_size: infinite support");
    std::uint64_t n = prefix_.size();
    while (n > 0 && prefix_[n - 1] == 0.0) --n;
    return n;
}

Seq Seq::materialized(std::size_t n) const {
    if (n <= prefix_.size()) return *this;
    if (tail_.is_zero()) {
        std::vector<double> v = prefix_;
        v.resize(n, 0.0);
        return Seq(std::move(v));
    }
    std::vector<double> v = prefix_;
    v.reserve(n);
    for (std::size_t k = prefix_.size() + 1; k <= n; ++k)
        v.push_back(tail_.c * std::pow(static_cast<double>(k), -tail_.sigma));
    return Seq(std::move(v), tail_);
}

CoupleParams::CoupleParams(double p_, double q_) : p(p_), q(q_) {
    if (!(p >= 0.0) || std::isinf(p)) throw std::invalid_argument("CoupleParams: p in [0, inf)");
    if (!(q > 0.0)) throw std::invalid_argument("CoupleParams: q in (0, inf]");
    if (!(p < q)) throw std::invalid_argument("CoupleParams: requires p < q");
    if (p == 0.0)
        alpha = std::numeric_limits<double>::quiet_NaN();
    else if (std::isinf(q))
        alpha = p;
    else
        alpha = 1.0 / (1.0 / p - 1.0 / q);
}

Seq rearrange(std::span<const double> v) {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::fabs(v[i]);
    std::sort(a.begin(), a.end(), std::greater<double>());
    return Seq(std::move(a));
}

CertifiedValue head_sum(const Seq& s, std::uint64_t n, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("head_sum: p must be positive");
    if (n == 0) throw std::invalid_argument("head_sum: n >= 1");
    const auto& pre = s.prefix();
    std::uint64_t n_pre = std::min<std::uint64_t>(n, pre.size());
    Accum acc;
    for (std::uint64_t k = 0; k < n_pre; ++k) acc.add(std::pow(pre[k], p));
    CertifiedValue out = CertifiedValue::exact(acc.value());
    if (n > pre.size() && !s.tail().is_zero()) {
        double c_e = std::pow(s.tail().c, p);
        out = out + power_sum_range(c_e, s.tail().sigma * p, pre.size() + 1, n);
    }
    return out;
}

CertifiedValue tail_sum(const Seq& s, std::uint64_t m, double q) {
    if (!(q > 0.0) || std::isinf(q)) throw std::invalid_argument("tail_sum: q in (0, inf)");
    if (m == 0) throw std::invalid_argument("tail_sum: m >= 1");
    const auto& pre = s.prefix();
    Accum acc;
    for (std::uint64_t k = m; k <= pre.size(); ++k) acc.add(std::pow(pre[k - 1], q));
    CertifiedValue out = CertifiedValue::exact(acc.value());
    if (s.tail().is_zero()) return out;

    double beta = s.tail().sigma * q;
    if (beta <= 1.0) throw std::domain_error("tail_sum: divergent power tail (sigma*q <= 1)");
    double c_e = std::pow(s.tail().c, q);
    std::uint64_t K = std::max<std::uint64_t>(m, pre.size() + 1);
    double K_d = static_cast<double>(K);
    double integral = power_integral(c_e, beta, K_d, std::numeric_limits<double>::infinity());
    return out + CertifiedValue(integral, c_e * std::pow(K_d, -beta) + integral);
}

CertifiedValue Pp(const Seq& s, std::uint64_t n, double p) {
    return pow_cert(head_sum(s, n, p), 1.0 / p);
}

CertifiedValue Qq(const Seq& s, std::uint64_t n, double q) {
    if (std::isinf(q)) return CertifiedValue::exact(s.at(n));
    return pow_cert(tail_sum(s, n, q), 1.0 / q);
}

Seq dilate(const Seq& s, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("dilate: n >= 1");
    if (!s.tail().is_zero())
        throw std::invalid_argument("dilate: power tails are not representable; materialize first");
    std::vector<double> out(s.prefix_len() * n);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = s.prefix()[k / n];
    return Seq(std::move(out));
}

Seq cesaro_p(const Seq& s, double p, std::size_t N) {
    if (!(p > 0.0)) throw std::invalid_argument("cesaro_p: p must be positive");
    if (N == 0) throw std::invalid_argument("cesaro_p: N >= 1");
    std::vector<double> out(N);
    Accum acc;
    for (std::size_t k = 1; k <= N; ++k) {
        acc.add(std::pow(s.at(k), p));
        out[k - 1] = std::pow(acc.value() / static_cast<double>(k), 1.0 / p);
    }
    // The p-mean of the top n terms of a nonincreasing sequence is nonincreasing
    // in n; verify, then absorb roundoff so the Seq invariant holds exactly.
    for (std::size_t k = 1; k < N; ++k) {
        if (out[k] > out[k - 1] * (1.0 + 1e-12) + 1e-300)
            throw std::logic_error("cesaro_p: monotonicity check failed");
        out[k] = std::min(out[k], out[k - 1]);
    }
    return Seq(std::move(out));
}

std::optional<std::uint64_t> l0_norm(const Seq& s) {
    if (!s.tail().is_zero()) return std::nullopt;
    std::uint64_t count = 0;
    for (double v : s.prefix())
        if (v != 0.0) ++count;
    return count;
}

Verdict tail_pointwise_dominated(const Seq& x, const Seq& y, std::uint64_t from) {
    std::uint64_t k0 = from + 1;
    std::uint64_t check_to = std::max(x.prefix_len(), y.prefix_len());
    for (std::uint64_t k = k0; k <= check_to; ++k)
        if (y.at(k) > x.at(k) * (1.0 + 1e-12) + 1e-300) return Verdict::Fail;
    k0 = std::max<std::uint64_t>(k0, check_to + 1);
    // Past both prefixes only the tail models remain.
    if (y.tail().is_zero()) return Verdict::Pass;
    if (x.tail().is_zero()) return Verdict::Fail;
    if (y.tail().sigma < x.tail().sigma * (1.0 - 1e-15)) return Verdict::Fail;
    double kd = static_cast<double>(k0);
    double yv = y.tail().c * std::pow(kd, -y.tail().sigma);
    double xv = x.tail().c * std::pow(kd, -x.tail().sigma);
    // sigma_y >= sigma_x: the ratio y_k/x_k is nonincreasing past k0
    if (yv <= xv * (1.0 + 1e-12)) return Verdict::Pass;
    return Verdict::Undecided;
}

}  // namespace lpq
