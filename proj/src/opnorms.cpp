#include "lpq/opnorms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "lpq/rng.hpp"

namespace lpq {

void OperatorMatrix::rebuild_index() {
    std::sort(entries_.begin(), entries_.end(), [](const Triplet& a, const Triplet& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    col_ptr_.assign(cols_ + 1, 0);
    for (const auto& e : entries_) ++col_ptr_[e.col + 1];
    for (std::size_t k = 0; k < cols_; ++k) col_ptr_[k + 1] += col_ptr_[k];
}

OperatorMatrix OperatorMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                             std::span<const Triplet> entries) {
    OperatorMatrix m(rows, cols);
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (const auto& e : entries) {
        if (e.row >= rows || e.col >= cols)
            throw std::invalid_argument("OperatorMatrix: triplet out of bounds");
        if (!std::isfinite(e.value)) throw std::invalid_argument("OperatorMatrix: non-finite entry");
        acc[{e.col, e.row}] += e.value;
    }
    for (const auto& [key, v] : acc)
        if (v != 0.0) m.entries_.push_back({key.second, key.first, v});
    m.rebuild_index();
    return m;
}

OperatorMatrix OperatorMatrix::dense(const std::vector<std::vector<double>>& a) {
    std::size_t rows = a.size();
    std::size_t cols = rows ? a[0].size() : 0;
    std::vector<Triplet> tr;
    for (std::size_t j = 0; j < rows; ++j) {
        if (a[j].size() != cols) throw std::invalid_argument("OperatorMatrix: ragged rows");
        for (std::size_t k = 0; k < cols; ++k)
            if (a[j][k] != 0.0) tr.push_back({j, k, a[j][k]});
    }
    return from_triplets(rows, cols, tr);
}

OperatorMatrix OperatorMatrix::identity(std::size_t n) {
    std::vector<Triplet> tr;
    for (std::size_t j = 0; j < n; ++j) tr.push_back({j, j, 1.0});
    return from_triplets(n, n, tr);
}

std::span<const Triplet> OperatorMatrix::column(std::size_t k) const {
    if (k >= cols_) return {};
    return std::span<const Triplet>(entries_).subspan(col_ptr_[k], col_ptr_[k + 1] - col_ptr_[k]);
}

std::vector<double> OperatorMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(rows_, 0.0);
    std::size_t n = std::min(cols_, x.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (x[k] == 0.0) continue;
        for (const auto& e : column(k)) y[e.row] += e.value * x[k];
    }
    return y;
}

Seq OperatorMatrix::apply_sorted(const Seq& x) const {
    if (!x.is_finite()) throw std::invalid_argument("apply_sorted: finite sequences only");
    std::vector<double> y = apply(x.prefix());
    return rearrange(y);
}

OperatorMatrix OperatorMatrix::scaled(double s) const {
    OperatorMatrix m(rows_, cols_);
    if (s != 0.0) {
        m.entries_ = entries_;
        for (auto& e : m.entries_) e.value *= s;
    }
    m.rebuild_index();
    return m;
}

OperatorMatrix OperatorMatrix::compose(const OperatorMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("compose: dimension mismatch");
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (std::size_t k = 0; k < rhs.cols_; ++k)
        for (const auto& b : rhs.column(k))
            for (const auto& a : column(b.row)) acc[{k, a.row}] += a.value * b.value;
    std::vector<Triplet> tr;
    for (const auto& [key, v] : acc) tr.push_back({key.second, key.first, v});
    return from_triplets(rows_, rhs.cols_, tr);
}

OperatorMatrix OperatorMatrix::masked_rows(const std::vector<bool>& keep) const {
    std::vector<Triplet> tr;
    for (const auto& e : entries_)
        if (e.row < keep.size() && keep[e.row]) tr.push_back(e);
    return from_triplets(rows_, cols_, tr);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("operator+: dimension mismatch");
    std::vector<Triplet> tr = a.entries_;
    tr.insert(tr.end(), b.entries_.begin(), b.entries_.end());
    return OperatorMatrix::from_triplets(a.rows_, a.cols_, tr);
}

// ---------------------------------------------------------------------------
// Norms.
// ---------------------------------------------------------------------------

NormReport norm_lq_exact(const OperatorMatrix& M, double q) {
    if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("norm_lq_exact: q in (0, 1]");
    double best = 0.0;
    for (std::size_t k = 0; k < M.cols(); ++k) {
        double s = 0.0;
        for (const auto& e : M.column(k)) s += std::pow(std::fabs(e.value), q);
        best = std::max(best, std::pow(s, 1.0 / q));
    }
    char tag[32];
    std::snprintf(tag, sizeof(tag), "lq(%g)", q);
    return NormReport{tag, best, best, true};
}

NormReport norm_l0(const OperatorMatrix& M) {
    // card(supp Tx) <= sum over supp(x) of card(supp t_k), and basis vectors
    // attain the largest column support, so the max column support is exact.
    std::size_t best = 0;
    for (std::size_t k = 0; k < M.cols(); ++k) best = std::max(best, M.column(k).size());
    double v = static_cast<double>(best);
    return NormReport{"l0", v, v, true};
}

NormReport norm_l1(const OperatorMatrix& M) {
    double best = 0.0;
    for (std::size_t k = 0; k < M.cols(); ++k) {
        double s = 0.0;
        for (const auto& e : M.column(k)) s += std::fabs(e.value);
        best = std::max(best, s);
    }
    return NormReport{"l1", best, best, true};
}

NormReport norm_linf(const OperatorMatrix& M) {
    std::vector<double> row_sum(M.rows(), 0.0);
    for (const auto& e : M.triplets()) row_sum[e.row] += std::fabs(e.value);
    double best = row_sum.empty() ? 0.0 : *std::max_element(row_sum.begin(), row_sum.end());
    return NormReport{"linf", best, best, true};
}

namespace {

double vec_norm_p(std::span<const double> v, double p) {
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x), p);
    return std::pow(s, 1.0 / p);
}

std::vector<double> apply_transpose(const OperatorMatrix& M, std::span<const double> y) {
    std::vector<double> w(M.cols(), 0.0);
    for (std::size_t k = 0; k < M.cols(); ++k)
        for (const auto& e : M.column(k)) w[k] += e.value * y[e.row];
    return w;
}

}  // namespace

NormReport norm_lp_bounds(const OperatorMatrix& M, double p, std::uint64_t seed) {
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("norm_lp_bounds: p in (1, inf)");
    double up = std::pow(norm_l1(M).hi, 1.0 / p) * std::pow(norm_linf(M).hi, 1.0 - 1.0 / p);
    char tag[32];
    std::snprintf(tag, sizeof(tag), "lp(%g)", p);
    if (M.triplets().empty()) return NormReport{tag, 0.0, 0.0, true};

    // Power ascent for induced p-norms: x <- |M^T psi(Mx)|^{1/(p-1)} with
    // psi(y) = |y|^{p-1} sign(y); the Rayleigh-type ratio is nondecreasing.
    Rng rng(seed);
    double lo = 0.0;
    const double pd = p / (p - 1.0);
    for (int start = 0; start < 8; ++start) {
        std::vector<double> x(M.cols());
        for (auto& v : x) v = start == 0 ? 1.0 : rng.uniform(-1.0, 1.0);
        for (int it = 0; it < 50; ++it) {
            double nx = vec_norm_p(x, p);
            if (nx == 0.0) break;
            for (auto& v : x) v /= nx;
            std::vector<double> y = M.apply(x);
            lo = std::max(lo, vec_norm_p(y, p));
            for (auto& v : y) v = std::copysign(std::pow(std::fabs(v), p - 1.0), v);
            std::vector<double> w = apply_transpose(M, y);
            for (auto& v : w) v = std::copysign(std::pow(std::fabs(v), pd - 1.0), v);
            x = std::move(w);
        }
    }
    lo = std::min(lo, up);
    return NormReport{tag, lo, up, false};
}

NormReport norm_for_exponent(const OperatorMatrix& M, double p, std::uint64_t seed) {
    if (p == 0.0) return norm_l0(M);
    if (std::isinf(p)) return norm_linf(M);
    if (p <= 1.0) return norm_lq_exact(M, p);
    return norm_lp_bounds(M, p, seed);
}

CoupleNormReport couple_norm(const OperatorMatrix& M, const CoupleParams& couple) {
    CoupleNormReport rep;
    rep.endpoint0 = norm_for_exponent(M, couple.p);
    rep.endpoint1 = norm_for_exponent(M, couple.q);
    rep.combined = CertifiedValue(std::max(rep.endpoint0.lo, rep.endpoint1.lo),
                                  std::max(rep.endpoint0.hi, rep.endpoint1.hi));
    return rep;
}

ExtensionCheck check_extension_theorem(const OperatorMatrix& M, double q, double r) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("check_extension_theorem: q in (0, 1)");
    if (!(r > q && r <= 1.0)) throw std::invalid_argument("check_extension_theorem: r in (q, 1]");
    ExtensionCheck chk;
    chk.theta_q = norm_lq_exact(M, q).hi;
    chk.theta_r = norm_lq_exact(M, r).hi;
    chk.verdict = certified_le(CertifiedValue::exact(chk.theta_r),
                               CertifiedValue::exact(chk.theta_q));
    return chk;
}

nlohmann::json matrix_to_json(const OperatorMatrix& M) {
    nlohmann::json j;
    j["rows"] = M.rows();
    j["cols"] = M.cols();
    auto arr = nlohmann::json::array();
    for (const auto& e : M.triplets()) arr.push_back({e.row, e.col, e.value});
    j["triplets"] = arr;
    return j;
}

OperatorMatrix matrix_from_json(const nlohmann::json& j) {
    std::size_t rows = j.at("rows").get<std::size_t>();
    std::size_t cols = j.at("cols").get<std::size_t>();
    std::vector<Triplet> tr;
    for (const auto& e : j.at("triplets")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("matrix JSON: triplets must be [row, col, value]");
        tr.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
    return OperatorMatrix::from_triplets(rows, cols, tr);
}

std::string norm_reports_csv(std::span<const NormReport> reports) {
    std::string out = "space,lo,hi,exact\n";
    char buf[128];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%d\n", r.space.c_str(), r.lo, r.hi,
                      r.exact ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace lpq
