#pragma once

// Finite matrices acting on sequence prefixes (extended by zero), with
// induced-norm reports per space:
//   l^0            exact: max column support size
//   l^q, 0<q<=1    exact: max column q-norm
//   l^1 / l^inf    exact: max column / row absolute sum
//   l^p, 1<p<inf   enclosure: power-ascent lower bound, interpolation upper
// Norm reports are enclosures with an exactness flag; couple norms take the
// max of the endpoint reports.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpq/certified.hpp"
#include "lpq/seqcore.hpp"

namespace lpq {

struct Triplet {
    std::size_t row = 0, col = 0;
    double value = 0.0;
};

class OperatorMatrix {
public:
    OperatorMatrix() = default;
    OperatorMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    // Duplicate (row, col) entries are summed; explicit zeros are dropped.
    static OperatorMatrix from_triplets(std::size_t rows, std::size_t cols,
                                        std::span<const Triplet> entries);
    static OperatorMatrix dense(const std::vector<std::vector<double>>& a);
    static OperatorMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<Triplet>& triplets() const { return entries_; }  // sorted by (col, row)

    // Entries of column k (contiguous range in triplets()).
    std::span<const Triplet> column(std::size_t k) const;

    std::vector<double> apply(std::span<const double> x) const;
    Seq apply_sorted(const Seq& x) const;  // rearranged image of a finite Seq

    OperatorMatrix scaled(double s) const;
    OperatorMatrix compose(const OperatorMatrix& rhs) const;            // this * rhs
    OperatorMatrix masked_rows(const std::vector<bool>& keep) const;    // zero out rows
    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Triplet> entries_;               // sorted by (col, row)
    std::vector<std::size_t> col_ptr_;           // size cols_+1
    void rebuild_index();
};

struct NormReport {
    std::string space;
    double lo = 0.0, hi = 0.0;
    bool exact = false;
};

NormReport norm_lq_exact(const OperatorMatrix& M, double q);  // q in (0, 1]
NormReport norm_l0(const OperatorMatrix& M);
NormReport norm_l1(const OperatorMatrix& M);
NormReport norm_linf(const OperatorMatrix& M);
NormReport norm_lp_bounds(const OperatorMatrix& M, double p, std::uint64_t seed = 1);

// Dispatch on the exponent: 0 -> l^0, (0,1] -> exact column formula,
// (1,inf) -> enclosure, inf -> l^inf.
NormReport norm_for_exponent(const OperatorMatrix& M, double p, std::uint64_t seed = 1);

struct CoupleNormReport {
    NormReport endpoint0, endpoint1;
    CertifiedValue combined;  // max of the endpoints
};
CoupleNormReport couple_norm(const OperatorMatrix& M, const CoupleParams& couple);

// Column-norm monotonicity Theta_r <= Theta_q for q < r <= 1 (the extension
// theorem's quantitative content: the same matrix acts on l^r with no larger
// norm).
struct ExtensionCheck {
    Verdict verdict = Verdict::Undecided;
    double theta_q = 0.0, theta_r = 0.0;
};
ExtensionCheck check_extension_theorem(const OperatorMatrix& M, double q, double r);

// {"rows": R, "cols": C, "triplets": [[row, col, value], ...]} (0-based).
nlohmann::json matrix_to_json(const OperatorMatrix& M);
OperatorMatrix matrix_from_json(const nlohmann::json& j);

// CSV columns: space, lo, hi, exact.
std::string norm_reports_csv(std::span<const NormReport> reports);

}  // namespace lpq
