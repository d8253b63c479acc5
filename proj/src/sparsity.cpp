#include "scholqr/sparsity.hpp"

#include <algorithm>
#include <cmath>

#include "scholqr/errors.hpp"

namespace scholqr {

std::string_view to_string(SparsityKind kind) {
    switch (kind) {
        case SparsityKind::T1: return "T1";
        case SparsityKind::T2: return "T2";
        case SparsityKind::Dense: return "Dense";
    }
    return "?";
}

std::string_view to_string(SizeCondition condition) {
    switch (condition) {
        case SizeCondition::RowsTimesCols: return "m*n*u <= 1/64";
        case SizeCondition::ColsTimesColsP1: return "n*(n+1)*u <= 1/64";
    }
    return "?";
}

double SparsityProfile::weighted_nnz() const {
    const double n = static_cast<double>(nnz_per_column.size());
    return static_cast<double>(v) * static_cast<double>(t1) + n * static_cast<double>(t2);
}

SparsityProfile profile(const DenseMatrix& x, const ProfileOptions& options) {
    if (!(options.dense_fraction > 0.0 && options.dense_fraction <= 1.0)) {
        throw InvalidArgument("dense_fraction must lie in (0, 1]");
    }
    if (!(options.zero_tol >= 0.0)) {
        throw InvalidArgument("zero_tol must be nonnegative");
    }
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    const double dense_threshold = options.dense_fraction * static_cast<double>(m);

    SparsityProfile p;
    p.nnz_per_column.resize(n);
    p.dense_column.resize(n);
    std::size_t total_nnz = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t count = 0;
        for (double value : x.col(j)) {
            const double mag = std::abs(value);
            p.c = std::max(p.c, mag);
            if (mag > options.zero_tol) {
                ++count;
            }
        }
        total_nnz += count;
        p.nnz_per_column[j] = count;
        const bool dense = static_cast<double>(count) >= dense_threshold;
        p.dense_column[j] = dense;
        if (dense) {
            ++p.v;
            p.t1 = std::max(p.t1, count);
        } else {
            p.t2 = std::max(p.t2, count);
        }
    }
    if (total_nnz == 0) {
        throw AllZeroMatrix();
    }
    if (p.v == 0) {
        p.kind = SparsityKind::T2;
    } else if (p.v == n || 2 * p.v > n) {
        p.kind = SparsityKind::Dense;
    } else {
        p.kind = SparsityKind::T1;
    }
    return p;
}

std::vector<SizeCondition> validate_settings(double m, double n) {
    std::vector<SizeCondition> violated;
    constexpr double limit = 1.0 / 64.0;
    if (m * n * kUnitRoundoff > limit) {
        violated.push_back(SizeCondition::RowsTimesCols);
    }
    if (n * (n + 1.0) * kUnitRoundoff > limit) {
        violated.push_back(SizeCondition::ColsTimesColsP1);
    }
    return violated;
}

std::vector<SizeCondition> validate_settings(const DenseMatrix& x) {
    return validate_settings(static_cast<double>(x.rows()), static_cast<double>(x.cols()));
}

}  // namespace scholqr
