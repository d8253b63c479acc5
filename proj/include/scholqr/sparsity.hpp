// Column-sparsity profile of a tall-skinny matrix (dense-column count v,
// per-column nonzero maxima t1/t2, largest magnitude c) and the T1/T2/Dense
// classification built on it.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "scholqr/matcore.hpp"

namespace scholqr {

enum class SparsityKind { T1, T2, Dense };

std::string_view to_string(SparsityKind kind);

struct ProfileOptions {
    double zero_tol = 0.0;         // |x| > zero_tol counts as a nonzero
    double dense_fraction = 0.25;  // dense column: nnz >= dense_fraction * rows
};

struct SparsityProfile {
    std::size_t v = 0;   // number of dense columns
    std::size_t t1 = 0;  // max nnz over dense columns, 0 if v == 0
    std::size_t t2 = 0;  // max nnz over sparse columns, 0 if every column is dense
    double c = 0.0;      // max |x_ij|
    SparsityKind kind = SparsityKind::T2;
    std::vector<std::size_t> nnz_per_column;
    std::vector<bool> dense_column;

    /// v*t1 + n*t2, the nonzero weight the alternative shift scales with.
    double weighted_nnz() const;
};

/// Throws AllZeroMatrix when no entry exceeds zero_tol and InvalidArgument
/// when dense_fraction is outside (0, 1] or zero_tol is negative.
SparsityProfile profile(const DenseMatrix& x, const ProfileOptions& options = {});

enum class SizeCondition {
    RowsTimesCols,   // m n u <= 1/64
    ColsTimesColsP1  // n (n+1) u <= 1/64
};

std::string_view to_string(SizeCondition condition);

/// Size admissibility checks; an empty result means both hold.
std::vector<SizeCondition> validate_settings(double m, double n);
std::vector<SizeCondition> validate_settings(const DenseMatrix& x);

}  // namespace scholqr
