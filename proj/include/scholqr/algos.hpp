/*
 * The CholeskyQR family.
 *
 *   cholesky_qr          G = X^T X, R = chol(G), Q = X R^{-1}
 *   cholesky_qr2         two passes, R = Z Y
 *   shifted_cholesky_qr  one pass on G + s I
 *   shifted_cholesky_qr3 shifted pass followed by cholesky_qr2 on its Q
 *   sparse_scholqr(3)    profile X, choose s, then run the shifted variant
 *
 * A non-positive pivot is a normal outcome here: the factorization stops,
 * succeeded is false and the failing stage is recorded in stage_log.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scholqr/matcore.hpp"
#include "scholqr/shift.hpp"
#include "scholqr/sparsity.hpp"

namespace scholqr {

struct StageRecord {
    std::string name;
    double shift = 0.0;
    bool breakdown = false;
    std::optional<std::size_t> pivot_index;
};

struct QrOptions {
    /// Keep W and Y of the first pass (used for kappa_2(W) bound checks).
    bool retain_first_stage = false;
    /// Treat ||Q^T Q - I||_F >= 1 as a failure.  Costs one extra Gram product.
    bool verify_orthogonality = true;
};

struct QrOutcome {
    std::optional<DenseMatrix> q;
    std::optional<UpperTriangular> r;
    std::vector<StageRecord> stage_log;  // executed stages only
    bool succeeded = false;
    bool lost_orthogonality = false;

    std::optional<DenseMatrix> first_stage_q;          // W
    std::optional<UpperTriangular> first_stage_r;      // Y

    /// 1-based index of the stage that broke down, if any.
    std::optional<std::size_t> breakdown_stage() const;
};

QrOutcome cholesky_qr(const DenseMatrix& x, const QrOptions& options = {});
QrOutcome cholesky_qr2(const DenseMatrix& x, const QrOptions& options = {});
QrOutcome shifted_cholesky_qr(const DenseMatrix& x, double shift, const QrOptions& options = {});
QrOutcome shifted_cholesky_qr3(const DenseMatrix& x, double shift, const QrOptions& options = {});

struct SparseQrResult {
    QrOutcome outcome;
    ShiftPlan plan;
    SparsityProfile profile;
    SpectralSummary spectral;
};

SparseQrResult sparse_scholqr(const DenseMatrix& x, const ProfileOptions& profile_options = {},
                              const QrOptions& options = {});
SparseQrResult sparse_scholqr3(const DenseMatrix& x, const ProfileOptions& profile_options = {},
                               const QrOptions& options = {});

}  // namespace scholqr
