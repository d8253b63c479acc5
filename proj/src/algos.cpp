#include "scholqr/algos.hpp"

#include <cmath>

#include "scholqr/errors.hpp"

namespace scholqr {

std::optional<std::size_t> QrOutcome::breakdown_stage() const {
    for (std::size_t i = 0; i < stage_log.size(); ++i) {
        if (stage_log[i].breakdown) {
            return i + 1;
        }
    }
    return std::nullopt;
}

namespace {

void check_input(const DenseMatrix& x) {
    if (x.cols() == 0 || x.rows() < x.cols()) {
        throw ShapeError("CholeskyQR needs rows >= cols >= 1, got " + std::to_string(x.rows()) +
                         "x" + std::to_string(x.cols()));
    }
    if (!x.all_finite()) {
        throw InvalidArgument("CholeskyQR input has non-finite entries");
    }
}

void check_shift(double shift) {
    if (!(shift >= 0.0) || !std::isfinite(shift)) {
        throw InvalidArgument("shift must be finite and nonnegative");
    }
}

struct Pass {
    std::optional<DenseMatrix> q;
    std::optional<UpperTriangular> r;
};

// One Gram / Cholesky / solve pass; appends its record to `log`.
Pass cholqr_pass(const DenseMatrix& x, double shift, std::string name,
                 std::vector<StageRecord>& log) {
    DenseMatrix g = gram(x);
    if (shift != 0.0) {
        for (std::size_t i = 0; i < g.rows(); ++i) {
            g(i, i) += shift;
        }
    }
    StageRecord rec{std::move(name), shift, false, std::nullopt};
    auto chol = cholesky(g);
    if (const auto* bd = std::get_if<Breakdown>(&chol)) {
        rec.breakdown = true;
        rec.pivot_index = bd->pivot_index;
        log.push_back(std::move(rec));
        return {};
    }
    auto r = std::get<UpperTriangular>(std::move(chol));
    DenseMatrix q = tri_solve_rows(x, r);
    log.push_back(std::move(rec));
    return {std::move(q), std::move(r)};
}

void finish(QrOutcome& out, const QrOptions& options) {
    out.succeeded = out.q && out.r && out.q->all_finite() && out.r->has_positive_diagonal();
    if (out.succeeded && options.verify_orthogonality) {
        const double orth = orthogonality_error(*out.q);
        if (!(orth < 1.0)) {
            out.succeeded = false;
            out.lost_orthogonality = true;
        }
    } else if (out.q && !out.q->all_finite()) {
        out.lost_orthogonality = true;
    }
}

}  // namespace

QrOutcome cholesky_qr(const DenseMatrix& x, const QrOptions& options) {
    return shifted_cholesky_qr(x, 0.0, options);
}

QrOutcome shifted_cholesky_qr(const DenseMatrix& x, double shift, const QrOptions& options) {
    check_input(x);
    check_shift(shift);
    QrOutcome out;
    auto pass = cholqr_pass(x, shift, shift == 0.0 ? "cholqr" : "scholqr", out.stage_log);
    if (options.retain_first_stage) {
        out.first_stage_q = pass.q;
        out.first_stage_r = pass.r;
    }
    out.q = std::move(pass.q);
    out.r = std::move(pass.r);
    finish(out, options);
    return out;
}

QrOutcome cholesky_qr2(const DenseMatrix& x, const QrOptions& options) {
    check_input(x);
    QrOutcome out;
    auto first = cholqr_pass(x, 0.0, "cholqr2.1", out.stage_log);
    if (options.retain_first_stage) {
        out.first_stage_q = first.q;
        out.first_stage_r = first.r;
    }
    if (!first.q) {
        finish(out, options);
        return out;
    }
    auto second = cholqr_pass(*first.q, 0.0, "cholqr2.2", out.stage_log);
    if (second.q) {
        out.r = multiply(*second.r, *first.r);
        out.q = std::move(second.q);
    }
    finish(out, options);
    return out;
}

QrOutcome shifted_cholesky_qr3(const DenseMatrix& x, double shift, const QrOptions& options) {
    check_input(x);
    check_shift(shift);
    QrOutcome out;
    auto shifted = cholqr_pass(x, shift, "scholqr", out.stage_log);
    if (options.retain_first_stage) {
        out.first_stage_q = shifted.q;
        out.first_stage_r = shifted.r;
    }
    if (!shifted.q) {
        finish(out, options);
        return out;
    }
    auto second = cholqr_pass(*shifted.q, 0.0, "cholqr2.1", out.stage_log);
    if (!second.q) {
        finish(out, options);
        return out;
    }
    auto third = cholqr_pass(*second.q, 0.0, "cholqr2.2", out.stage_log);
    if (third.q) {
        // R = J (D Y): fold the first CholeskyQR2 factor into Y first.
        const UpperTriangular dy = multiply(*second.r, *shifted.r);
        out.r = multiply(*third.r, dy);
        out.q = std::move(third.q);
    }
    finish(out, options);
    return out;
}

namespace {

template <typename Run>
SparseQrResult sparse_pipeline(const DenseMatrix& x, const ProfileOptions& profile_options,
                               Run&& run) {
    check_input(x);
    SparseQrResult res;
    res.profile = profile(x, profile_options);
    res.spectral = spectral(x);
    res.plan = plan_shift(res.profile, res.spectral, x.rows(), x.cols());
    res.outcome = run(res.plan.s);
    return res;
}

}  // namespace

SparseQrResult sparse_scholqr(const DenseMatrix& x, const ProfileOptions& profile_options,
                              const QrOptions& options) {
    return sparse_pipeline(x, profile_options,
                           [&](double s) { return shifted_cholesky_qr(x, s, options); });
}

SparseQrResult sparse_scholqr3(const DenseMatrix& x, const ProfileOptions& profile_options,
                               const QrOptions& options) {
    return sparse_pipeline(x, profile_options,
                           [&](double s) { return shifted_cholesky_qr3(x, s, options); });
}

}  // namespace scholqr
