#include "scholqr/bounds.hpp"

#include <cmath>

#include <fmt/format.h>

#include "scholqr/errors.hpp"

namespace scholqr {

ErrorMetrics metrics(const DenseMatrix& x, const QrOutcome& out, std::optional<double> norm2) {
    if (!out.succeeded || !out.q || !out.r) {
        throw FailedOutcome("metrics requested for a factorization that did not complete");
    }
    ErrorMetrics met;
    met.orthogonality = orthogonality_error(*out.q);
    met.residual_abs = frobenius_norm(subtract(multiply(*out.q, *out.r), x));
    const double nx = norm2 ? *norm2 : spectral(x).sigma_max;
    met.residual_rel = met.residual_abs / nx;
    return met;
}

std::optional<double> first_stage_residual(const DenseMatrix& x, const QrOutcome& out) {
    if (!out.first_stage_q || !out.first_stage_r) {
        return std::nullopt;
    }
    return frobenius_norm(subtract(multiply(*out.first_stage_q, *out.first_stage_r), x));
}

double orthogonality_bound(std::size_t m, std::size_t n) {
    const double u = kUnitRoundoff;
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return 6.0 * (md * nd * u + nd * (nd + 1.0) * u);
}

BoundReport evaluate_bounds(const ShiftPlan& plan, const SpectralSummary& spec,
                            const ErrorMetrics& met, std::optional<double> kappa_w_measured,
                            std::size_t m, std::size_t n, ShiftBranch family,
                            std::optional<double> first_stage_residual) {
    const bool alternative = family == ShiftBranch::Alternative;
    if (alternative && (!plan.constants.h || plan.dense_fallback)) {
        throw BranchMismatch("alternative-shift bounds need a T1 profile (v > 0, v << n)");
    }
    const double u = kUnitRoundoff;
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const double n2u = nd * nd * u;
    const double norm2 = spec.sigma_max;
    const double kappa = spec.kappa2;
    const auto& k = plan.constants;
    const double s = plan.shift_for(family);

    BoundReport rep;
    rep.branch = family;
    rep.orth_bound = orthogonality_bound(m, n);
    rep.orthogonality = met.orthogonality;
    rep.residual_abs = met.residual_abs;
    rep.kappa_w = kappa_w_measured;
    rep.first_stage_residual = first_stage_residual;

    bool window;
    if (alternative) {
        const double h = *k.h;
        rep.kappa_sufficient = kappa_sufficient_alternative(k.k, h, m, n);
        rep.kappa_admissible_U = 1.0 / (4.0 * n2u * h * k.l);
        rep.resid_bound = (2.19 + 3.4 * k.l) * h * n2u * norm2;
        rep.kappa_w_bound = 2.0 * h * std::sqrt(1.0 + (s / (norm2 * norm2)) * kappa * kappa);
        rep.first_stage_resid_bound = 1.03 * h * k.l * n2u * norm2;

        const double beta = plan.c * plan.c * md / (norm2 * norm2);
        const double beta_limit = md * nd * k.p * k.p / plan.weighted_nnz;
        if (beta <= beta_limit) {
            const double epsilon = beta * plan.weighted_nnz / md;
            rep.kappa_sufficient_enc = kappa_sufficient_alternative(epsilon, h, m, n);
            rep.resid_bound_enc_form = (2.79 + 3.97 * beta) * h * n2u * norm2;
        }
        window = s <= plan.phi;
    } else {
        rep.kappa_sufficient = kappa_sufficient_original(k.p, m, n);
        rep.kappa_admissible_U = 1.0 / (4.89 * k.p * n2u);
        rep.resid_bound = (6.57 * k.p + 4.81) * n2u * norm2;
        rep.resid_bound_table_variant = (6.57 * k.p + 4.87) * n2u * norm2;
        rep.kappa_w_bound = 3.24 * std::sqrt(1.0 + (s / (norm2 * norm2)) * kappa * kappa);
        rep.first_stage_resid_bound = 1.6 * n2u * plan.gnorm;
        window = s <= plan.gnorm * plan.gnorm / 100.0;
    }

    if (!(met.orthogonality <= rep.orth_bound)) {
        rep.violations.push_back(fmt::format("orthogonality {:.3e} > bound {:.3e}",
                                             met.orthogonality, rep.orth_bound));
    }
    if (!(met.residual_abs <= rep.resid_bound)) {
        rep.violations.push_back(
            fmt::format("residual {:.3e} > bound {:.3e}", met.residual_abs, rep.resid_bound));
    }
    if (kappa_w_measured && !(*kappa_w_measured <= rep.kappa_w_bound)) {
        rep.violations.push_back(fmt::format("kappa2(W) {:.3e} > bound {:.3e}",
                                             *kappa_w_measured, rep.kappa_w_bound));
    }
    rep.all_satisfied = rep.violations.empty();
    rep.preconditions_met =
        kappa <= rep.kappa_sufficient && kappa <= rep.kappa_admissible_U && window;
    return rep;
}

BoundReport evaluate_bounds(const ShiftPlan& plan, const SpectralSummary& spec,
                            const ErrorMetrics& met, std::optional<double> kappa_w_measured,
                            std::size_t m, std::size_t n) {
    return evaluate_bounds(plan, spec, met, kappa_w_measured, m, n, plan.branch);
}

}  // namespace scholqr
