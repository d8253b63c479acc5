#include "scholqr/shift.hpp"

#include <algorithm>
#include <cmath>

#include "scholqr/errors.hpp"

namespace scholqr {

std::string_view to_string(ShiftBranch branch) {
    return branch == ShiftBranch::Alternative ? "alternative" : "original";
}

double h_of_r(double r) { return std::sqrt(2.23 + 0.34 * r + 0.013 * r * r); }

ShiftCandidates shift_candidates(const SparsityProfile& prof, double gnorm, std::size_t m,
                                 std::size_t n) {
    const double u = kUnitRoundoff;
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    ShiftCandidates out;
    out.s_alt = 11.0 * (md * u + (nd + 1.0) * u) * prof.weighted_nnz() * prof.c * prof.c;
    out.s_orig = 11.0 * (md * nd * u + nd * (nd + 1.0) * u) * gnorm * gnorm;
    const bool alternative_allowed = prof.kind == SparsityKind::T1;
    if (alternative_allowed && out.s_alt < out.s_orig) {
        out.branch = ShiftBranch::Alternative;
        out.s = out.s_alt;
    } else {
        out.branch = ShiftBranch::Original;
        out.s = out.s_orig;
    }
    return out;
}

ShiftPlan plan_shift(const SparsityProfile& prof, const SpectralSummary& spec, std::size_t m,
                     std::size_t n) {
    if (n == 0 || m == 0) {
        throw InvalidArgument("plan_shift: empty matrix");
    }
    if (!(spec.sigma_max > 0.0)) {
        throw InvalidArgument("plan_shift: zero matrix");
    }
    const double u = kUnitRoundoff;
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const auto cand = shift_candidates(prof, spec.gnorm, m, n);

    ShiftPlan plan;
    plan.s_alt = cand.s_alt;
    plan.s_orig = cand.s_orig;
    plan.s = cand.s;
    plan.branch = cand.branch;
    plan.dense_fallback = prof.kind == SparsityKind::Dense;
    plan.c = prof.c;
    plan.weighted_nnz = prof.weighted_nnz();
    plan.gnorm = spec.gnorm;
    plan.sigma_max = spec.sigma_max;
    plan.m = m;
    plan.n = n;

    const double c2 = prof.c * prof.c;
    const double norm2 = spec.sigma_max;
    plan.phi = std::min(plan.weighted_nnz * c2 / (100.0 * nd),
                        static_cast<double>(prof.t1) * c2 / 100.0);

    auto& k = plan.constants;
    k.p = spec.gnorm / norm2;
    k.l = prof.c * std::sqrt(static_cast<double>(prof.t1)) / norm2;
    k.k = plan.weighted_nnz * c2 / (norm2 * norm2);
    if (prof.v > 0) {
        k.r = nd * std::sqrt(nd) / (md * std::sqrt(static_cast<double>(prof.v)));
        k.h = h_of_r(*k.r);
        plan.h_within_sqrt3n = *k.h <= std::sqrt(3.0 * nd);
    }

    if (plan.branch == ShiftBranch::Alternative) {
        plan.j_b = plan.phi;
        plan.kappa_bound_U = 1.0 / (4.0 * nd * nd * u * (*k.h) * k.l);
    } else {
        plan.j_b = spec.gnorm * spec.gnorm / 100.0;
        plan.kappa_bound_U = 1.0 / (4.89 * k.p * nd * nd * u);
    }
    plan.window_ok = plan.s <= plan.j_b;
    return plan;
}

EncReport check_enc(const SparsityProfile& prof, const SpectralSummary& spec, std::size_t m,
                    std::size_t n) {
    if (!(spec.sigma_max > 0.0)) {
        throw InvalidArgument("check_enc: zero matrix");
    }
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const double norm2_sq = spec.sigma_max * spec.sigma_max;
    const double p = spec.gnorm / spec.sigma_max;
    const double weight = prof.weighted_nnz();
    EncReport enc;
    enc.beta = prof.c * prof.c * md / norm2_sq;
    enc.beta_limit = md * nd * p * p / weight;
    enc.satisfied = enc.beta <= enc.beta_limit;
    enc.epsilon = enc.beta * weight / md;
    return enc;
}

double kappa_sufficient_alternative(double k, double h, std::size_t m, std::size_t n) {
    const double u = kUnitRoundoff;
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return 1.0 / (16.0 * std::sqrt(11.0 * nd * k) * (md * u + (nd + 1.0) * u) * h);
}

double kappa_sufficient_original(double p, std::size_t m, std::size_t n) {
    const double u = kUnitRoundoff;
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return 1.0 / (86.0 * p * (md * nd * u + (nd + 1.0) * nd * u));
}

KappaSufficient kappa_sufficient(const ShiftPlan& plan, const EncReport& enc, std::size_t m,
                                 std::size_t n) {
    KappaSufficient out;
    if (plan.branch == ShiftBranch::Alternative) {
        const double h = plan.constants.h.value();
        out.value = kappa_sufficient_alternative(plan.constants.k, h, m, n);
        if (enc.satisfied) {
            out.enc_variant = kappa_sufficient_alternative(enc.epsilon, h, m, n);
        }
    } else {
        out.value = kappa_sufficient_original(plan.constants.p, m, n);
    }
    return out;
}

}  // namespace scholqr
