/*
 * Shift selection for Shifted CholeskyQR on column-sparse inputs.
 *
 * Two candidate shifts are formed from the sparsity profile and the norms of
 * X (u = 2^-53):
 *
 *   alternative  s_alt  = 11 (m u + (n+1) u) (v t1 + n t2) c^2
 *   original     s_orig = 11 (m n u + n (n+1) u) [X]_g^2
 *
 * and the smaller one is used.  The plan also carries the admissible upper
 * limit of the shift, the condition-number ceiling U and the ratios
 * (h, l, p, k, r) that enter the error bounds.
 */
#pragma once

#include <optional>
#include <string_view>

#include "scholqr/matcore.hpp"
#include "scholqr/sparsity.hpp"

namespace scholqr {

enum class ShiftBranch { Alternative, Original };

std::string_view to_string(ShiftBranch branch);

struct ShiftCandidates {
    double s_alt = 0.0;
    double s_orig = 0.0;
    double s = 0.0;
    ShiftBranch branch = ShiftBranch::Original;
};

/// Candidate formulas and the selection rule only.  Needs the profile and
/// [X]_g, not ||X||_2, which keeps it cheap enough to time on its own.
/// Ties, T2 profiles and Dense profiles all resolve to Original.
ShiftCandidates shift_candidates(const SparsityProfile& prof, double gnorm, std::size_t m,
                                 std::size_t n);

struct ShiftConstants {
    std::optional<double> h;  // sqrt(2.23 + 0.34 r + 0.013 r^2), needs v > 0
    double l = 0.0;           // c sqrt(t1) / ||X||_2
    double p = 0.0;           // [X]_g / ||X||_2
    double k = 0.0;           // (v t1 + n t2) c^2 / ||X||_2^2
    std::optional<double> r;  // n sqrt(n) / (m sqrt(v)), needs v > 0
};

struct ShiftPlan {
    double s_alt = 0.0;
    double s_orig = 0.0;
    double s = 0.0;
    ShiftBranch branch = ShiftBranch::Original;
    double j_b = 0.0;
    double phi = 0.0;
    double kappa_bound_U = 0.0;
    ShiftConstants constants;
    bool window_ok = false;  // s <= j_b; reported, never clamped
    bool dense_fallback = false;
    /// Diagnostic only: h <= sqrt(3 n).
    std::optional<bool> h_within_sqrt3n;

    // Inputs the bound evaluators need again.
    double c = 0.0;
    double weighted_nnz = 0.0;
    double gnorm = 0.0;
    double sigma_max = 0.0;
    std::size_t m = 0;
    std::size_t n = 0;

    /// Shift of the requested candidate formula.
    double shift_for(ShiftBranch family) const {
        return family == ShiftBranch::Alternative ? s_alt : s_orig;
    }
};

/// Builds the full plan.  Dense profiles set dense_fallback and use the
/// Original branch unconditionally.
ShiftPlan plan_shift(const SparsityProfile& prof, const SpectralSummary& spec, std::size_t m,
                     std::size_t n);

struct EncReport {
    double beta = 0.0;        // c^2 m / ||X||_2^2
    double beta_limit = 0.0;  // m n p^2 / (v t1 + n t2)
    bool satisfied = false;   // beta <= beta_limit
    double epsilon = 0.0;     // beta (v t1 + n t2) / m
};

/// Element-norm condition under which the alternative shift is the smaller
/// candidate.
EncReport check_enc(const SparsityProfile& prof, const SpectralSummary& spec, std::size_t m,
                    std::size_t n);

struct KappaSufficient {
    double value = 0.0;                       // bound for plan.branch
    std::optional<double> enc_variant;        // epsilon in place of k, when the ENC holds
};

/// Sufficient condition on kappa_2(X) for three-pass shifted CholeskyQR with
/// the plan's shift:
///   Alternative: 1 / (16 sqrt(11 n k) (m u + (n+1) u) h)
///   Original:    1 / (86 p (m n u + (n+1) n u))
KappaSufficient kappa_sufficient(const ShiftPlan& plan, const EncReport& enc, std::size_t m,
                                 std::size_t n);

/// The Alternative-branch formula with an explicit k, h.
double kappa_sufficient_alternative(double k, double h, std::size_t m, std::size_t n);
/// The Original-branch formula with an explicit p.
double kappa_sufficient_original(double p, std::size_t m, std::size_t n);

/// sqrt(2.23 + 0.34 r + 0.013 r^2).
double h_of_r(double r);

}  // namespace scholqr
