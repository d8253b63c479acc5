/*
 * Experiment harness behind the `scholqr` CLI: runs one algorithm with one
 * shift policy on a prepared matrix, tabulates the outcome as an
 * ExperimentRecord and serializes sweeps as CSV.
 *
 * Timing covers the factorization call only.  Profiling and shift selection
 * are timed separately (profile_time_s); generation, singular values and
 * metrics are not timed.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scholqr/algos.hpp"
#include "scholqr/bounds.hpp"
#include "scholqr/gen.hpp"
#include "scholqr/shift.hpp"
#include "scholqr/sparsity.hpp"

namespace scholqr {

enum class Algo { Cqr, Cqr2, Scqr, Scqr3 };
std::string_view to_string(Algo algo);
std::optional<Algo> parse_algo(std::string_view name);
bool is_shifted(Algo algo);

enum class ShiftMode { Alternative, Original, None, Auto, Value };

struct ShiftRequest {
    ShiftMode mode = ShiftMode::Auto;
    double value = 0.0;  // ShiftMode::Value only
};

std::string_view to_string(ShiftMode mode);
/// "alternative", "original", "none", "auto" or "value:<s>" with s >= 0.
std::optional<ShiftRequest> parse_shift(std::string_view text);

/// Matrix plus everything the shift policies need, computed once per matrix.
struct MatrixContext {
    DenseMatrix x;
    std::string matrix_id;
    std::string family;
    double knob = 0.0;
    std::optional<std::uint64_t> seed;
    SparsityProfile profile;
    SpectralSummary spectral;
    ShiftPlan plan;
    double profile_time_s = 0.0;  // profile + shift selection
};

MatrixContext prepare_matrix(DenseMatrix x, std::string matrix_id, std::string family,
                             double knob = 0.0, std::optional<std::uint64_t> seed = std::nullopt,
                             const ProfileOptions& profile_options = {});

struct RunOptions {
    std::size_t repeats = 1;
    bool check_bounds = true;
};

struct ExperimentRecord {
    std::string matrix_id;
    std::string family;
    std::size_t m = 0;
    std::size_t n = 0;
    double kappa_measured = 0.0;
    std::string shift_mode;
    double s_value = 0.0;
    std::string branch;
    std::optional<double> orthogonality;
    std::optional<double> residual_abs;
    std::optional<double> residual_rel;
    std::optional<std::size_t> breakdown_stage;
    std::optional<bool> bounds_satisfied;
    double wall_time_s = 0.0;
    double profile_time_s = 0.0;
    std::optional<std::uint64_t> seed;

    // Not part of the CSV schema.
    double knob = 0.0;
    std::vector<double> wall_times;
    std::optional<BoundReport> bounds;
};

/// Shift value a request resolves to for this plan.
double resolve_shift(const ShiftPlan& plan, const ShiftRequest& request);

/// Runs `algo` `repeats` times (timed), keeps the first outcome for the
/// accuracy columns and, for scqr3 with a shift family, evaluates the bounds.
/// Throws InvalidArgument for cqr/cqr2 combined with a nonzero shift.
ExperimentRecord run_experiment(const MatrixContext& ctx, Algo algo, const ShiftRequest& shift,
                                const RunOptions& options = {});

/// Wall-clock seconds of `repeats` serial factorization calls.
std::vector<double> time_factorization(const DenseMatrix& x, Algo algo, double shift,
                                       std::size_t repeats);

struct SweepSpec {
    Family family = Family::ArrowheadT1;
    std::size_t m = 2048;
    std::size_t n = 64;
    std::vector<double> knobs;
    std::vector<ShiftRequest> shifts;
    std::size_t repeats = 1;
    std::uint64_t seed = 0;
    Algo algo = Algo::Scqr3;
    bool parallel = false;
    bool check_bounds = true;
    ProfileOptions profile_options;
};

std::string matrix_id_for(Family family, std::size_t m, std::size_t n, double knob,
                          std::optional<std::uint64_t> seed);

/// All (knob, shift) points, sorted by (family, knob, shift_mode).  With
/// `parallel`, knob points run on up to min(hardware threads, SCHOLQR_THREADS)
/// workers; repeats inside a point stay serial.
std::vector<ExperimentRecord> run_sweep(const SweepSpec& spec);

/// Bit-exact CSV header.
inline constexpr std::string_view kCsvHeader =
    "matrix_id,family,m,n,kappa_measured,shift_mode,s_value,branch,orthogonality,residual_abs,"
    "residual_rel,breakdown_stage,bounds_satisfied,wall_time_s,profile_time_s,seed";

std::string csv_row(const ExperimentRecord& rec);
void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& out);
/// Same columns as csv_row, as one JSON object on a single line, plus the
/// bound report when present.
std::string json_line(const ExperimentRecord& rec);
/// Header plus aligned rows for console output.
std::string format_table(const std::vector<ExperimentRecord>& records);

/// Worker cap from SCHOLQR_THREADS (unset or invalid: hardware concurrency).
std::size_t thread_cap();

}  // namespace scholqr
