#include "scholqr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "scholqr/errors.hpp"

namespace scholqr {

std::string_view to_string(Algo algo) {
    switch (algo) {
        case Algo::Cqr: return "cqr";
        case Algo::Cqr2: return "cqr2";
        case Algo::Scqr: return "scqr";
        case Algo::Scqr3: return "scqr3";
    }
    return "?";
}

std::optional<Algo> parse_algo(std::string_view name) {
    if (name == "cqr") return Algo::Cqr;
    if (name == "cqr2") return Algo::Cqr2;
    if (name == "scqr") return Algo::Scqr;
    if (name == "scqr3") return Algo::Scqr3;
    return std::nullopt;
}

bool is_shifted(Algo algo) { return algo == Algo::Scqr || algo == Algo::Scqr3; }

std::string_view to_string(ShiftMode mode) {
    switch (mode) {
        case ShiftMode::Alternative: return "alternative";
        case ShiftMode::Original: return "original";
        case ShiftMode::None: return "none";
        case ShiftMode::Auto: return "auto";
        case ShiftMode::Value: return "value";
    }
    return "?";
}

std::optional<ShiftRequest> parse_shift(std::string_view text) {
    if (text == "alternative") return ShiftRequest{ShiftMode::Alternative, 0.0};
    if (text == "original") return ShiftRequest{ShiftMode::Original, 0.0};
    if (text == "none") return ShiftRequest{ShiftMode::None, 0.0};
    if (text == "auto") return ShiftRequest{ShiftMode::Auto, 0.0};
    constexpr std::string_view prefix = "value:";
    if (text.substr(0, prefix.size()) == prefix) {
        const auto num = text.substr(prefix.size());
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
        if (ec == std::errc() && ptr == num.data() + num.size() && v >= 0.0 && std::isfinite(v)) {
            return ShiftRequest{ShiftMode::Value, v};
        }
    }
    return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

QrOutcome run_algo(const DenseMatrix& x, Algo algo, double shift, const QrOptions& options) {
    switch (algo) {
        case Algo::Cqr: return cholesky_qr(x, options);
        case Algo::Cqr2: return cholesky_qr2(x, options);
        case Algo::Scqr: return shifted_cholesky_qr(x, shift, options);
        case Algo::Scqr3: return shifted_cholesky_qr3(x, shift, options);
    }
    throw InvalidArgument("unknown algorithm");
}

}  // namespace

MatrixContext prepare_matrix(DenseMatrix x, std::string matrix_id, std::string family,
                             double knob, std::optional<std::uint64_t> seed,
                             const ProfileOptions& profile_options) {
    MatrixContext ctx;
    ctx.matrix_id = std::move(matrix_id);
    ctx.family = std::move(family);
    ctx.knob = knob;
    ctx.seed = seed;

    // Timed: profile, [X]_g and the two shift candidates.
    const auto start = Clock::now();
    ctx.profile = profile(x, profile_options);
    const auto cand = shift_candidates(ctx.profile, gnorm(x), x.rows(), x.cols());
    ctx.profile_time_s = seconds_since(start);
    (void)cand;

    ctx.spectral = spectral(x);
    ctx.plan = plan_shift(ctx.profile, ctx.spectral, x.rows(), x.cols());
    ctx.x = std::move(x);
    return ctx;
}

double resolve_shift(const ShiftPlan& plan, const ShiftRequest& request) {
    switch (request.mode) {
        case ShiftMode::Alternative: return plan.s_alt;
        case ShiftMode::Original: return plan.s_orig;
        case ShiftMode::None: return 0.0;
        case ShiftMode::Auto: return plan.s;
        case ShiftMode::Value: return request.value;
    }
    return 0.0;
}

std::vector<double> time_factorization(const DenseMatrix& x, Algo algo, double shift,
                                       std::size_t repeats) {
    QrOptions opts;
    opts.verify_orthogonality = false;
    std::vector<double> times;
    times.reserve(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        auto out = run_algo(x, algo, shift, opts);
        times.push_back(seconds_since(start));
    }
    return times;
}

ExperimentRecord run_experiment(const MatrixContext& ctx, Algo algo, const ShiftRequest& shift,
                                const RunOptions& options) {
    const double s = resolve_shift(ctx.plan, shift);
    if (!is_shifted(algo) && s != 0.0) {
        throw InvalidArgument(std::string(to_string(algo)) + " does not take a shift");
    }
    if (options.repeats == 0) throw InvalidArgument("repeats must be at least 1");
    const std::size_t repeats = options.repeats;
    const std::size_t m = ctx.x.rows();
    const std::size_t n = ctx.x.cols();

    ExperimentRecord rec;
    rec.matrix_id = ctx.matrix_id;
    rec.family = ctx.family;
    rec.m = m;
    rec.n = n;
    rec.kappa_measured = ctx.spectral.kappa2;
    rec.shift_mode = std::string(to_string(is_shifted(algo) ? shift.mode : ShiftMode::None));
    rec.s_value = s;
    rec.profile_time_s = ctx.profile_time_s;
    rec.seed = ctx.seed;
    rec.knob = ctx.knob;

    std::optional<ShiftBranch> family;
    switch (is_shifted(algo) ? shift.mode : ShiftMode::None) {
        case ShiftMode::Alternative: family = ShiftBranch::Alternative; break;
        case ShiftMode::Original: family = ShiftBranch::Original; break;
        case ShiftMode::Auto: family = ctx.plan.branch; break;
        default: break;
    }
    rec.branch = family ? std::string(to_string(*family))
                        : std::string(to_string(is_shifted(algo) ? shift.mode : ShiftMode::None));

    QrOptions timed;
    timed.verify_orthogonality = false;
    std::optional<QrOutcome> first;
    double total = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        auto out = run_algo(ctx.x, algo, s, timed);
        const double dt = seconds_since(start);
        rec.wall_times.push_back(dt);
        total += dt;
        if (!first) first = std::move(out);
    }
    rec.wall_time_s = total / static_cast<double>(repeats);

    if (const auto stage = first->breakdown_stage()) {
        rec.breakdown_stage = *stage;
        return rec;
    }
    if (!first->succeeded) {
        // Completed without a pivot failure but produced non-finite factors;
        // recorded as a breakdown of the last executed stage.
        rec.breakdown_stage = first->stage_log.size();
        return rec;
    }
    const auto met = metrics(ctx.x, *first, ctx.spectral.sigma_max);
    rec.orthogonality = met.orthogonality;
    rec.residual_abs = met.residual_abs;
    rec.residual_rel = met.residual_rel;

    if (options.check_bounds && algo == Algo::Scqr3 && family) {
        QrOptions keep;
        keep.retain_first_stage = true;
        keep.verify_orthogonality = false;
        const auto again = run_algo(ctx.x, algo, s, keep);
        const double kappa_w = spectral(*again.first_stage_q).kappa2;
        try {
            rec.bounds = evaluate_bounds(ctx.plan, ctx.spectral, met, kappa_w, m, n, *family,
                                         first_stage_residual(ctx.x, again));
            rec.bounds_satisfied = rec.bounds->all_satisfied;
        } catch (const BranchMismatch&) {
            // No bound family applies (alternative shift on a profile without
            // dense columns); the column stays empty.
        }
    }
    return rec;
}

std::string matrix_id_for(Family family, std::size_t m, std::size_t n, double knob,
                          std::optional<std::uint64_t> seed) {
    std::string id = fmt::format("{}_m{}_n{}_k{:g}", to_string(family), m, n, knob);
    if (seed) id += fmt::format("_seed{}", *seed);
    return id;
}

std::size_t thread_cap() {
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SCHOLQR_THREADS")) {
        std::size_t v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) {
            cap = std::min(cap, v);
        }
    }
    return cap;
}

std::vector<ExperimentRecord> run_sweep(const SweepSpec& spec) {
    const bool dense = spec.family == Family::DenseSvd;
    std::vector<std::vector<ExperimentRecord>> per_point(spec.knobs.size());

    auto run_point = [&](std::size_t idx) {
        const double knob = spec.knobs[idx];
        const auto seed = dense ? std::optional<std::uint64_t>(spec.seed) : std::nullopt;
        auto x = generate(GenSpec{spec.family, spec.m, spec.n, knob, spec.seed});
        const auto ctx = prepare_matrix(std::move(x), matrix_id_for(spec.family, spec.m, spec.n, knob, seed),
                                        std::string(to_string(spec.family)), knob, seed,
                                        spec.profile_options);
        for (const auto& shift : spec.shifts) {
            per_point[idx].push_back(
                run_experiment(ctx, spec.algo, shift, RunOptions{spec.repeats, spec.check_bounds}));
        }
    };

    const std::size_t workers =
        spec.parallel ? std::min(thread_cap(), std::max<std::size_t>(spec.knobs.size(), 1)) : 1;
    if (workers <= 1) {
        for (std::size_t i = 0; i < spec.knobs.size(); ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < spec.knobs.size(); i = next++) {
                    try {
                        run_point(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<ExperimentRecord> records;
    for (auto& point : per_point) {
        for (auto& rec : point) records.push_back(std::move(rec));
    }
    std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        if (a.family != b.family) return a.family < b.family;
        if (a.knob != b.knob) return a.knob < b.knob;
        return a.shift_mode < b.shift_mode;
    });
    return records;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

template <typename T>
std::string opt(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_same_v<T, double>) {
        return num(*v);
    } else if constexpr (std::is_same_v<T, bool>) {
        return *v ? "true" : "false";
    } else {
        return fmt::format("{}", *v);
    }
}

std::vector<std::string> fields(const ExperimentRecord& r) {
    return {r.matrix_id,
            r.family,
            fmt::format("{}", r.m),
            fmt::format("{}", r.n),
            num(r.kappa_measured),
            r.shift_mode,
            num(r.s_value),
            r.branch,
            opt(r.orthogonality),
            opt(r.residual_abs),
            opt(r.residual_rel),
            opt(r.breakdown_stage),
            opt(r.bounds_satisfied),
            num(r.wall_time_s),
            num(r.profile_time_s),
            opt(r.seed)};
}

std::vector<std::string> header_fields() {
    std::vector<std::string> names;
    std::string_view rest = kCsvHeader;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        names.emplace_back(rest.substr(0, comma));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return names;
}

}  // namespace

std::string csv_row(const ExperimentRecord& rec) {
    const auto f = fields(rec);
    std::string line;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) line += ',';
        line += f[i];
    }
    return line;
}

void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) out << csv_row(r) << '\n';
}

std::string json_line(const ExperimentRecord& rec) {
    using nlohmann::json;
    auto put = [](auto const& v) -> json {
        if (!v) return nullptr;
        return json(*v);
    };
    json j;
    j["matrix_id"] = rec.matrix_id;
    j["family"] = rec.family;
    j["m"] = rec.m;
    j["n"] = rec.n;
    j["kappa_measured"] = rec.kappa_measured;
    j["shift_mode"] = rec.shift_mode;
    j["s_value"] = rec.s_value;
    j["branch"] = rec.branch;
    j["orthogonality"] = put(rec.orthogonality);
    j["residual_abs"] = put(rec.residual_abs);
    j["residual_rel"] = put(rec.residual_rel);
    j["breakdown_stage"] = put(rec.breakdown_stage);
    j["bounds_satisfied"] = put(rec.bounds_satisfied);
    j["wall_time_s"] = rec.wall_time_s;
    j["profile_time_s"] = rec.profile_time_s;
    j["seed"] = put(rec.seed);
    if (rec.bounds) {
        const auto& b = *rec.bounds;
        json jb;
        jb["branch"] = std::string(to_string(b.branch));
        jb["kappa_sufficient"] = b.kappa_sufficient;
        jb["kappa_sufficient_enc"] = put(b.kappa_sufficient_enc);
        jb["kappa_admissible_U"] = b.kappa_admissible_U;
        jb["orth_bound"] = b.orth_bound;
        jb["resid_bound"] = b.resid_bound;
        jb["resid_bound_table_variant"] = put(b.resid_bound_table_variant);
        jb["resid_bound_enc_form"] = put(b.resid_bound_enc_form);
        jb["kappa_w_bound"] = b.kappa_w_bound;
        jb["kappa_w"] = put(b.kappa_w);
        jb["first_stage_resid_bound"] = b.first_stage_resid_bound;
        jb["first_stage_residual"] = put(b.first_stage_residual);
        jb["all_satisfied"] = b.all_satisfied;
        jb["preconditions_met"] = b.preconditions_met;
        jb["violations"] = b.violations;
        j["bounds"] = std::move(jb);
    }
    return j.dump();
}

std::string format_table(const std::vector<ExperimentRecord>& records) {
    const auto names = header_fields();
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : records) rows.push_back(fields(r));
    std::vector<std::size_t> width(names.size());
    for (std::size_t c = 0; c < names.size(); ++c) {
        width[c] = names[c].size();
        for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += "  ";
            out += fmt::format("{:<{}}", row[c], width[c]);
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    };
    emit(names);
    for (const auto& row : rows) emit(row);
    return out;
}

}  // namespace scholqr
