// scholqr: generate test matrices, factor Matrix Market files and run
// conditioning sweeps.
//
// Exit codes: 0 ok, 2 usage, 3 I/O, 4 breakdown under --strict.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "scholqr/bench.hpp"
#include "scholqr/errors.hpp"
#include "scholqr/gen.hpp"
#include "scholqr/matrix_market.hpp"
#include "scholqr/sparsity.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitBreakdown = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

scholqr::Family family_arg(const std::string& name) {
    auto f = scholqr::parse_family(name);
    if (!f) throw UsageError("unknown family '" + name + "' (expected t1, t2 or dense)");
    return *f;
}

scholqr::Algo algo_arg(const std::string& name) {
    auto a = scholqr::parse_algo(name);
    if (!a) throw UsageError("unknown algorithm '" + name + "' (expected cqr, cqr2, scqr or scqr3)");
    return *a;
}

scholqr::ShiftRequest shift_arg(const std::string& text) {
    auto s = scholqr::parse_shift(text);
    if (!s) {
        throw UsageError("unknown shift '" + text +
                         "' (expected auto, alternative, original, none or value:<s>)");
    }
    return *s;
}

std::string profile_line(const scholqr::SparsityProfile& p) {
    return fmt::format("v={},t1={},t2={},c={:g},kind={}", p.v, p.t1, p.t2, p.c,
                       scholqr::to_string(p.kind));
}

void print_bounds(const scholqr::BoundReport& b) {
    auto opt = [](const std::optional<double>& v) {
        return v ? fmt::format("{:.6e}", *v) : std::string("-");
    };
    fmt::print("bounds ({})\n", scholqr::to_string(b.branch));
    fmt::print("  orthogonality      {:.6e} <= {:.6e}\n", b.orthogonality, b.orth_bound);
    fmt::print("  residual           {:.6e} <= {:.6e}\n", b.residual_abs, b.resid_bound);
    if (b.resid_bound_table_variant) {
        fmt::print("  residual (4.87)    {}\n", opt(b.resid_bound_table_variant));
    }
    if (b.resid_bound_enc_form) {
        fmt::print("  residual (beta)    {}\n", opt(b.resid_bound_enc_form));
    }
    fmt::print("  kappa(W)           {} <= {:.6e}\n", opt(b.kappa_w), b.kappa_w_bound);
    fmt::print("  first pass resid   {} <= {:.6e}\n", opt(b.first_stage_residual),
               b.first_stage_resid_bound);
    fmt::print("  kappa sufficient   {:.6e}", b.kappa_sufficient);
    if (b.kappa_sufficient_enc) fmt::print(" (enc {:.6e})", *b.kappa_sufficient_enc);
    fmt::print("\n  kappa ceiling U    {:.6e}\n", b.kappa_admissible_U);
    fmt::print("  all satisfied      {}\n", b.all_satisfied);
    fmt::print("  preconditions met  {}\n", b.preconditions_met);
    for (const auto& v : b.violations) fmt::print("  violation: {}\n", v);
}

int run_gen(const std::string& family, std::size_t m, std::size_t n, double knob,
            std::uint64_t seed, const std::string& out) {
    const auto fam = family_arg(family);
    scholqr::DenseMatrix x;
    try {
        x = scholqr::generate(scholqr::GenSpec{fam, m, n, knob, seed});
    } catch (const scholqr::InvalidArgument& e) {
        throw UsageError(e.what());
    }
    const auto layout = fam == scholqr::Family::DenseSvd ? scholqr::MmLayout::Array
                                                         : scholqr::MmLayout::Coordinate;
    scholqr::write_matrix_market(x, std::filesystem::path(out), layout);
    fmt::print("{}\n", profile_line(scholqr::profile(x)));
    return kExitOk;
}

struct FactorArgs {
    std::string in;
    std::string algo = "scqr3";
    std::optional<std::string> shift;
    bool check_bounds = false;
    bool json = false;
    bool strict = false;
    std::size_t repeats = 1;
    scholqr::ProfileOptions profile;
};

int run_factor(const FactorArgs& a) {
    const auto algo = algo_arg(a.algo);
    const auto shift = shift_arg(a.shift.value_or(scholqr::is_shifted(algo) ? "auto" : "none"));
    if (!scholqr::is_shifted(algo) && shift.mode != scholqr::ShiftMode::None &&
        !(shift.mode == scholqr::ShiftMode::Value && shift.value == 0.0)) {
        throw UsageError(fmt::format("{} does not take a shift", scholqr::to_string(algo)));
    }
    auto x = scholqr::read_matrix_market(std::filesystem::path(a.in));
    if (x.rows() < x.cols() || x.cols() == 0) {
        throw UsageError(fmt::format("need a tall-skinny matrix, got {}x{}", x.rows(), x.cols()));
    }
    const auto ctx = scholqr::prepare_matrix(std::move(x), std::filesystem::path(a.in).stem().string(),
                                             "file", 0.0, std::nullopt, a.profile);
    const auto rec = scholqr::run_experiment(ctx, algo, shift,
                                             scholqr::RunOptions{a.repeats, a.check_bounds});
    if (a.json) {
        auto shown = rec;
        if (!a.check_bounds) shown.bounds.reset();
        fmt::print("{}\n", scholqr::json_line(shown));
    } else {
        fmt::print("{}", scholqr::format_table({rec}));
        if (a.check_bounds) {
            if (rec.bounds) {
                print_bounds(*rec.bounds);
            } else {
                fmt::print("bounds: not applicable for this algorithm/shift\n");
            }
        }
    }
    if (a.strict && rec.breakdown_stage) return kExitBreakdown;
    return kExitOk;
}

struct BenchArgs {
    std::string family = "t1";
    std::size_t m = 2048;
    std::size_t n = 64;
    std::vector<double> knobs;
    std::vector<std::string> shifts{"alternative", "original"};
    std::size_t repeats = 1;
    std::optional<std::string> out;
    std::uint64_t seed = 0;
    std::string algo = "scqr3";
    bool parallel = false;
    bool no_bounds = false;
    scholqr::ProfileOptions profile;
};

int run_bench(const BenchArgs& a) {
    scholqr::SweepSpec spec;
    spec.family = family_arg(a.family);
    spec.m = a.m;
    spec.n = a.n;
    spec.knobs = a.knobs;
    for (const auto& s : a.shifts) spec.shifts.push_back(shift_arg(s));
    spec.repeats = a.repeats;
    spec.seed = a.seed;
    spec.algo = algo_arg(a.algo);
    spec.parallel = a.parallel;
    spec.check_bounds = !a.no_bounds;
    spec.profile_options = a.profile;
    if (spec.repeats == 0) throw UsageError("--repeats must be at least 1");
    if (!scholqr::is_shifted(spec.algo)) {
        for (const auto& s : spec.shifts) {
            if (s.mode != scholqr::ShiftMode::None) {
                throw UsageError(fmt::format("{} only accepts --shifts none", a.algo));
            }
        }
    }

    // Open the output before the sweep so an unwritable path fails fast.
    std::ofstream file;
    if (a.out) {
        file.open(*a.out);
        if (!file) throw scholqr::IoError("cannot open '" + *a.out + "' for writing");
    }
    std::vector<scholqr::ExperimentRecord> records;
    try {
        records = scholqr::run_sweep(spec);
    } catch (const scholqr::InvalidArgument& e) {
        throw UsageError(e.what());
    }
    if (a.out) {
        scholqr::write_csv(records, file);
        file.flush();
        if (!file) throw scholqr::IoError("write to '" + *a.out + "' failed");
        fmt::print("{}", scholqr::format_table(records));
    } else {
        scholqr::write_csv(records, std::cout);
    }
    return kExitOk;
}

void add_profile_options(CLI::App* cmd, scholqr::ProfileOptions& p) {
    cmd->add_option("--zero-tol", p.zero_tol, "entries with |x| <= tol count as zero")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--dense-fraction", p.dense_fraction,
                    "a column is dense when nnz >= fraction * rows")
        ->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shifted CholeskyQR toolkit"};
    app.require_subcommand(1);

    std::string gen_family;
    std::size_t gen_m = 2048, gen_n = 64;
    double gen_knob = 0.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "write a generated test matrix as Matrix Market");
    gen->add_option("--family", gen_family, "t1, t2 or dense")->required();
    gen->add_option("--m", gen_m, "rows");
    gen->add_option("--n", gen_n, "columns");
    gen->add_option("--knob", gen_knob, "a (t1), b (t2) or sigma (dense)")->required();
    gen->add_option("--seed", gen_seed, "RNG seed (dense only)");
    gen->add_option("--out", gen_out, "output path")->required();

    FactorArgs fa;
    auto* factor = app.add_subcommand("factor", "factor a Matrix Market file");
    factor->add_option("--in", fa.in, "input path")->required();
    factor->add_option("--algo", fa.algo, "cqr, cqr2, scqr or scqr3");
    factor->add_option("--shift", fa.shift,
                       "auto, alternative, original, none or value:<s> "
                       "(default auto for shifted algorithms, none otherwise)");
    factor->add_flag("--check-bounds", fa.check_bounds, "evaluate the error bounds");
    factor->add_flag("--json", fa.json, "print one JSON object per line");
    factor->add_flag("--strict", fa.strict, "exit 4 on breakdown");
    factor->add_option("--repeats", fa.repeats, "timed repetitions")->check(CLI::PositiveNumber);
    add_profile_options(factor, fa.profile);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "sweep a conditioning knob and write CSV");
    bench->add_option("--family", ba.family, "t1, t2 or dense")->required();
    bench->add_option("--m", ba.m, "rows");
    bench->add_option("--n", ba.n, "columns");
    bench->add_option("--knobs", ba.knobs, "comma separated knob values")
        ->required()
        ->delimiter(',');
    bench->add_option("--shifts", ba.shifts, "comma separated shift modes")->delimiter(',');
    bench->add_option("--repeats", ba.repeats, "timed repetitions per point");
    bench->add_option("--out", ba.out, "CSV path (stdout when absent)");
    bench->add_option("--seed", ba.seed, "RNG seed (dense only)");
    bench->add_option("--algo", ba.algo, "cqr, cqr2, scqr or scqr3");
    bench->add_flag("--parallel", ba.parallel, "run sweep points concurrently");
    bench->add_flag("--no-bounds", ba.no_bounds, "skip the bound evaluation");
    add_profile_options(bench, ba.profile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) return run_gen(gen_family, gen_m, gen_n, gen_knob, gen_seed, gen_out);
        if (*factor) return run_factor(fa);
        if (*bench) return run_bench(ba);
    } catch (const UsageError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const scholqr::IoError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitIo;
    } catch (const scholqr::ParseError& e) {
        fmt::print(stderr, "error: {}: {}\n", fa.in, e.what());
        return kExitIo;
    } catch (const scholqr::UnsupportedField& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitIo;
    } catch (const scholqr::Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
