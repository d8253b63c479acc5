// Seeded property sweeps over random instances.
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "scholqr/algos.hpp"
#include "scholqr/errors.hpp"
#include "scholqr/gen.hpp"
#include "scholqr/shift.hpp"
#include "scholqr/sparsity.hpp"
#include "support.hpp"

using namespace scholqr;

namespace {

constexpr int kDraws = 1000;

// Column norm maximum computed straight from the entries.
double column_max_norm(const DenseMatrix& x) {
    double best = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) acc += x(i, j) * x(i, j);
        best = std::max(best, std::sqrt(acc));
    }
    return best;
}

// Random matrix with a random sparsity pattern and a few dense columns.
DenseMatrix random_sparse(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    DenseMatrix x(m, n);
    const double density = 0.05 + 0.3 * coin(rng);
    for (std::size_t j = 0; j < n; ++j) {
        const bool dense = coin(rng) < 0.2;
        for (std::size_t i = 0; i < m; ++i)
            if (dense || coin(rng) < density) x(i, j) = val(rng);
    }
    x(0, 0) = 1.0;
    return x;
}

}  // namespace

TEST_CASE("[.]_g product and triangle inequalities") {
    int violations = 0;
    for (int seed = 0; seed < kDraws; ++seed) {
        const auto a = testsupport::gaussian(20, 8, 2 * seed);
        const auto b = testsupport::gaussian(8, 5, 2 * seed + 1);
        const auto chk = gnorm_of_product_bounds_hold(a, b);
        CHECK_FALSE(chk.triangle);

        // Direct evaluation, independent of the library checker.
        const double ab = column_max_norm(multiply(a, b));
        const double bg = column_max_norm(b);
        const bool spec_ok = ab <= spectral(a).sigma_max * bg * (1 + 1e-12);
        const bool fro_ok = ab <= frobenius_norm(a) * bg * (1 + 1e-12);
        CHECK(chk.spectral_product == spec_ok);
        CHECK(chk.frobenius_product == fro_ok);
        if (!chk.all() || !spec_ok || !fro_ok) ++violations;

        const auto c = testsupport::gaussian(20, 8, 7 * seed + 5);
        if (!gnorm_triangle_holds(a, c)) ++violations;
        const auto sq = testsupport::gaussian(8, 8, 3 * seed + 11);
        const auto both = gnorm_of_product_bounds_hold(sq, sq);
        REQUIRE(both.triangle);
        if (!both.all()) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("[.]_g tight cases") {
    DenseMatrix e(2, 2);
    e(0, 0) = 1.0;
    const auto chk = gnorm_of_product_bounds_hold(e, e);
    CHECK(chk.all());
    CHECK(gnorm(add(e, e)) == gnorm(e) + gnorm(e));
    const auto b = testsupport::gaussian(6, 3, 1);
    CHECK(gnorm(multiply(DenseMatrix::identity(6), b)) == gnorm(b));
    CHECK_THROWS_AS(gnorm_of_product_bounds_hold(b, b), ShapeError);
    CHECK_THROWS_AS(gnorm_triangle_holds(b, e), ShapeError);
}

TEST_CASE("p = [X]_g / ||X||_2 lies in [1/sqrt(n), 1]") {
    int violations = 0;
    for (int seed = 0; seed < kDraws; ++seed) {
        const auto x = testsupport::gaussian(20, 8, 2 * seed);
        const auto s = spectral(x);
        const double p = s.gnorm / s.sigma_max;
        if (p < 1.0 / std::sqrt(8.0) * (1 - 1e-12) || p > 1.0 + 1e-12) ++violations;
        if (s.gnorm > s.fro * (1 + 1e-15) || s.fro > std::sqrt(8.0) * s.gnorm * (1 + 1e-15))
            ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("cholesky_qr agrees with a reference orthogonalization on small instances") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> ncols(1, 8);
    std::uniform_real_distribution<double> logk(0.0, 3.0);
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = ncols(rng);
        const std::size_t m = std::uniform_int_distribution<std::size_t>(n, 50)(rng);
        const double kappa = std::pow(10.0, logk(rng));
        const auto x = testsupport::with_condition(m, n, kappa, trial);
        const auto out = cholesky_qr(x);
        REQUIRE(out.succeeded);
        const auto ref = testsupport::mgs2(x);
        worst = std::max(worst, testsupport::max_abs_diff(*out.q, ref.q));
        // Householder R with signs flipped to a positive diagonal.
        const auto hh = householder_qr(x);
        auto q = hh.q;
        for (std::size_t j = 0; j < n; ++j)
            if (hh.r(j, j) < 0)
                for (auto& v : q.col(j)) v = -v;
        worst = std::max(worst, testsupport::max_abs_diff(*out.q, q));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("shift zero bit-equals cholesky_qr on random inputs") {
    for (int seed = 0; seed < 200; ++seed) {
        const auto x = testsupport::gaussian(30 + seed % 20, 1 + seed % 8, seed);
        const auto a = cholesky_qr(x);
        const auto b = shifted_cholesky_qr(x, 0.0);
        REQUIRE(a.succeeded == b.succeeded);
        if (a.succeeded) {
            REQUIRE(*a.q == *b.q);
            REQUIRE(*a.r == *b.r);
        }
    }
}

TEST_CASE("T2 instances select Original and satisfy t2 c^2 >= [X]_g^2") {
    // Columns h, h+1 hold 3 of every n rows; below n = 16 they pass the
    // default dense cutoff and the instance is no longer T2.
    for (std::size_t n : {16, 32, 64, 128}) {
        for (std::size_t copies : {1, 4, 32}) {
            for (double b : {1e-1, 1e-5, 1e-9, 1e-13}) {
                const auto x = gen_block_t2(n * copies, n, b);
                const auto prof = profile(x);
                REQUIRE(prof.kind == SparsityKind::T2);
                const auto spec = spectral(x);
                CHECK(prof.t2 * prof.c * prof.c >= spec.gnorm * spec.gnorm);
                CHECK(plan_shift(prof, spec, x.rows(), n).branch == ShiftBranch::Original);
            }
        }
    }
    // Stacked identities and random sparse matrices without a dense column.
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = random_sparse(rng, 60, 10);
        const auto prof = profile(x);
        if (prof.kind != SparsityKind::T2) continue;
        const auto spec = spectral(x);
        CHECK(prof.t2 * prof.c * prof.c >= spec.gnorm * spec.gnorm);
        CHECK(plan_shift(prof, spec, 60, 10).branch == ShiftBranch::Original);
    }
}

TEST_CASE("c^2 (v t1 + n t2) bounds ||X||_F^2") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const auto x = random_sparse(rng, 40, 8);
        const auto prof = profile(x);
        const double f = frobenius_norm(x);
        CHECK(prof.c * prof.c * prof.weighted_nnz() >= f * f * (1 - 1e-14));
    }
}

TEST_CASE("profile is permutation equivariant and scale invariant") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_sparse(rng, 50, 6);
        std::vector<std::size_t> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        DenseMatrix y(50, 6);
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t i = 0; i < 50; ++i) y(i, j) = x(i, perm[j]);
        const auto px = profile(x);
        const auto py = profile(y);
        CHECK(px.v == py.v);
        CHECK(px.t1 == py.t1);
        CHECK(px.t2 == py.t2);
        CHECK(px.c == py.c);
        CHECK(px.kind == py.kind);
        for (std::size_t j = 0; j < 6; ++j) CHECK(py.nnz_per_column[j] == px.nnz_per_column[perm[j]]);

        const auto ps = profile(scaled(x, 3.5));
        CHECK(ps.v == px.v);
        CHECK(ps.t1 == px.t1);
        CHECK(ps.t2 == px.t2);
        CHECK(ps.kind == px.kind);
        CHECK(ps.c == 3.5 * px.c);
    }
}

TEST_CASE("s_orig / [X]_g^2 is the size formula") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_sparse(rng, 64, 8);
        const auto prof = profile(x);
        const auto spec = spectral(x);
        const auto plan = plan_shift(prof, spec, 64, 8);
        const double u = kUnitRoundoff;
        CHECK(plan.s_orig / (spec.gnorm * spec.gnorm) ==
              Catch::Approx(11.0 * (64.0 * 8 * u + 8.0 * 9 * u)).epsilon(1e-15));
        if (prof.kind == SparsityKind::T1) CHECK(plan.window_ok == (plan.s <= plan.j_b));
    }
}

TEST_CASE("tri_solve_rows with the identity is exact") {
    const auto x = testsupport::gaussian(25, 5, 3);
    const auto eye = UpperTriangular::from_dense(DenseMatrix::identity(5));
    CHECK(tri_solve_rows(x, eye) == x);
}

TEST_CASE("factorizations are deterministic") {
    const auto x = gen_arrowhead_t1(512, 32, 1e-8);
    const auto a = sparse_scholqr3(x);
    const auto b = sparse_scholqr3(x);
    CHECK(a.plan.s == b.plan.s);
    CHECK(*a.outcome.q == *b.outcome.q);
    CHECK(*a.outcome.r == *b.outcome.r);
}
