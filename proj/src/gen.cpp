#include "scholqr/gen.hpp"

#include <cmath>
#include <random>

#include "scholqr/errors.hpp"

namespace scholqr {

std::string_view to_string(Family family) {
    switch (family) {
        case Family::ArrowheadT1: return "t1";
        case Family::BlockT2: return "t2";
        case Family::DenseSvd: return "dense";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view name) {
    if (name == "t1") return Family::ArrowheadT1;
    if (name == "t2") return Family::BlockT2;
    if (name == "dense") return Family::DenseSvd;
    return std::nullopt;
}

namespace {

void check_block_shape(std::size_t m, std::size_t n, double knob, const char* what) {
    if (n < 4 || n % 2 != 0) {
        throw InvalidArgument(std::string(what) + ": n must be even and at least 4");
    }
    if (m < n || m % n != 0) {
        throw InvalidArgument(std::string(what) + ": m must be a positive multiple of n");
    }
    if (!(knob > 0.0) || !std::isfinite(knob)) {
        throw InvalidArgument(std::string(what) + ": conditioning knob must be positive");
    }
}

// top for i < n/2, then top * (knob/top)^((i - n/2) / (n/2 - 1)).
std::vector<double> decaying_diagonal(std::size_t n, double top, double knob) {
    const std::size_t half = n / 2;
    std::vector<double> d(n, top);
    const double ratio = knob / top;
    for (std::size_t i = half; i < n; ++i) {
        const double t = static_cast<double>(i - half) / static_cast<double>(half - 1);
        d[i] = top * std::pow(ratio, t);
    }
    return d;
}

DenseMatrix stack_blocks(const DenseMatrix& k, std::size_t m) {
    const std::size_t n = k.rows();
    DenseMatrix x(m, k.cols());
    for (std::size_t j = 0; j < k.cols(); ++j) {
        for (std::size_t b = 0; b < m / n; ++b) {
            for (std::size_t i = 0; i < n; ++i) {
                x(b * n + i, j) = k(i, j);
            }
        }
    }
    return x;
}

}  // namespace

DenseMatrix gen_arrowhead_t1(std::size_t m, std::size_t n, double a) {
    check_block_shape(m, n, a, "gen_arrowhead_t1");
    const auto p = decaying_diagonal(n, 3.0, a);
    DenseMatrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = p[i];
    }
    for (std::size_t j = 1; j < n; ++j) {
        k(0, j) += -5.0;
        k(j, 0) += -10.0;
    }
    return stack_blocks(k, m);
}

DenseMatrix gen_block_t2(std::size_t m, std::size_t n, double b) {
    check_block_shape(m, n, b, "gen_block_t2");
    const auto f = decaying_diagonal(n, 10.0, b);
    DenseMatrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = f[i];
    }
    const std::size_t h = n / 2;  // rows h-1 and h, zero-based
    for (std::size_t j = 1; j < n; ++j) {
        k(h - 1, j) += 10.0;
        k(h, j) += 10.0;
    }
    return stack_blocks(k, m);
}

DenseMatrix gen_dense_svd(std::size_t m, std::size_t n, double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0 && sigma < 1.0)) {
        throw InvalidArgument("gen_dense_svd: sigma must lie in (0, 1)");
    }
    if (n < 2 || m < n) {
        throw InvalidArgument("gen_dense_svd: need m >= n >= 2");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto gaussian = [&](std::size_t rows, std::size_t cols) {
        DenseMatrix g(rows, cols);
        for (auto& v : g.data()) {
            v = normal(rng);
        }
        return g;
    };
    const DenseMatrix o = householder_qr(gaussian(m, n)).q;
    const DenseMatrix h = householder_qr(gaussian(n, n)).q;

    // (O Sigma) H^T
    DenseMatrix os = o;
    for (std::size_t j = 0; j < n; ++j) {
        const double sj =
            std::pow(sigma, static_cast<double>(j) / static_cast<double>(n - 1));
        for (double& v : os.col(j)) {
            v *= sj;
        }
    }
    DenseMatrix ht(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ht(j, i) = h(i, j);
        }
    }
    return multiply(os, ht);
}

DenseMatrix generate(const GenSpec& spec) {
    switch (spec.family) {
        case Family::ArrowheadT1: return gen_arrowhead_t1(spec.m, spec.n, spec.knob);
        case Family::BlockT2: return gen_block_t2(spec.m, spec.n, spec.knob);
        case Family::DenseSvd: return gen_dense_svd(spec.m, spec.n, spec.knob, spec.seed);
    }
    throw InvalidArgument("unknown family");
}

}  // namespace scholqr
