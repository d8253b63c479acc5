// Helpers shared by the unit tests: seeded random matrices and a reference
// orthogonalization (modified Gram-Schmidt, two passes) that shares no code
// with the library kernels.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "scholqr/matcore.hpp"

namespace testsupport {

inline scholqr::DenseMatrix gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    scholqr::DenseMatrix x(m, n);
    for (auto& v : x.data()) v = normal(rng);
    return x;
}

struct MgsResult {
    scholqr::DenseMatrix q;
    scholqr::DenseMatrix r;  // n x n, upper
};

// Thin QR by MGS with one reorthogonalization pass; diag(R) > 0 for full
// column rank input.
inline MgsResult mgs2(const scholqr::DenseMatrix& x) {
    const std::size_t m = x.rows(), n = x.cols();
    scholqr::DenseMatrix q = x;
    scholqr::DenseMatrix r(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < m; ++i) dot += q(i, k) * q(i, j);
                for (std::size_t i = 0; i < m; ++i) q(i, j) -= dot * q(i, k);
                r(k, j) += dot;
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += q(i, j) * q(i, j);
        nrm = std::sqrt(nrm);
        r(j, j) = nrm;
        for (std::size_t i = 0; i < m; ++i) q(i, j) /= nrm;
    }
    return {q, r};
}

// m x n with singular values spaced geometrically from 1 down to 1/kappa.
inline scholqr::DenseMatrix with_condition(std::size_t m, std::size_t n, double kappa,
                                           std::uint64_t seed) {
    const auto u = mgs2(gaussian(m, n, seed)).q;
    const auto v = mgs2(gaussian(n, n, seed + 7919)).q;
    scholqr::DenseMatrix us = u;
    for (std::size_t j = 0; j < n; ++j) {
        const double s = n == 1 ? 1.0 : std::pow(kappa, -static_cast<double>(j) / (n - 1));
        for (auto& e : us.col(j)) e *= s;
    }
    scholqr::DenseMatrix x(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += us(i, k) * v(j, k);
            x(i, j) = acc;
        }
    return x;
}

inline double max_abs_diff(const scholqr::DenseMatrix& a, const scholqr::DenseMatrix& b) {
    double d = 0.0;
    for (std::size_t t = 0; t < a.data().size(); ++t) d = std::max(d, std::abs(a.data()[t] - b.data()[t]));
    return d;
}

}  // namespace testsupport
