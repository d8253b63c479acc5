// Seeded generators for the three test families.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "scholqr/matcore.hpp"

namespace scholqr {

enum class Family { ArrowheadT1, BlockT2, DenseSvd };

std::string_view to_string(Family family);
/// Accepts "t1", "t2", "dense"; nullopt otherwise.
std::optional<Family> parse_family(std::string_view name);

struct GenSpec {
    Family family = Family::ArrowheadT1;
    std::size_t m = 2048;
    std::size_t n = 64;
    double knob = 3e-6;  // a, b or sigma depending on family
    std::uint64_t seed = 0;
};

/// Vertical stack of m/n copies of K = -5 e1 f^T - 10 f e1^T + P, where
/// f = (0, 1, ..., 1) and P = diag(3, ..., 3, 3 (a/3)^t, ...) decays
/// geometrically from 3 to a over its second half.  Column 0 is dense.
/// Needs n even, n >= 4 and m a multiple of n.
DenseMatrix gen_arrowhead_t1(std::size_t m, std::size_t n, double a);

/// Vertical stack of m/n copies of K = 10 e_h f^T + 10 e_{h+1} f^T + F with
/// h = n/2 (1-based) and F the analogue of P running from 10 down to b.
/// No column is dense.
DenseMatrix gen_block_t2(std::size_t m, std::size_t n, double b);

/// O Sigma H^T with O (m x n) and H (n x n) orthonormal factors of seeded
/// Gaussian matrices and Sigma = diag(1, sigma^{1/(n-1)}, ..., sigma), so
/// ||X||_2 = 1 and kappa_2 = 1/sigma up to rounding.
DenseMatrix gen_dense_svd(std::size_t m, std::size_t n, double sigma, std::uint64_t seed);

DenseMatrix generate(const GenSpec& spec);

}  // namespace scholqr
