/*
 * Dense column-major kernels used by the CholeskyQR family.
 *
 * Products and factorizations run the textbook recurrences in natural index
 * order with plain rounded arithmetic (no FMA contraction, no compensated
 * summation).  The one exception is the row sum of the Gram product, which
 * is accumulated pairwise over blocks of kGramLeafRows rows; see gram().
 * Unit roundoff is fixed at 2^-53.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace scholqr {

/// Unit roundoff of IEEE double precision.
inline constexpr double kUnitRoundoff = 0x1p-53;

/// Column-major real matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    /// Zero-filled rows x cols matrix.
    DenseMatrix(std::size_t rows, std::size_t cols);

    /// Wraps column-major data; throws ShapeError on size mismatch and
    /// InvalidArgument when an entry is NaN or infinite.
    static DenseMatrix from_column_major(std::size_t rows, std::size_t cols,
                                         std::vector<double> data);
    /// Row-major nested initializer, for tests and small fixtures.
    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    bool all_finite() const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Square upper-triangular factor.  Strictly-lower entries are zero and
/// cannot be written.
class UpperTriangular {
public:
    UpperTriangular() = default;
    explicit UpperTriangular(std::size_t order);

    static UpperTriangular identity(std::size_t order);
    /// Throws InvalidArgument if `m` is not square or has a nonzero below
    /// the diagonal.
    static UpperTriangular from_dense(const DenseMatrix& m);

    std::size_t order() const noexcept { return order_; }

    double operator()(std::size_t i, std::size_t j) const {
        return i > j ? 0.0 : data_[j * order_ + i];
    }
    /// Reference to entry (i, j) with i <= j.
    double& at(std::size_t i, std::size_t j) { return data_[j * order_ + i]; }

    bool has_positive_diagonal() const;
    DenseMatrix to_dense() const;

    friend bool operator==(const UpperTriangular&, const UpperTriangular&) = default;

private:
    std::size_t order_ = 0;
    std::vector<double> data_;
};

struct Breakdown {
    std::size_t pivot_index;  // zero-based
    double pivot_value;
};

using CholeskyResult = std::variant<UpperTriangular, Breakdown>;

inline constexpr std::size_t kGramLeafRows = 16;

/// Upper triangle of X^T X, mirrored.  Rows are split into leaves of at most
/// kGramLeafRows rows, each leaf is summed in ascending row order and leaf
/// sums are combined as a balanced binary tree.  With plain left-to-right
/// accumulation over all rows the stacked test matrices lose about a decimal
/// digit of orthogonality.
DenseMatrix gram(const DenseMatrix& x);

/// Right-looking unblocked Cholesky G = R^T R of the upper triangle of G.
/// Row k is scaled by 1/r_kk (one reciprocal, then products), as LAPACK's
/// unblocked dpotf2 does.
/// A pivot that is <= 0 or not finite stops the elimination and is returned
/// as Breakdown; there is no pivot rescue.
CholeskyResult cholesky(const DenseMatrix& g);

/// Solves q_i^T R = x_i^T for every row by forward substitution on the
/// columns of R.  Throws SingularFactor on a zero diagonal entry.
DenseMatrix tri_solve_rows(const DenseMatrix& x, const UpperTriangular& r);

/// Products in natural summation order.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply(const DenseMatrix& a, const UpperTriangular& r);
UpperTriangular multiply(const UpperTriangular& a, const UpperTriangular& b);

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scaled(const DenseMatrix& a, double alpha);

double frobenius_norm(const DenseMatrix& a);
/// Euclidean norm of every column.
std::vector<double> column_norms(const DenseMatrix& a);
/// Largest Euclidean column norm, written [A]_g in the analysis.
double gnorm(const DenseMatrix& a);
/// Largest absolute entry.
double max_abs(const DenseMatrix& a);

/// ||Q^T Q - I||_F.
double orthogonality_error(const DenseMatrix& q);

// Householder QR (m >= n) normalised so that diag(R) >= 0.  Used to draw
// random orthogonal factors and to precondition the singular value solver.
struct HouseholderQr {
    DenseMatrix q;  // m x n, orthonormal columns
    UpperTriangular r;
};
HouseholderQr householder_qr(const DenseMatrix& a);

/// Singular values in non-increasing order, via Householder QR followed by
/// one-sided Jacobi on the triangular factor.  Accepts any shape.
std::vector<double> singular_values(const DenseMatrix& a);

struct SpectralSummary {
    double sigma_max = 0.0;  // ||X||_2
    double sigma_min = 0.0;
    double kappa2 = 0.0;     // +inf when sigma_min == 0
    double gnorm = 0.0;
    double fro = 0.0;
    /// sigma_min <= sigma_max * 2^-52 * max(rows, cols).
    bool rank_deficient = false;
};

/// Throws InvalidArgument for an all-zero or non-finite matrix.
SpectralSummary spectral(const DenseMatrix& x);

struct GnormBoundCheck {
    bool spectral_product;                   // [AB]_g <= ||A||_2 [B]_g
    bool frobenius_product;                  // [AB]_g <= ||A||_F [B]_g
    std::optional<bool> triangle;            // [A+B]_g <= [A]_g + [B]_g, same shape only
    bool all() const { return spectral_product && frobenius_product && triangle.value_or(true); }
};

/// Evaluates the [.]_g product and triangle inequalities with 1e-12
/// relative slack.  Throws ShapeError if A.cols() != B.rows().
GnormBoundCheck gnorm_of_product_bounds_hold(const DenseMatrix& a, const DenseMatrix& b);

/// [A+B]_g <= [A]_g + [B]_g with the same slack; ShapeError unless shapes match.
bool gnorm_triangle_holds(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace scholqr
