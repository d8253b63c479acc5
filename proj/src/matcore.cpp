#include "scholqr/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "scholqr/errors.hpp"

namespace scholqr {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix DenseMatrix::from_column_major(std::size_t rows, std::size_t cols,
                                           std::vector<double> data) {
    if (data.size() != rows * cols) {
        throw ShapeError("column-major buffer has " + std::to_string(data.size()) +
                         " entries, expected " + std::to_string(rows * cols));
    }
    DenseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.data_ = std::move(data);
    if (!m.all_finite()) {
        throw InvalidArgument("matrix entries must be finite");
    }
    return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.front().size();
    std::vector<double> data(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != n) {
            throw ShapeError("ragged row " + std::to_string(i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            data[j * m + i] = rows[i][j];
        }
    }
    return from_column_major(m, n, std::move(data));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

bool DenseMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

UpperTriangular::UpperTriangular(std::size_t order) : order_(order), data_(order * order, 0.0) {}

UpperTriangular UpperTriangular::identity(std::size_t order) {
    UpperTriangular r(order);
    for (std::size_t i = 0; i < order; ++i) {
        r.at(i, i) = 1.0;
    }
    return r;
}

UpperTriangular UpperTriangular::from_dense(const DenseMatrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("triangular factor must be square");
    }
    UpperTriangular r(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i > j) {
                if (m(i, j) != 0.0) {
                    throw InvalidArgument("nonzero entry below the diagonal");
                }
            } else {
                r.at(i, j) = m(i, j);
            }
        }
    }
    return r;
}

bool UpperTriangular::has_positive_diagonal() const {
    for (std::size_t i = 0; i < order_; ++i) {
        if (!((*this)(i, i) > 0.0)) {
            return false;
        }
    }
    return true;
}

DenseMatrix UpperTriangular::to_dense() const {
    DenseMatrix m(order_, order_);
    for (std::size_t j = 0; j < order_; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            m(i, j) = (*this)(i, j);
        }
    }
    return m;
}

namespace {

// Row-major upper triangle of the partial Gram product over rows [lo, hi).
std::vector<double> gram_rows(const DenseMatrix& x, std::size_t lo, std::size_t hi) {
    const std::size_t n = x.cols();
    std::vector<double> upper(n * n, 0.0);
    if (hi - lo > kGramLeafRows) {
        const std::size_t mid = lo + (hi - lo) / 2;
        upper = gram_rows(x, lo, mid);
        const auto right = gram_rows(x, mid, hi);
        for (std::size_t t = 0; t < upper.size(); ++t) {
            upper[t] += right[t];
        }
        return upper;
    }
    std::vector<double> row(n);
    for (std::size_t k = lo; k < hi; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = x(k, j);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = row[i];
            double* g = upper.data() + i * n;
            for (std::size_t j = i; j < n; ++j) {
                g[j] += xi * row[j];
            }
        }
    }
    return upper;
}

}  // namespace

DenseMatrix gram(const DenseMatrix& x) {
    const std::size_t n = x.cols();
    const auto upper = gram_rows(x, 0, x.rows());
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            g(i, j) = upper[i * n + j];
            g(j, i) = upper[i * n + j];
        }
    }
    return g;
}

CholeskyResult cholesky(const DenseMatrix& g) {
    if (g.rows() != g.cols()) {
        throw ShapeError("cholesky needs a square matrix");
    }
    const std::size_t n = g.rows();
    // Working copy of the upper triangle, row-major: a[i*n + j], j >= i.
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            a[i * n + j] = g(i, j);
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double pivot = a[k * n + k];
        if (!(pivot > 0.0) || !std::isfinite(pivot)) {
            return Breakdown{k, pivot};
        }
        const double rkk = std::sqrt(pivot);
        a[k * n + k] = rkk;
        const double inv = 1.0 / rkk;
        for (std::size_t j = k + 1; j < n; ++j) {
            a[k * n + j] *= inv;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double rki = a[k * n + i];
            double* ai = a.data() + i * n;
            const double* rk = a.data() + k * n;
            for (std::size_t j = i; j < n; ++j) {
                ai[j] -= rki * rk[j];
            }
        }
    }
    UpperTriangular r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            r.at(i, j) = a[i * n + j];
        }
    }
    return r;
}

DenseMatrix tri_solve_rows(const DenseMatrix& x, const UpperTriangular& r) {
    const std::size_t n = r.order();
    if (x.cols() != n) {
        throw ShapeError("tri_solve_rows: X has " + std::to_string(x.cols()) +
                         " columns but R has order " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (r(j, j) == 0.0) {
            throw SingularFactor(j);
        }
    }
    // Column sweep of the row-wise substitution: for every row i,
    // q(i,j) = (x(i,j) - sum_{k<j} q(i,k) r(k,j)) / r(j,j) with k ascending.
    DenseMatrix q = x;
    const std::size_t m = x.rows();
    for (std::size_t j = 0; j < n; ++j) {
        auto qj = q.col(j);
        for (std::size_t k = 0; k < j; ++k) {
            const double rkj = r(k, j);
            const auto qk = q.col(k);
            for (std::size_t i = 0; i < m; ++i) {
                qj[i] -= qk[i] * rkj;
            }
        }
        const double rjj = r(j, j);
        for (std::size_t i = 0; i < m; ++i) {
            qj[i] /= rjj;
        }
    }
    return q;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("multiply: inner dimensions differ");
    }
    const std::size_t m = a.rows();
    DenseMatrix c(m, b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto cj = c.col(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            const auto ak = a.col(k);
            for (std::size_t i = 0; i < m; ++i) {
                cj[i] += ak[i] * bkj;
            }
        }
    }
    return c;
}

DenseMatrix multiply(const DenseMatrix& a, const UpperTriangular& r) {
    if (a.cols() != r.order()) {
        throw ShapeError("multiply: inner dimensions differ");
    }
    const std::size_t m = a.rows();
    DenseMatrix c(m, r.order());
    for (std::size_t j = 0; j < r.order(); ++j) {
        auto cj = c.col(j);
        for (std::size_t k = 0; k <= j; ++k) {
            const double rkj = r(k, j);
            const auto ak = a.col(k);
            for (std::size_t i = 0; i < m; ++i) {
                cj[i] += ak[i] * rkj;
            }
        }
    }
    return c;
}

UpperTriangular multiply(const UpperTriangular& a, const UpperTriangular& b) {
    if (a.order() != b.order()) {
        throw ShapeError("multiply: triangular orders differ");
    }
    const std::size_t n = a.order();
    UpperTriangular c(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            double sum = 0.0;
            for (std::size_t k = i; k <= j; ++k) {
                sum += a(i, k) * b(k, j);
            }
            c.at(i, j) = sum;
        }
    }
    return c;
}

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shapes differ");
    }
}

}  // namespace

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "add");
    DenseMatrix c = a;
    auto cd = c.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < cd.size(); ++i) {
        cd[i] += bd[i];
    }
    return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "subtract");
    DenseMatrix c = a;
    auto cd = c.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < cd.size(); ++i) {
        cd[i] -= bd[i];
    }
    return c;
}

DenseMatrix scaled(const DenseMatrix& a, double alpha) {
    DenseMatrix c = a;
    for (auto& v : c.data()) {
        v *= alpha;
    }
    return c;
}

double frobenius_norm(const DenseMatrix& a) {
    double sum = 0.0;
    for (double v : a.data()) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

std::vector<double> column_norms(const DenseMatrix& a) {
    std::vector<double> norms(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double sum = 0.0;
        for (double v : a.col(j)) {
            sum += v * v;
        }
        norms[j] = std::sqrt(sum);
    }
    return norms;
}

double gnorm(const DenseMatrix& a) {
    const auto norms = column_norms(a);
    return norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
}

double max_abs(const DenseMatrix& a) {
    double c = 0.0;
    for (double v : a.data()) {
        c = std::max(c, std::abs(v));
    }
    return c;
}

double orthogonality_error(const DenseMatrix& q) {
    DenseMatrix g = gram(q);
    for (std::size_t i = 0; i < g.rows(); ++i) {
        g(i, i) -= 1.0;
    }
    return frobenius_norm(g);
}

HouseholderQr householder_qr(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n) {
        throw ShapeError("householder_qr needs rows >= cols");
    }
    DenseMatrix w = a;
    std::vector<std::vector<double>> reflectors(n);
    std::vector<double> betas(n, 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        double norm_sq = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            norm_sq += w(i, k) * w(i, k);
        }
        const double norm = std::sqrt(norm_sq);
        auto& v = reflectors[k];
        v.assign(m - k, 0.0);
        if (norm == 0.0) {
            continue;
        }
        const double alpha = w(k, k) >= 0.0 ? -norm : norm;
        for (std::size_t i = k; i < m; ++i) {
            v[i - k] = w(i, k);
        }
        v[0] -= alpha;
        double vtv = 0.0;
        for (double vi : v) {
            vtv += vi * vi;
        }
        if (vtv == 0.0) {
            continue;
        }
        betas[k] = 2.0 / vtv;
        for (std::size_t j = k; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) {
                dot += v[i - k] * w(i, j);
            }
            const double f = betas[k] * dot;
            for (std::size_t i = k; i < m; ++i) {
                w(i, j) -= f * v[i - k];
            }
        }
    }

    UpperTriangular r(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            r.at(i, j) = w(i, j);
        }
    }

    // Q = H_0 H_1 ... H_{n-1} [I_n; 0], accumulated backwards.
    DenseMatrix q(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        q(j, j) = 1.0;
    }
    for (std::size_t kk = n; kk-- > 0;) {
        if (betas[kk] == 0.0) {
            continue;
        }
        const auto& v = reflectors[kk];
        for (std::size_t j = kk; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = kk; i < m; ++i) {
                dot += v[i - kk] * q(i, j);
            }
            const double f = betas[kk] * dot;
            for (std::size_t i = kk; i < m; ++i) {
                q(i, j) -= f * v[i - kk];
            }
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        if (r(k, k) < 0.0) {
            for (std::size_t j = k; j < n; ++j) {
                r.at(k, j) = -r(k, j);
            }
            for (double& qi : q.col(k)) {
                qi = -qi;
            }
        }
    }
    return {std::move(q), std::move(r)};
}

namespace {

DenseMatrix transposed(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

// One-sided (Hestenes) Jacobi: rotate column pairs of `a` until all are
// mutually orthogonal to working precision; the column norms are then the
// singular values.
std::vector<double> one_sided_jacobi(DenseMatrix a) {
    constexpr int kMaxSweeps = 80;
    const double tol = 0x1p-52;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                auto ap = a.col(p);
                auto aq = a.col(q);
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += ap[i] * ap[i];
                    beta += aq[i] * aq[i];
                    gamma += ap[i] * aq[i];
                }
                if (alpha == 0.0 || beta == 0.0) {
                    continue;
                }
                if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                double t;
                if (std::abs(zeta) > 1e150) {
                    t = 1.0 / (2.0 * zeta);
                } else {
                    t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double xp = ap[i];
                    const double xq = aq[i];
                    ap[i] = c * xp - s * xq;
                    aq[i] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) {
            break;
        }
    }
    auto sv = column_norms(a);
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace

std::vector<double> singular_values(const DenseMatrix& a) {
    if (a.rows() < a.cols()) {
        return singular_values(transposed(a));
    }
    if (a.cols() == 0) {
        return {};
    }
    return one_sided_jacobi(householder_qr(a).r.to_dense());
}

SpectralSummary spectral(const DenseMatrix& x) {
    if (!x.all_finite()) {
        throw InvalidArgument("spectral: matrix has non-finite entries");
    }
    SpectralSummary out;
    out.fro = frobenius_norm(x);
    if (out.fro == 0.0) {
        throw InvalidArgument("spectral: zero matrix");
    }
    out.gnorm = gnorm(x);
    const auto sv = singular_values(x);
    out.sigma_max = sv.front();
    out.sigma_min = sv.back();
    out.kappa2 = out.sigma_min > 0.0 ? out.sigma_max / out.sigma_min
                                     : std::numeric_limits<double>::infinity();
    const double dim = static_cast<double>(std::max(x.rows(), x.cols()));
    out.rank_deficient = out.sigma_min <= out.sigma_max * 0x1p-52 * dim;
    return out;
}

namespace {

constexpr double kGnormSlack = 1e-12;

bool leq_with_slack(double lhs, double rhs) { return lhs <= rhs * (1.0 + kGnormSlack); }

}  // namespace

GnormBoundCheck gnorm_of_product_bounds_hold(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("gnorm bounds: A.cols() != B.rows()");
    }
    const double ab = gnorm(multiply(a, b));
    const double bg = gnorm(b);
    GnormBoundCheck check{};
    check.spectral_product = leq_with_slack(ab, singular_values(a).front() * bg);
    check.frobenius_product = leq_with_slack(ab, frobenius_norm(a) * bg);
    if (a.rows() == b.rows() && a.cols() == b.cols()) {
        check.triangle = gnorm_triangle_holds(a, b);
    }
    return check;
}

bool gnorm_triangle_holds(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "gnorm triangle");
    return leq_with_slack(gnorm(add(a, b)), gnorm(a) + gnorm(b));
}

}  // namespace scholqr
