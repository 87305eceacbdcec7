#include <algorithm>
#include <cmath>
#include <string>

#include "heterosolve/errors.hpp"
#include "heterosolve/numkernel.hpp"

namespace heterosolve::numkernel {

QrResult qr_decompose(const DenseMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (rows < cols) {
        throw Error(ErrorCode::DimensionMismatch,
                    "qr_decompose needs a square or tall matrix, got " + std::to_string(rows) + "x" +
                        std::to_string(cols));
    }

    double scale = 0.0;
    for (std::size_t j = 0; j < cols; ++j) scale = std::max(scale, norm2(m.column_copy(j)));
    const double threshold = kRankTolerance * scale;

    // Work column-major: work[j] is column j of the evolving matrix.
    std::vector<Vector> work(cols);
    for (std::size_t j = 0; j < cols; ++j) work[j] = m.column_copy(j);

    std::vector<Vector> reflectors(cols);
    DenseMatrix r(cols, cols);

    for (std::size_t k = 0; k < cols; ++k) {
        Vector& x = work[k];
        const double xnorm = norm2(std::span<const double>(x).subspan(k));
        if (xnorm <= threshold || xnorm == 0.0) {
            throw Error(ErrorCode::RankDeficient,
                        "column " + std::to_string(k) + " is (numerically) dependent on earlier columns", k);
        }
        const double alpha = x[k] > 0.0 ? -xnorm : xnorm;

        Vector v(rows - k);
        for (std::size_t i = k; i < rows; ++i) v[i - k] = x[i];
        v[0] -= alpha;
        const double vnorm = norm2(v);
        for (double& vi : v) vi /= vnorm;

        r(k, k) = alpha;
        for (std::size_t j = k + 1; j < cols; ++j) {
            Vector& col = work[j];
            double proj = 0.0;
            for (std::size_t i = k; i < rows; ++i) proj += v[i - k] * col[i];
            for (std::size_t i = k; i < rows; ++i) col[i] -= 2.0 * proj * v[i - k];
            r(k, j) = col[k];
        }
        reflectors[k] = std::move(v);
    }

    // Thin Q: apply H_0 ... H_{c-1} to the first `cols` columns of I, last first.
    std::vector<Vector> qcols(cols, Vector(rows, 0.0));
    for (std::size_t j = 0; j < cols; ++j) qcols[j][j] = 1.0;
    for (std::size_t kk = cols; kk-- > 0;) {
        const Vector& v = reflectors[kk];
        for (std::size_t j = 0; j < cols; ++j) {
            Vector& col = qcols[j];
            double proj = 0.0;
            for (std::size_t i = kk; i < rows; ++i) proj += v[i - kk] * col[i];
            if (proj == 0.0) continue;
            for (std::size_t i = kk; i < rows; ++i) col[i] -= 2.0 * proj * v[i - kk];
        }
    }

    QrResult out{DenseMatrix(rows, cols), std::move(r)};
    for (std::size_t j = 0; j < cols; ++j) {
        const double sign = out.r(j, j) < 0.0 ? -1.0 : 1.0;
        if (sign < 0.0) {
            for (std::size_t c = j; c < cols; ++c) out.r(j, c) = -out.r(j, c);
        }
        for (std::size_t i = 0; i < rows; ++i) out.q(i, j) = sign * qcols[j][i];
    }
    return out;
}

Vector solve_upper_transposed(const DenseMatrix& r, std::span<const double> b) {
    const std::size_t n = r.rows();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= r(k, i) * y[k];
        y[i] = s / r(i, i);
    }
    return y;
}

Vector solve_upper(const DenseMatrix& r, std::span<const double> b) {
    const std::size_t n = r.rows();
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= r(ii, k) * x[k];
        x[ii] = s / r(ii, ii);
    }
    return x;
}

Vector solve(const DenseMatrix& a, std::span<const double> b) {
    if (!a.is_square() || a.rows() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "solve: need square A and matching b");
    }
    QrResult qr;
    try {
        qr = qr_decompose(a);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RankDeficient) throw Error(ErrorCode::Singular, "solve: matrix is singular");
        throw;
    }
    return solve_upper(qr.r, transpose_times(qr.q, b));
}

DenseMatrix orthonormal_rowspace_basis(const DenseMatrix& a) {
    if (a.rows() > a.cols()) {
        throw Error(ErrorCode::RankDeficient, "more rows (" + std::to_string(a.rows()) + ") than columns (" +
                                                  std::to_string(a.cols()) + "): rows cannot be independent");
    }
    return qr_decompose(a.transposed()).q;
}

DenseMatrix nullspace_projector(const DenseMatrix& a) {
    const DenseMatrix v = orthonormal_rowspace_basis(a);
    const std::size_t n = a.cols();
    DenseMatrix p = DenseMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto vi = v.row(i);
        for (std::size_t j = i; j < n; ++j) {
            const double s = dot(vi, v.row(j));
            p(i, j) -= s;
            if (j != i) p(j, i) = p(i, j);
        }
    }
    return p;
}

bool is_symmetric(const DenseMatrix& m, double tol) {
    if (!m.is_square()) return false;
    return asymmetry(m) <= tol * std::max(1.0, max_abs(m));
}

}  // namespace heterosolve::numkernel
