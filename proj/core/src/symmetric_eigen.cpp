#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "heterosolve/errors.hpp"
#include "heterosolve/numkernel.hpp"

namespace heterosolve::numkernel {

namespace {

struct Tridiagonal {
    Vector diag;
    Vector off;  // off[i] couples i and i+1; off[n-1] == 0
};

// Householder reduction A = Q T Q^T. When `q` is non-null it receives Q.
Tridiagonal tridiagonalize(DenseMatrix a, DenseMatrix* q) {
    const std::size_t n = a.rows();
    if (q) *q = DenseMatrix::identity(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        Vector v(len);
        for (std::size_t i = 0; i < len; ++i) v[i] = a(k + 1 + i, k);
        const double xnorm = norm2(v);
        if (xnorm == 0.0) continue;
        const double alpha = v[0] > 0.0 ? -xnorm : xnorm;
        v[0] -= alpha;
        const double vnorm = norm2(v);
        if (vnorm == 0.0) continue;
        for (double& vi : v) vi /= vnorm;

        // Trailing block B <- H B H with H = I - 2 v v^T:
        // p = 2 B v, w = p - (v^T p) v, B <- B - v w^T - w v^T.
        Vector p(len, 0.0);
        for (std::size_t i = 0; i < len; ++i) {
            const auto row = a.row(k + 1 + i);
            double s = 0.0;
            for (std::size_t j = 0; j < len; ++j) s += row[k + 1 + j] * v[j];
            p[i] = 2.0 * s;
        }
        const double vp = dot(v, p);
        Vector w(len);
        for (std::size_t i = 0; i < len; ++i) w[i] = p[i] - vp * v[i];
        for (std::size_t i = 0; i < len; ++i) {
            auto row = a.row(k + 1 + i);
            for (std::size_t j = 0; j < len; ++j) row[k + 1 + j] -= v[i] * w[j] + w[i] * v[j];
        }
        a(k + 1, k) = a(k, k + 1) = alpha;
        for (std::size_t i = 1; i < len; ++i) a(k + 1 + i, k) = a(k, k + 1 + i) = 0.0;

        if (q) {
            // Q <- Q H on columns k+1..n-1.
            for (std::size_t r = 0; r < n; ++r) {
                auto qr = q->row(r);
                double s = 0.0;
                for (std::size_t j = 0; j < len; ++j) s += qr[k + 1 + j] * v[j];
                s *= 2.0;
                for (std::size_t j = 0; j < len; ++j) qr[k + 1 + j] -= s * v[j];
            }
        }
    }

    Tridiagonal t{Vector(n), Vector(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) t.off[i] = a(i + 1, i);
    return t;
}

// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
// Rotations are accumulated into the columns of `z` when provided.
void tridiagonal_ql(Tridiagonal& t, DenseMatrix* z) {
    Vector& d = t.diag;
    Vector& e = t.off;
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    constexpr int kMaxIterations = 60;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == kMaxIterations) {
                    throw Error(ErrorCode::NoConvergence, "tridiagonal QL did not converge");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = (r = std::hypot(f, g));
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    d[i + 1] = g + (p = s * r);
                    g = c * r - b;
                    if (z) {
                        for (int k = 0; k < n; ++k) {
                            auto zk = z->row(static_cast<std::size_t>(k));
                            f = zk[i + 1];
                            zk[i + 1] = s * zk[i] + c * f;
                            zk[i] = c * zk[i] - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void require_symmetric(const DenseMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "symmetric eigensolve needs a square matrix");
    if (!is_symmetric(m)) {
        throw Error(ErrorCode::NotSymmetric, "asymmetry " + std::to_string(asymmetry(m)) + " exceeds tolerance");
    }
}

// Solvers assume exact symmetry; average out the admissible asymmetry.
DenseMatrix symmetrized(const DenseMatrix& m) {
    DenseMatrix s = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) s(i, j) = s(j, i) = 0.5 * (m(i, j) + m(j, i));
    return s;
}

}  // namespace

double Spectrum::condition() const {
    if (eigenvalues.empty()) throw Error(ErrorCode::BadSpectrum, "empty spectrum");
    if (min() <= 0.0) return std::numeric_limits<double>::infinity();
    return max() / min();
}

Spectrum symmetric_spectrum(const DenseMatrix& m) {
    require_symmetric(m);
    Tridiagonal t = tridiagonalize(symmetrized(m), nullptr);
    tridiagonal_ql(t, nullptr);
    std::sort(t.diag.begin(), t.diag.end(), std::greater<>());
    return Spectrum{std::move(t.diag)};
}

SymmetricEigen symmetric_eigen(const DenseMatrix& m) {
    require_symmetric(m);
    DenseMatrix q;
    Tridiagonal t = tridiagonalize(symmetrized(m), &q);
    tridiagonal_ql(t, &q);

    const std::size_t n = t.diag.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.diag[a] > t.diag[b]; });

    SymmetricEigen out{Spectrum{Vector(n)}, DenseMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.spectrum.eigenvalues[k] = t.diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = q(i, order[k]);
    }
    return out;
}

}  // namespace heterosolve::numkernel
