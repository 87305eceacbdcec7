#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "heterosolve/errors.hpp"
#include "heterosolve/numkernel.hpp"

namespace heterosolve::numkernel {

// One-sided (Hestenes) Jacobi: orthogonalize a set of vectors by plane
// rotations; their final norms are the singular values. Small singular
// values come out with high relative accuracy, which condition numbers near
// the 1e7 rejection threshold rely on.
std::vector<double> singular_values(const DenseMatrix& m) {
    if (m.empty()) return {};
    // Rows of `w` are the vectors being orthogonalized: the columns of m when
    // m is tall, otherwise its rows. Either way there are min(r, c) of them.
    DenseMatrix w = m.rows() >= m.cols() ? m.transposed() : m;
    const std::size_t k = w.rows();
    const double eps = std::numeric_limits<double>::epsilon();

    constexpr int kMaxSweeps = 80;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                auto wp = w.row(p);
                auto wq = w.row(q);
                const double alpha = dot(wp, wp);
                const double beta = dot(wq, wq);
                const double gamma = dot(wp, wq);
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                for (std::size_t i = 0; i < wp.size(); ++i) {
                    const double a = wp[i];
                    const double b = wq[i];
                    wp[i] = c * a - s * b;
                    wq[i] = s * a + c * b;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(k);
    for (std::size_t i = 0; i < k; ++i) sigma[i] = norm2(w.row(i));
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

double condition_number(const DenseMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "condition_number needs a square matrix");
    const auto sigma = singular_values(m);
    if (sigma.empty() || sigma.front() == 0.0 || sigma.back() <= kRankTolerance * sigma.front()) {
        throw Error(ErrorCode::Singular, "matrix is singular to working tolerance");
    }
    return sigma.front() / sigma.back();
}

}  // namespace heterosolve::numkernel
