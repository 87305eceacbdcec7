#include <algorithm>
#include <cmath>
#include <limits>

#include "heterosolve/errors.hpp"
#include "heterosolve/numkernel.hpp"

namespace heterosolve::numkernel {

namespace {

// Similarity scaling by powers of two so that row and column norms are
// comparable; improves eigenvalue accuracy for badly scaled matrices.
void balance(DenseMatrix& a) {
    constexpr double kRadix = 2.0;
    constexpr double kRadixSq = kRadix * kRadix;
    const std::size_t n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / kRadix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= kRadix;
                c *= kRadixSq;
            }
            g = r * kRadix;
            while (c > g) {
                f /= kRadix;
                c /= kRadixSq;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

void to_hessenberg(DenseMatrix& a) {
    const std::size_t n = a.rows();
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

        // Left: rows k+1.., columns k..
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) s += v[i] * a(k + 1 + i, j);
            s *= 2.0;
            for (std::size_t i = 0; i < len; ++i) a(k + 1 + i, j) -= s * v[i];
        }
        // Right: all rows, columns k+1..
        for (std::size_t r = 0; r < n; ++r) {
            auto row = a.row(r);
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) s += row[k + 1 + i] * v[i];
            s *= 2.0;
            for (std::size_t i = 0; i < len; ++i) row[k + 1 + i] -= s * v[i];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr layout).
std::vector<std::complex<double>> hessenberg_qr(DenseMatrix& a) {
    const int n = static_cast<int>(a.rows());
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
    auto at = [&a](int i, int j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));

    int nn = n - 1;
    double t = 0.0;
    constexpr int kMaxIterations = 60;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l > 0; --l) {
                double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(at(l, l - 1)) <= eps * s) {
                    at(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = at(nn, nn);
            if (l == nn) {
                w[static_cast<std::size_t>(nn--)] = {x + t, 0.0};
            } else {
                double y = at(nn - 1, nn - 1);
                double ww = at(nn, nn - 1) * at(nn - 1, nn);
                if (l == nn - 1) {
                    const double p = 0.5 * (y - x);
                    const double q = p * p + ww;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + std::copysign(z, p);
                        w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = {x + z, 0.0};
                        if (z != 0.0) w[static_cast<std::size_t>(nn)] = {x - ww / z, 0.0};
                    } else {
                        w[static_cast<std::size_t>(nn)] = {x + p, -z};
                        w[static_cast<std::size_t>(nn - 1)] = {x + p, z};
                    }
                    nn -= 2;
                } else {
                    if (its == kMaxIterations) {
                        throw Error(ErrorCode::NoConvergence, "Hessenberg QR did not converge");
                    }
                    if (its % 10 == 0 && its > 0) {
                        // Exceptional shift.
                        t += x;
                        for (int i = 0; i <= nn; ++i) at(i, i) -= x;
                        const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    double p = 0.0;
                    double q = 0.0;
                    double r = 0.0;
                    double z = 0.0;
                    for (; m >= l; --m) {
                        z = at(m, m);
                        r = x - z;
                        double s = y - z;
                        p = (r * s - ww) / at(m + 1, m) + at(m, m + 1);
                        q = at(m + 1, m + 1) - z - r - s;
                        r = at(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        at(i, i - 2) = 0.0;
                        if (i != m + 2) at(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = at(k, k - 1);
                            q = at(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = at(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) at(k, k - 1) = -at(k, k - 1);
                        } else {
                            at(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            p = at(k, j) + q * at(k + 1, j);
                            if (k != nn - 1) {
                                p += r * at(k + 2, j);
                                at(k + 2, j) -= p * z;
                            }
                            at(k + 1, j) -= p * y;
                            at(k, j) -= p * x;
                        }
                        const int mmin = nn < k + 3 ? nn : k + 3;
                        for (int i = l; i <= mmin; ++i) {
                            p = x * at(i, k) + y * at(i, k + 1);
                            if (k != nn - 1) {
                                p += z * at(i, k + 2);
                                at(i, k + 2) -= p * r;
                            }
                            at(i, k + 1) -= p * q;
                            at(i, k) -= p;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return w;
}

}  // namespace

std::vector<std::complex<double>> general_eigenvalues(const DenseMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "eigenvalues need a square matrix");
    if (!m.all_finite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    DenseMatrix a = m;
    balance(a);
    to_hessenberg(a);
    return hessenberg_qr(a);
}

double spectral_radius(const DenseMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "spectral_radius needs a square matrix");
    if (m.empty()) return 0.0;
    if (max_abs(m) == 0.0) return 0.0;
    double radius = 0.0;
    if (asymmetry(m) == 0.0) {
        const Spectrum s = symmetric_spectrum(m);
        radius = std::max(std::abs(s.max()), std::abs(s.min()));
    } else {
        for (const auto& lambda : general_eigenvalues(m)) radius = std::max(radius, std::abs(lambda));
    }
    return radius;
}

}  // namespace heterosolve::numkernel
