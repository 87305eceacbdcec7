#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <string>

#include "heterosolve/errors.hpp"
#include "heterosolve/rates_bounds.hpp"
#include "heterosolve/solvers.hpp"

namespace heterosolve::solvers {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::APC: return "APC";
        case Method::DHBM: return "DHBM";
        case Method::DGD: return "DGD";
        case Method::DNAG: return "DNAG";
        case Method::BCM: return "BCM";
        case Method::MLM: return "MLM";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    std::string key;
    for (char c : name) {
        if (c != '-' && c != '_') key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    for (Method m : kAllMethods)
        if (key == to_string(m)) return m;
    if (key == "HBM") return Method::DHBM;
    if (key == "NAG") return Method::DNAG;
    return std::nullopt;
}

bool is_projection_method(Method m) noexcept {
    return m == Method::APC || m == Method::BCM || m == Method::MLM;
}

std::size_t messages_per_round(Method m, std::size_t machines) noexcept {
    return is_projection_method(m) ? 2 * machines : machines;
}

namespace {

// Spectral radius of [[1-g, g(1-x)], [e(1-g), e g (1-x) + 1 - e]].
double block_radius(double x, ApcParams p) {
    const double g = p.gamma;
    const double e = p.eta;
    const double trace = (1.0 - g) + e * g * (1.0 - x) + 1.0 - e;
    const double det = (g - 1.0) * (e - 1.0);
    const double disc = trace * trace - 4.0 * det;
    if (disc < 0.0) return std::sqrt(det);
    const double root = std::sqrt(disc);
    return std::max(std::abs(trace + root), std::abs(trace - root)) / 2.0;
}

void require_positive_definite(const numkernel::Spectrum& s, const char* what) {
    if (s.eigenvalues.empty() || !(s.min() > 0.0) || !std::isfinite(s.max())) {
        throw Error(ErrorCode::BadSpectrum, std::string(what) + " is not positive definite");
    }
}

// Golden-section minimisation of a unimodal-ish function on [lo, hi].
template <typename F>
double golden_min(F f, double lo, double hi, int iters = 60) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

}  // namespace

double apc_radius(const numkernel::Spectrum& s_spectrum, std::size_t m, ApcParams p) {
    const double md = static_cast<double>(m);
    if (m == 1) return std::abs(1.0 - p.eta);
    double radius = m >= 3 ? std::abs(1.0 - p.gamma) : 0.0;
    for (double lambda : s_spectrum.eigenvalues) radius = std::max(radius, block_radius(lambda / md, p));
    return radius;
}

ApcTuning tune_apc(const numkernel::Spectrum& s_spectrum, std::size_t m) {
    require_positive_definite(s_spectrum, "S");
    if (m == 0) throw Error(ErrorCode::TooFewMachines, "no machines");
    const double md = static_cast<double>(m);
    const double kappa = s_spectrum.condition();

    ApcTuning out;
    out.target_rate = rates::rate_apc(kappa);

    // The 2x2 blocks have determinant (gamma-1)(eta-1) and trace
    // (gamma-1)(eta-1) + 1 - gamma*eta*x. Equal moduli rho at both ends of
    // the spectrum fix gamma*eta and the product (gamma-1)(eta-1) = rho^2.
    const double rho = out.target_rate;
    const double xs = (s_spectrum.min() + s_spectrum.max()) / md;
    const double c = 2.0 * (1.0 + rho * rho) / xs;
    const double sum = c - 1.0 - rho * rho;
    const double disc = std::max(0.0, sum * sum - 4.0 * rho * rho);
    const double big = (sum + std::sqrt(disc)) / 2.0;
    const double small = big > 0.0 ? rho * rho / big : 0.0;
    out.params = {1.0 + small, 1.0 + big};
    if (m == 1) out.params = {1.0, 1.0};
    out.realized_radius = apc_radius(s_spectrum, m, out.params);

    if (std::abs(out.realized_radius - out.target_rate) > 1e-3) {
        out.refined = true;
        auto radius_at = [&](double g, double e) { return apc_radius(s_spectrum, m, {g, e}); };
        const double eta_hi = 4.0 * md;
        ApcParams best = out.params;
        double best_r = out.realized_radius;
        constexpr int kGrid = 64;
        for (int i = 0; i <= kGrid; ++i) {
            const double g = 1.0 + static_cast<double>(i) / kGrid;
            const double e = golden_min([&](double ee) { return radius_at(g, ee); }, 1.0 + 1e-12, eta_hi);
            const double r = radius_at(g, e);
            if (r < best_r) {
                best_r = r;
                best = {g, e};
            }
        }
        const double e = best.eta;
        const double g = golden_min([&](double gg) { return radius_at(gg, e); }, 1.0, 2.0);
        if (radius_at(g, e) < best_r) {
            best = {g, e};
            best_r = radius_at(g, e);
        }
        out.params = best;
        out.realized_radius = best_r;
    }
    if (!(out.realized_radius < 1.0)) {
        throw Error(ErrorCode::NoConvergentParams, "no APC parameters give a contracting iteration");
    }
    return out;
}

GradientParams tune_gradient(const numkernel::Spectrum& ata, Method method) {
    require_positive_definite(ata, "A^T A");
    const double lmax = ata.max();
    const double lmin = ata.min();
    const double kappa = lmax / lmin;
    switch (method) {
        case Method::DHBM: {
            const double sk = std::sqrt(kappa);
            const double root_sum = std::sqrt(lmax) + std::sqrt(lmin);
            const double q = (sk - 1.0) / (sk + 1.0);
            return {4.0 / (root_sum * root_sum), q * q};
        }
        case Method::DGD: return {2.0 / (lmax + lmin), 0.0};
        case Method::DNAG: {
            const double s = std::sqrt(3.0 * kappa + 1.0);
            return {4.0 / (3.0 * lmax + lmin), (s - 2.0) / (s + 2.0)};
        }
        default: break;
    }
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(method)) + " is not a gradient method");
}

double tune_bcm(const numkernel::Spectrum& s_spectrum) {
    require_positive_definite(s_spectrum, "S");
    return 2.0 / (s_spectrum.min() + s_spectrum.max());
}

numkernel::Spectrum ata_spectrum(const DenseMatrix& a) {
    numkernel::Spectrum s{numkernel::singular_values(a)};
    for (double& v : s.eigenvalues) v *= v;
    return s;
}

}  // namespace heterosolve::solvers
