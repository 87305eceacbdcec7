#include <algorithm>
#include <cmath>
#include <string>

#include "heterosolve/errors.hpp"
#include "heterosolve/rates_bounds.hpp"

namespace heterosolve::rates {

namespace {

void require_kappa(double kappa) {
    if (!std::isfinite(kappa) || !(kappa >= 1.0)) {
        throw Error(ErrorCode::BadKappa, "condition number must be finite and >= 1, got " + std::to_string(kappa));
    }
}

}  // namespace

double rate_apc(double kappa_s) {
    require_kappa(kappa_s);
    return 1.0 - 2.0 / (std::sqrt(kappa_s) + 1.0);
}

double rate_bcm(double kappa_s) {
    require_kappa(kappa_s);
    return 1.0 - 2.0 / (kappa_s + 1.0);
}

double rate_mlm(double lambda_min_s, std::size_t m) {
    const double md = static_cast<double>(m);
    if (m == 0 || !(lambda_min_s > 0.0) || lambda_min_s > md * (1.0 + 1e-12)) {
        throw Error(ErrorCode::BadLambda, "lambda_min(S) = " + std::to_string(lambda_min_s) + " outside (0, " +
                                              std::to_string(m) + "]");
    }
    return std::max(0.0, 1.0 - lambda_min_s / md);
}

double rate_hbm(double kappa_ata) {
    require_kappa(kappa_ata);
    return 1.0 - 2.0 / (std::sqrt(kappa_ata) + 1.0);
}

double rate_nag(double kappa_ata) {
    require_kappa(kappa_ata);
    return 1.0 - 2.0 / std::sqrt(3.0 * kappa_ata + 1.0);
}

double rate_dgd(double kappa_ata) {
    require_kappa(kappa_ata);
    return std::max(0.0, 1.0 - 2.0 / kappa_ata);
}

double kappa_ata(const DenseMatrix& a) {
    const double k = numkernel::condition_number(a);
    return k * k;
}

RateReport compute_rates(const numkernel::Spectrum& s_spectrum, double kappa_ata_value, std::size_t m) {
    RateReport r;
    r.lambda_max_s = s_spectrum.max();
    r.lambda_min_s = s_spectrum.min();
    r.kappa_s = s_spectrum.condition();
    r.kappa_ata = kappa_ata_value;
    r.rho_apc = rate_apc(r.kappa_s);
    r.rho_bcm = rate_bcm(r.kappa_s);
    r.rho_mlm = rate_mlm(r.lambda_min_s, m);
    r.rho_hbm = rate_hbm(r.kappa_ata);
    r.rho_nag = rate_nag(r.kappa_ata);
    r.rho_dgd = rate_dgd(r.kappa_ata);
    return r;
}

RateReport compute_rates(const LinearSystem& sys, const std::vector<MachineData>& machines) {
    const numkernel::Spectrum s = numkernel::symmetric_spectrum(build_S(machines));
    return compute_rates(s, kappa_ata(sys.a), machines.size());
}

}  // namespace heterosolve::rates
