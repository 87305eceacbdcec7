#include <cmath>
#include <limits>
#include <string>

#include "heterosolve/errors.hpp"
#include "heterosolve/solvers.hpp"

namespace heterosolve::solvers {

std::string_view to_string(RunStatus s) noexcept {
    switch (s) {
        case RunStatus::Converged: return "converged";
        case RunStatus::Stalled: return "stalled";
        case RunStatus::Diverged: return "diverged";
    }
    return "?";
}

void validate(const SolverConfig& c) {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (c.gamma && !(*c.gamma >= 1.0)) bad("gamma must be >= 1");
    if (c.eta && !(*c.eta > 1.0)) bad("eta must be > 1");
    if (c.alpha && !(*c.alpha > 0.0)) bad("alpha must be positive");
    if (c.beta && !(*c.beta >= 0.0 && *c.beta < 1.0)) bad("beta must lie in [0, 1)");
    if (c.mu && !(*c.mu > 0.0)) bad("mu must be positive");
    if (!(c.tol > 0.0)) bad("tol must be positive");
}

RateFit fit_rate(const std::vector<double>& errors) {
    constexpr double kFloor = 100.0 * std::numeric_limits<double>::epsilon();
    const std::size_t last = errors.empty() ? 0 : errors.size() - 1;

    auto fit = [&](std::size_t begin) -> std::optional<RateFit> {
        double st = 0, sy = 0, stt = 0, sty = 0;
        std::size_t count = 0;
        for (std::size_t t = begin; t <= last; ++t) {
            const double e = errors[t];
            if (!(e >= kFloor) || !std::isfinite(e)) continue;
            const double x = static_cast<double>(t);
            const double y = std::log(e);
            st += x;
            sy += y;
            stt += x * x;
            sty += x * y;
            ++count;
        }
        if (count < 3) return std::nullopt;
        const double cnt = static_cast<double>(count);
        const double denom = cnt * stt - st * st;
        if (denom <= 0.0) return std::nullopt;
        return RateFit{std::exp((cnt * sty - st * sy) / denom), begin, last};
    };

    if (last == 0) return RateFit{};
    if (auto r = fit(last / 2)) return *r;
    if (auto r = fit(0)) return *r;
    // Geometric mean ratio over the whole run; exact zero error gives rate 0.
    const double first = errors.front();
    const double end = errors.back();
    const double ratio = first > 0.0 ? std::pow(std::max(end, 0.0) / first, 1.0 / static_cast<double>(last)) : 0.0;
    return RateFit{ratio, 0, last};
}

namespace {

double relative_error(std::span<const double> x, const Vector& x_star, double scale) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - x_star[k];
        s += d * d;
    }
    return std::sqrt(s) / scale;
}

}  // namespace

IterationTrace run(const LinearSystem& sys, const std::vector<MachineData>& machines, const SolverConfig& config) {
    validate(config);
    if (machines.empty()) throw Error(ErrorCode::InvalidArgument, "no machines");
    const std::size_t n = sys.n();
    const std::size_t m = machines.size();
    const double x_norm = norm2(sys.x_star);
    const double scale = x_norm > 0.0 ? x_norm : 1.0;

    IterationTrace trace;
    trace.method = config.method;
    trace.messages_per_round = messages_per_round(config.method, m);

    // Hyperparameters: tune what was left unspecified.
    ApcParams apc;
    GradientParams grad;
    double mu = 0.0;
    switch (config.method) {
        case Method::APC: {
            if (!config.gamma || !config.eta) {
                apc = tune_apc(numkernel::symmetric_spectrum(build_S(machines)), m).params;
            }
            if (config.gamma) apc.gamma = *config.gamma;
            if (config.eta) apc.eta = *config.eta;
            trace.params.gamma = apc.gamma;
            trace.params.eta = apc.eta;
            break;
        }
        case Method::DHBM:
        case Method::DGD:
        case Method::DNAG: {
            if (!config.alpha || (config.method != Method::DGD && !config.beta)) {
                grad = tune_gradient(ata_spectrum(sys.a), config.method);
            }
            if (config.alpha) grad.alpha = *config.alpha;
            if (config.beta && config.method != Method::DGD) grad.beta = *config.beta;
            trace.params.alpha = grad.alpha;
            if (config.method != Method::DGD) trace.params.beta = grad.beta;
            break;
        }
        case Method::BCM: {
            mu = config.mu ? *config.mu : tune_bcm(numkernel::symmetric_spectrum(build_S(machines)));
            trace.params.mu = mu;
            break;
        }
        case Method::MLM: break;
    }

    const bool per_machine = config.method == Method::APC || config.method == Method::MLM;
    ApcState local;
    CentralState central;
    if (per_machine) {
        local = apc_init(machines);
    } else {
        central = central_init(n);
    }
    auto estimate = [&]() -> std::span<const double> { return per_machine ? local.mean : central.x; };

    double e = relative_error(estimate(), sys.x_star, scale);
    std::vector<double> all{e};
    trace.status = RunStatus::Stalled;
    std::size_t t = 0;
    while (true) {
        if (!std::isfinite(e) || e > kDivergenceThreshold) {
            trace.status = RunStatus::Diverged;
            break;
        }
        if (e <= config.tol) {
            trace.status = RunStatus::Converged;
            break;
        }
        if (t == config.max_iters) break;
        switch (config.method) {
            case Method::APC: apc_step(local, machines, apc); break;
            case Method::MLM: mlm_step(local, machines); break;
            case Method::DHBM: dhbm_step(central, machines, grad); break;
            case Method::DGD: dgd_step(central, machines, grad.alpha); break;
            case Method::DNAG: dnag_step(central, machines, grad); break;
            case Method::BCM: bcm_step(central, machines, mu); break;
        }
        ++t;
        e = relative_error(estimate(), sys.x_star, scale);
        all.push_back(e);
    }

    trace.rounds = t;
    trace.messages = t * trace.messages_per_round;
    trace.final_error = e;
    const RateFit f = fit_rate(all);
    trace.fitted_rate = f.rate;
    trace.fit_begin = f.begin;
    trace.fit_end = f.end;
    if (!config.record_trace && all.size() > 2) all = {all.front(), all.back()};
    trace.errors = std::move(all);
    return trace;
}

}  // namespace heterosolve::solvers
