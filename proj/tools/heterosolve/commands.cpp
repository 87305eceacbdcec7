#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>

#include <heterosolve/errors.hpp>
#include <heterosolve/heterogeneity.hpp>
#include <heterosolve/matrix_io.hpp>
#include <heterosolve/montecarlo.hpp>
#include <heterosolve/numkernel.hpp>
#include <heterosolve/rates_bounds.hpp>
#include <heterosolve/serialize.hpp>
#include <heterosolve/solvers.hpp>
#include <heterosolve/system.hpp>

#include "config.hpp"

namespace cli {

namespace fs = std::filesystem;
using namespace heterosolve;

namespace {

constexpr double kDegrees = 180.0 / std::numbers::pi;

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json base_config(const CommonFlags& common, std::string_view command) {
    return common.config ? load_config(*common.config, command) : Json::object();
}

std::uint64_t resolve_seed(Json& cfg, const CommonFlags& common) {
    if (common.seed) cfg["master_seed"] = *common.seed;
    auto seed = get<std::uint64_t>(cfg, "master_seed");
    if (!seed) seed = default_seed();
    cfg["master_seed"] = *seed;
    return *seed;
}

void overlay_system(Json& cfg, const SystemFlags& f) {
    if (f.matrix) cfg["matrix"] = *f.matrix;
    if (f.rhs) {
        cfg["rhs"] = *f.rhs;
        cfg.erase("xstar");
    }
    if (f.xstar) {
        cfg["xstar"] = *f.xstar;
        cfg.erase("rhs");
    }
    if (!f.sizes.empty()) {
        cfg["sizes"] = f.sizes;
        cfg.erase("machines");
    }
    if (f.machines) {
        cfg["machines"] = *f.machines;
        cfg.erase("sizes");
    }
}

struct Problem {
    LinearSystem sys;
    Partition part;
    std::vector<MachineData> machines;
};

// Without rhs or xstar the system is built from x* = (1, ..., 1).
Problem load_problem(const Json& cfg) {
    const auto matrix = get<std::string>(cfg, "matrix");
    if (!matrix) throw UsageError("no matrix given (--matrix or config key 'matrix')");
    DenseMatrix a = io::read_matrix(*matrix);
    if (a.rows() != a.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    *matrix + ": matrix must be square, got " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    const auto rhs = get<std::string>(cfg, "rhs");
    const auto xstar = get<std::string>(cfg, "xstar");
    if (rhs && xstar) throw UsageError("give at most one of rhs and xstar");
    const auto sizes = get<std::vector<std::size_t>>(cfg, "sizes");
    const auto machines = get<std::size_t>(cfg, "machines");
    if (sizes && machines) throw UsageError("give one of sizes and machines, not both");
    if (!sizes && !machines) throw UsageError("no partition given (--sizes or --machines)");

    const std::size_t n = a.cols();
    Partition part = sizes ? partition_custom(n, *sizes) : partition_even(n, *machines);
    // Blocks first: a dependent block makes A singular too, but naming the
    // machine is the more useful diagnostic.
    (void)local_bases(a, part);
    LinearSystem sys = rhs ? make_system_from_rhs(std::move(a), io::read_vector(*rhs))
                           : make_system(std::move(a), xstar ? io::read_vector(*xstar) : Vector(n, 1.0));
    std::vector<MachineData> md = build_machines(sys, part);
    return {std::move(sys), std::move(part), std::move(md)};
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string degrees(const std::optional<double>& radians) {
    if (!radians) return "undefined";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f deg", *radians * kDegrees);
    return buf;
}

std::string num(const std::optional<double>& v, const char* missing = "n/a") {
    if (!v) return missing;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

fs::path out_dir_or(const CommonFlags& common, const char* fallback) {
    return fs::path(common.out_dir ? *common.out_dir : fallback);
}

Json system_summary(const Problem& p) {
    return Json{{"n", p.sys.n()}, {"machines", p.part.machines()}, {"sizes", p.part.sizes()}};
}

std::optional<bounds::BoundReport> bounds_if_defined(const Problem& p, const heterogeneity::Report& het) {
    if (p.part.machines() < 2) return std::nullopt;
    return bounds::compute_bounds(p.sys, het, p.part.machines());
}

void print_bounds(const bounds::BoundReport& b) {
    std::printf("thm1 upper kappa(S):      %s\n", num(b.thm1_upper_kappa_s, "n/a ((m-1)cos theta_H >= 1)").c_str());
    std::printf("corollary lower kappa(S): %s\n", num(b.corollary_lower_kappa_s, "inf").c_str());
    std::printf("thm2 lower kappa(A):      %s\n", num(b.thm2_lower_kappa_a, "inf").c_str());
    const char* eq16 = !b.eq16_holds ? "undefined" : (*b.eq16_holds ? "holds" : "fails");
    std::printf("local/cross condition:    %s\n", eq16);
}

}  // namespace

int cmd_analyze(const CommonFlags& common, const SystemFlags& flags) {
    const Stopwatch clock;
    Json cfg = base_config(common, "analyze");
    overlay_system(cfg, flags);
    reject_unknown_keys(cfg, {"matrix", "rhs", "xstar", "sizes", "machines", "master_seed"});
    const std::uint64_t seed = resolve_seed(cfg, common);

    const Problem p = load_problem(cfg);
    const heterogeneity::Report het = heterogeneity::analyze(p.sys, p.machines);
    const numkernel::Spectrum s = numkernel::symmetric_spectrum(build_S(p.machines));
    const double kappa_a = numkernel::condition_number(p.sys.a);
    const auto b = bounds_if_defined(p, het);

    Json out{{"system", system_summary(p)},
             {"heterogeneity", serialize::to_json(het)},
             {"kappa_s", s.condition()},
             {"lambda_min_s", s.min()},
             {"lambda_max_s", s.max()},
             {"kappa_a", kappa_a},
             {"bounds", b ? serialize::to_json(*b) : Json(nullptr)}};

    if (common.out_dir) {
        const fs::path dir = *common.out_dir;
        write_file(dir / "analyze.json", dump(out));
        write_manifest(dir, {"analyze", cfg, seed, common.jobs, {dir / "analyze.json"}, clock.seconds()});
    }
    if (common.json) {
        std::cout << dump(out);
        return 0;
    }
    std::printf("system:   n=%zu, machines=%zu, sizes=[%s]\n", p.sys.n(), p.part.machines(),
                join_sizes(p.part.sizes()).c_str());
    std::printf("theta_H:  %s\n", degrees(het.theta_h).c_str());
    std::printf("phi_min:  %s\n", degrees(het.phi_min).c_str());
    std::printf("kappa(S): %.10g  (lambda in [%.10g, %.10g])\n", s.condition(), s.min(), s.max());
    std::printf("kappa(A): %.10g\n", kappa_a);
    if (b) print_bounds(*b);
    return 0;
}

int cmd_rates(const CommonFlags& common, const SystemFlags& flags) {
    const Stopwatch clock;
    Json cfg = base_config(common, "rates");
    overlay_system(cfg, flags);
    reject_unknown_keys(cfg, {"matrix", "rhs", "xstar", "sizes", "machines", "master_seed"});
    const std::uint64_t seed = resolve_seed(cfg, common);

    const Problem p = load_problem(cfg);
    const rates::RateReport r = rates::compute_rates(p.sys, p.machines);
    const heterogeneity::Report het = heterogeneity::analyze(p.sys, p.machines);
    const auto b = bounds_if_defined(p, het);

    Json out{{"system", system_summary(p)},
             {"rates", serialize::to_json(r)},
             {"bounds", b ? serialize::to_json(*b) : Json(nullptr)}};

    if (common.out_dir) {
        const fs::path dir = *common.out_dir;
        std::vector<fs::path> written{dir / "rates.json", dir / "rates.csv"};
        write_file(written[0], dump(out));
        write_file(written[1], serialize::rates_csv(r));
        if (b) {
            written.push_back(dir / "bounds.csv");
            write_file(written.back(), serialize::bounds_csv(*b));
        }
        write_manifest(dir, {"rates", cfg, seed, common.jobs, written, clock.seconds()});
    }
    if (common.json) {
        std::cout << dump(out);
        return 0;
    }
    std::printf("kappa(S) = %.10g   kappa(A^T A) = %.10g\n", r.kappa_s, r.kappa_ata);
    std::printf("%-6s %-14s %-14s %-14s\n", "method", "rate", "lower", "upper");
    const auto row = [](const char* name, double rate, std::optional<double> lo, std::optional<double> hi) {
        std::printf("%-6s %-14.10g %-14s %-14s\n", name, rate, num(lo, "-").c_str(), num(hi, "-").c_str());
    };
    const bounds::Table1 t = b ? b->table1 : bounds::Table1{};
    row("APC", r.rho_apc, t.apc.lower, t.apc.upper ? t.apc.upper : t.apc_upper_from_thm1);
    row("BCM", r.rho_bcm, t.bcm.lower, t.bcm.upper);
    row("MLM", r.rho_mlm, t.mlm.lower, t.mlm.upper);
    row("DHBM", r.rho_hbm, t.hbm_norm, std::nullopt);
    row("DNAG", r.rho_nag, t.nag_norm, std::nullopt);
    row("DGD", r.rho_dgd, t.dgd_norm, std::nullopt);
    return 0;
}

int cmd_solve(const CommonFlags& common, const SystemFlags& flags, const SolveFlags& sf) {
    const Stopwatch clock;
    Json cfg = base_config(common, "solve");
    overlay_system(cfg, flags);
    if (sf.method) cfg["method"] = *sf.method;
    if (sf.gamma) cfg["gamma"] = *sf.gamma;
    if (sf.eta) cfg["eta"] = *sf.eta;
    if (sf.alpha) cfg["alpha"] = *sf.alpha;
    if (sf.beta) cfg["beta"] = *sf.beta;
    if (sf.mu) cfg["mu"] = *sf.mu;
    if (sf.tol) cfg["tol"] = *sf.tol;
    if (sf.max_iters) cfg["max_iters"] = *sf.max_iters;
    reject_unknown_keys(cfg, {"matrix", "rhs", "xstar", "sizes", "machines", "method", "gamma", "eta", "alpha", "beta",
                              "mu", "tol", "max_iters", "master_seed"});
    const std::uint64_t seed = resolve_seed(cfg, common);

    solvers::SolverConfig sc;
    const std::string method_name = get<std::string>(cfg, "method").value_or("APC");
    const auto method = solvers::parse_method(method_name);
    if (!method) throw UsageError("unknown method '" + method_name + "' (APC, DHBM, DGD, DNAG, BCM, MLM)");
    sc.method = *method;
    sc.gamma = get<double>(cfg, "gamma");
    sc.eta = get<double>(cfg, "eta");
    sc.alpha = get<double>(cfg, "alpha");
    sc.beta = get<double>(cfg, "beta");
    sc.mu = get<double>(cfg, "mu");
    sc.tol = get<double>(cfg, "tol").value_or(sc.tol);
    sc.max_iters = get<std::size_t>(cfg, "max_iters").value_or(sc.max_iters);
    try {
        solvers::validate(sc);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    cfg["method"] = solvers::to_string(sc.method);
    cfg["tol"] = sc.tol;
    cfg["max_iters"] = sc.max_iters;

    const Problem p = load_problem(cfg);
    const solvers::IterationTrace trace = solvers::run(p.sys, p.machines, sc);

    std::optional<double> closed;
    try {
        const rates::RateReport r = rates::compute_rates(p.sys, p.machines);
        switch (sc.method) {
            case solvers::Method::APC: closed = r.rho_apc; break;
            case solvers::Method::BCM: closed = r.rho_bcm; break;
            case solvers::Method::MLM: closed = r.rho_mlm; break;
            case solvers::Method::DHBM: closed = r.rho_hbm; break;
            case solvers::Method::DNAG: closed = r.rho_nag; break;
            case solvers::Method::DGD: closed = r.rho_dgd; break;
        }
    } catch (const Error&) {
        // Closed form undefined (e.g. numerically singular spectrum); report n/a.
    }

    Json sidecar = serialize::to_json(trace);
    sidecar["closed_form_rate"] = closed ? Json(*closed) : Json(nullptr);
    sidecar["system"] = system_summary(p);
    sidecar["config"] = serialize::to_json(sc);

    const fs::path dir = out_dir_or(common, ".");
    write_file(dir / "trace.csv", serialize::trace_csv(trace));
    write_file(dir / "trace.json", dump(sidecar));
    write_manifest(dir, {"solve", cfg, seed, common.jobs, {dir / "trace.csv", dir / "trace.json"}, clock.seconds()});

    std::printf("method: %s\n", std::string(solvers::to_string(trace.method)).c_str());
    std::printf("status: %s\n", std::string(solvers::to_string(trace.status)).c_str());
    std::printf("rounds: %zu\n", trace.rounds);
    std::printf("messages: %zu (%zu per round)\n", trace.messages, trace.messages_per_round);
    std::printf("final_error: %.6e\n", trace.final_error);
    std::printf("fitted_rate: %.10g   closed_form_rate: %s\n", trace.fitted_rate, num(closed).c_str());

    switch (trace.status) {
        case solvers::RunStatus::Converged: return 0;
        case solvers::RunStatus::Diverged: return 4;
        case solvers::RunStatus::Stalled: return 5;
    }
    return 0;
}

int cmd_experiment(int id, const CommonFlags& common, const ExperimentFlags& f) {
    const Stopwatch clock;
    const std::string command = "exp" + std::to_string(id);
    Json cfg = base_config(common, command);
    if (f.trials) cfg["trials"] = *f.trials;
    if (!f.m_list.empty()) cfg["m_list"] = f.m_list;
    if (!f.n_list.empty()) cfg["n_list"] = f.n_list;
    if (!f.means.empty()) cfg["means"] = f.means;
    if (f.stddev) cfg["stddev"] = *f.stddev;
    if (f.kappa_reject) cfg["kappa_reject"] = *f.kappa_reject;
    if (f.n) cfg["n"] = *f.n;
    switch (id) {
        case 1: reject_unknown_keys(cfg, {"n", "m_list", "means", "stddev", "trials", "kappa_reject", "master_seed"}); break;
        case 2: reject_unknown_keys(cfg, {"m_list", "n_list", "means", "stddev", "trials", "kappa_reject", "master_seed"}); break;
        default: reject_unknown_keys(cfg, {"n_list", "trials", "master_seed"}); break;
    }

    montecarlo::ExperimentConfig ec = montecarlo::default_config(id);
    ec.master_seed = resolve_seed(cfg, common);
    ec.jobs = common.jobs;
    ec.trials = get<std::size_t>(cfg, "trials").value_or(ec.trials);
    ec.n = get<std::size_t>(cfg, "n").value_or(ec.n);
    ec.m_list = get<std::vector<std::size_t>>(cfg, "m_list").value_or(ec.m_list);
    ec.n_list = get<std::vector<std::size_t>>(cfg, "n_list").value_or(ec.n_list);
    ec.means = get<std::vector<double>>(cfg, "means").value_or(ec.means);
    ec.stddev = get<double>(cfg, "stddev").value_or(ec.stddev);
    ec.kappa_reject = get<double>(cfg, "kappa_reject").value_or(ec.kappa_reject);
    if (id == 1 && cfg.contains("n") && !cfg.contains("m_list")) ec.m_list.clear();  // divisors of the new n
    if (id == 2 && ec.means.size() != 1) throw UsageError("exp2 takes exactly one entry mean");
    if (ec.means.empty()) throw UsageError("means must not be empty");

    std::string csv;
    std::size_t rows = 0;
    switch (id) {
        case 1: {
            const auto r = montecarlo::experiment1(ec);
            rows = r.size();
            csv = montecarlo::exp1_csv(r);
            break;
        }
        case 2: {
            const auto r = montecarlo::experiment2(ec);
            rows = r.size();
            csv = montecarlo::exp2_csv(r);
            break;
        }
        default: {
            const auto r = montecarlo::experiment3(ec);
            rows = r.size();
            csv = montecarlo::exp3_csv(r);
            break;
        }
    }

    // Snapshot the resolved settings so a manifest rerun needs nothing else.
    cfg["trials"] = ec.trials;
    if (id != 3) {
        cfg["means"] = ec.means;
        cfg["stddev"] = ec.stddev;
        cfg["kappa_reject"] = ec.kappa_reject;
        if (!ec.m_list.empty()) cfg["m_list"] = ec.m_list;
    }
    if (id == 1) cfg["n"] = ec.n;
    if (id != 1 && !ec.n_list.empty()) cfg["n_list"] = ec.n_list;

    const fs::path dir = out_dir_or(common, ".");
    const fs::path csv_path = dir / (command + ".csv");
    write_file(csv_path, csv);
    write_manifest(dir, {command, cfg, ec.master_seed, common.jobs, {csv_path}, clock.seconds()});
    std::printf("%s: %zu rows, %zu trials per cell -> %s (%.1f s)\n", command.c_str(), rows, ec.trials,
                csv_path.string().c_str(), clock.seconds());
    return 0;
}

int cmd_generate(const CommonFlags& common, const GenerateFlags& f) {
    const Stopwatch clock;
    Json cfg = base_config(common, "generate");
    if (f.n) cfg["n"] = *f.n;
    if (f.mean) cfg["mean"] = *f.mean;
    if (f.stddev) cfg["stddev"] = *f.stddev;
    reject_unknown_keys(cfg, {"n", "mean", "stddev", "master_seed"});
    const std::uint64_t seed = resolve_seed(cfg, common);
    const auto n = get<std::size_t>(cfg, "n");
    if (!n) throw UsageError("no size given (--n or config key 'n')");
    const double mean = get<double>(cfg, "mean").value_or(0.0);
    const double stddev = get<double>(cfg, "stddev").value_or(1.0);
    cfg["mean"] = mean;
    cfg["stddev"] = stddev;

    const LinearSystem sys = generate_gaussian(*n, mean, stddev, seed);
    const fs::path dir = out_dir_or(common, ".");
    const std::vector<fs::path> written{dir / "A.txt", dir / "b.txt", dir / "xstar.txt"};
    fs::create_directories(dir);
    io::write_matrix(written[0], sys.a);
    io::write_vector(written[1], sys.b);
    io::write_vector(written[2], sys.x_star);
    write_manifest(dir, {"generate", cfg, seed, common.jobs, written, clock.seconds()});
    std::printf("wrote %zux%zu system to %s\n", sys.n(), sys.n(), dir.string().c_str());
    return 0;
}

}  // namespace cli
