// heterosolve: analyze, solve and benchmark distributed linear systems.
//
// Exit codes: 0 ok, 1 usage, 2 parse, 3 rank deficiency or singularity,
// 4 diverged, 5 stalled.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include <heterosolve/errors.hpp>
#include <heterosolve/version.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

int exit_code(const heterosolve::Error& e) {
    using heterosolve::ErrorCode;
    switch (e.code()) {
        case ErrorCode::Parse: return 2;
        case ErrorCode::RankDeficient:
        case ErrorCode::RankDeficientBlock:
        case ErrorCode::Singular:
        case ErrorCode::SingularDraw:
        case ErrorCode::ZeroRow: return 3;
        default: return 1;
    }
}

void add_common(CLI::App* sub, cli::CommonFlags& c, const char* out_help) {
    sub->add_option("--config", c.config, "JSON config or a manifest.json from an earlier run");
    sub->add_option("--out-dir", c.out_dir, out_help);
    sub->add_option("--seed", c.seed, "master seed (default: $HETEROSOLVE_SEED, else 0)");
    sub->add_option("--jobs,-j", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

void add_system(CLI::App* sub, cli::SystemFlags& s, bool with_rhs) {
    sub->add_option("--matrix,-A", s.matrix, "square matrix file (\"rows cols\" header, then entries)");
    if (with_rhs) {
        auto* rhs = sub->add_option("--rhs,-b", s.rhs, "right-hand side file");
        auto* xs = sub->add_option("--xstar", s.xstar, "solution file; b is derived as A x*");
        rhs->excludes(xs);
    }
    auto* sizes = sub->add_option("--sizes", s.sizes, "rows per machine, e.g. 2,2")->delimiter(',');
    auto* m = sub->add_option("--machines,-m", s.machines, "even split over m machines");
    sizes->excludes(m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed linear-system solvers and angular heterogeneity analysis", "heterosolve"};
    app.set_version_flag("--version", std::string(heterosolve::version()));
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    cli::CommonFlags common;
    cli::SystemFlags system;
    cli::SolveFlags solve;
    cli::ExperimentFlags exp;
    cli::GenerateFlags gen;

    auto* analyze = app.add_subcommand("analyze", "angular heterogeneity, kappa(S) and the bound report");
    add_common(analyze, common, "write analyze.json and manifest.json here");
    add_system(analyze, system, false);
    analyze->add_flag("--json", common.json, "print JSON instead of the summary");

    auto* rates = app.add_subcommand("rates", "closed-form optimal rates of all six methods with their bounds");
    add_common(rates, common, "write rates.json, rates.csv, bounds.csv and manifest.json here");
    add_system(rates, system, false);
    rates->add_flag("--json", common.json, "print JSON instead of the table");

    auto* solve_cmd = app.add_subcommand("solve", "run one solver and record its error trace");
    add_common(solve_cmd, common, "write trace.csv, trace.json and manifest.json here (default .)");
    add_system(solve_cmd, system, true);
    solve_cmd->add_option("--method", solve.method, "APC, DHBM, DGD, DNAG, BCM or MLM (default APC)");
    solve_cmd->add_option("--gamma", solve.gamma, "APC gamma (default: tuned)");
    solve_cmd->add_option("--eta", solve.eta, "APC eta (default: tuned)");
    solve_cmd->add_option("--alpha", solve.alpha, "gradient step size (default: tuned)");
    solve_cmd->add_option("--beta", solve.beta, "momentum (default: tuned)");
    solve_cmd->add_option("--mu", solve.mu, "Block-Cimmino relaxation (default: tuned)");
    solve_cmd->add_option("--tol", solve.tol, "relative error target (default 1e-10)");
    solve_cmd->add_option("--max-iters", solve.max_iters, "round budget (default 10000)");

    CLI::App* experiments[3];
    const char* exp_help[3] = {"rate vs machine count (one series group per entry mean)",
                               "rate vs system size for fixed machine counts",
                               "largest cosine between random unit vectors vs dimension"};
    for (int id = 1; id <= 3; ++id) {
        auto* sub = app.add_subcommand("exp" + std::to_string(id), exp_help[id - 1]);
        add_common(sub, common, "write the CSV and manifest.json here (default .)");
        sub->add_option("--trials,-T", exp.trials, "trials per cell");
        sub->add_option("--n-list", exp.n_list, "system sizes, comma separated")->delimiter(',');
        if (id != 3) {
            sub->add_option("--m-list", exp.m_list, "machine counts, comma separated")->delimiter(',');
            sub->add_option("--means", exp.means, "entry means, comma separated")->delimiter(',');
            sub->add_option("--stddev", exp.stddev, "entry standard deviation");
            sub->add_option("--kappa-reject", exp.kappa_reject, "reject draws with kappa(A^T A) above this");
        }
        if (id == 1) {
            sub->add_option("--n", exp.n, "system size (default 120)");
            sub->remove_option(sub->get_option("--n-list"));
        }
        experiments[id - 1] = sub;
    }

    auto* generate = app.add_subcommand("generate", "draw a Gaussian system and write A.txt, b.txt, xstar.txt");
    add_common(generate, common, "output directory (default .)");
    generate->add_option("--n", gen.n, "system size");
    generate->add_option("--mean", gen.mean, "entry mean (default 0)");
    generate->add_option("--stddev", gen.stddev, "entry standard deviation (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) return cli::cmd_analyze(common, system);
        if (rates->parsed()) return cli::cmd_rates(common, system);
        if (solve_cmd->parsed()) return cli::cmd_solve(common, system, solve);
        for (int id = 1; id <= 3; ++id)
            if (experiments[id - 1]->parsed()) return cli::cmd_experiment(id, common, exp);
        if (generate->parsed()) return cli::cmd_generate(common, gen);
    } catch (const cli::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const heterosolve::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
