#include "heterosolve/serialize.hpp"

#include <optional>
#include <utility>
#include <vector>

#include "heterosolve/matrix_io.hpp"

namespace heterosolve::serialize {

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json opt_or_inf(const std::optional<double>& v) { return v ? Json(*v) : Json("inf"); }

Json bounds_pair(const bounds::RateBounds& b) { return Json{{"lower", opt(b.lower)}, {"upper", opt(b.upper)}}; }

std::string cell(const std::optional<double>& v, const char* missing = "") {
    return v ? io::format_double(*v) : std::string(missing);
}

std::string csv_line(const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string header;
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            header += ',';
            row += ',';
        }
        header += fields[i].first;
        row += fields[i].second;
    }
    return header + "\n" + row + "\n";
}

}  // namespace

Json to_json(const heterogeneity::Report& r) {
    Json pairs = Json::array();
    for (std::size_t i = 0; i < r.theta_pairwise.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < r.theta_pairwise.cols(); ++j) row.push_back(r.theta_pairwise(i, j));
        pairs.push_back(std::move(row));
    }
    Json phi = Json::array();
    for (const auto& p : r.phi_local) phi.push_back(opt(p));
    return Json{{"theta_h", opt(r.theta_h)},
                {"theta_pairwise", std::move(pairs)},
                {"phi_local", std::move(phi)},
                {"phi_min", opt(r.phi_min)},
                {"theta_min_row", r.theta_min_row}};
}

Json to_json(const rates::RateReport& r) {
    return Json{{"rho_apc", r.rho_apc},           {"rho_bcm", r.rho_bcm},   {"rho_mlm", r.rho_mlm},
                {"rho_hbm", r.rho_hbm},           {"rho_nag", r.rho_nag},   {"rho_dgd", r.rho_dgd},
                {"kappa_s", r.kappa_s},           {"kappa_ata", r.kappa_ata}, {"lambda_min_s", r.lambda_min_s},
                {"lambda_max_s", r.lambda_max_s}};
}

Json to_json(const bounds::BoundReport& r) {
    const auto& t = r.table1;
    Json table{{"mlm", bounds_pair(t.mlm)},
               {"bcm", bounds_pair(t.bcm)},
               {"apc", bounds_pair(t.apc)},
               {"apc_upper_from_thm1", opt(t.apc_upper_from_thm1)},
               {"dgd_lower_norm", opt(t.dgd_norm)},
               {"dgd_lower_angle", opt(t.dgd_angle)},
               {"nag_lower_norm", opt(t.nag_norm)},
               {"nag_lower_angle", opt(t.nag_angle)},
               {"hbm_lower_norm", opt(t.hbm_norm)},
               {"hbm_lower_angle", opt(t.hbm_angle)}};
    return Json{{"thm1_upper_kappa_s", opt(r.thm1_upper_kappa_s)},
                {"corollary_lower_kappa_s", opt_or_inf(r.corollary_lower_kappa_s)},
                {"thm2_lower_kappa_a", opt_or_inf(r.thm2_lower_kappa_a)},
                {"table1", std::move(table)},
                {"eq16_holds", r.eq16_holds ? Json(*r.eq16_holds) : Json(nullptr)}};
}

Json to_json(const solvers::SolverConfig& c) {
    return Json{{"method", solvers::to_string(c.method)},
                {"gamma", opt(c.gamma)},
                {"eta", opt(c.eta)},
                {"alpha", opt(c.alpha)},
                {"beta", opt(c.beta)},
                {"mu", opt(c.mu)},
                {"max_iters", c.max_iters},
                {"tol", c.tol},
                {"record_trace", c.record_trace}};
}

Json to_json(const solvers::IterationTrace& t) {
    Json params = Json::object();
    if (t.params.gamma) params["gamma"] = *t.params.gamma;
    if (t.params.eta) params["eta"] = *t.params.eta;
    if (t.params.alpha) params["alpha"] = *t.params.alpha;
    if (t.params.beta) params["beta"] = *t.params.beta;
    if (t.params.mu) params["mu"] = *t.params.mu;
    return Json{{"method", solvers::to_string(t.method)},
                {"status", solvers::to_string(t.status)},
                {"rounds", t.rounds},
                {"messages_per_round", t.messages_per_round},
                {"messages", t.messages},
                {"initial_error", t.errors.empty() ? 0.0 : t.errors.front()},
                {"final_error", t.final_error},
                {"fitted_rate", t.fitted_rate},
                {"fit_window", Json::array({t.fit_begin, t.fit_end})},
                {"params", std::move(params)}};
}

std::string trace_csv(const solvers::IterationTrace& t) {
    std::string out = "iter,error\n";
    // Without a full trace only the endpoints are known.
    const bool full = t.errors.size() == t.rounds + 1;
    for (std::size_t k = 0; k < t.errors.size(); ++k) {
        const std::size_t iter = full || k == 0 ? k : t.rounds;
        out += std::to_string(iter) + "," + io::format_double(t.errors[k]) + "\n";
    }
    return out;
}

std::string rates_csv(const rates::RateReport& r) {
    using io::format_double;
    return csv_line({{"rho_apc", format_double(r.rho_apc)},
                     {"rho_bcm", format_double(r.rho_bcm)},
                     {"rho_mlm", format_double(r.rho_mlm)},
                     {"rho_hbm", format_double(r.rho_hbm)},
                     {"rho_nag", format_double(r.rho_nag)},
                     {"rho_dgd", format_double(r.rho_dgd)},
                     {"kappa_s", format_double(r.kappa_s)},
                     {"kappa_ata", format_double(r.kappa_ata)},
                     {"lambda_min_s", format_double(r.lambda_min_s)},
                     {"lambda_max_s", format_double(r.lambda_max_s)}});
}

std::string bounds_csv(const bounds::BoundReport& r) {
    const auto& t = r.table1;
    return csv_line({{"thm1_upper_kappa_s", cell(r.thm1_upper_kappa_s)},
                     {"corollary_lower_kappa_s", cell(r.corollary_lower_kappa_s, "inf")},
                     {"thm2_lower_kappa_a", cell(r.thm2_lower_kappa_a, "inf")},
                     {"mlm_lower", cell(t.mlm.lower)},
                     {"mlm_upper", cell(t.mlm.upper)},
                     {"bcm_lower", cell(t.bcm.lower)},
                     {"bcm_upper", cell(t.bcm.upper)},
                     {"apc_lower", cell(t.apc.lower)},
                     {"apc_upper", cell(t.apc.upper)},
                     {"apc_upper_from_thm1", cell(t.apc_upper_from_thm1)},
                     {"dgd_lower_norm", cell(t.dgd_norm)},
                     {"dgd_lower_angle", cell(t.dgd_angle)},
                     {"nag_lower_norm", cell(t.nag_norm)},
                     {"nag_lower_angle", cell(t.nag_angle)},
                     {"hbm_lower_norm", cell(t.hbm_norm)},
                     {"hbm_lower_angle", cell(t.hbm_angle)},
                     {"eq16_holds", r.eq16_holds ? (*r.eq16_holds ? "true" : "false") : ""}});
}

}  // namespace heterosolve::serialize
