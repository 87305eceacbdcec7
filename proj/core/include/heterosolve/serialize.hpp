#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "heterosolve/heterogeneity.hpp"
#include "heterosolve/rates_bounds.hpp"
#include "heterosolve/solvers.hpp"

/// JSON and CSV renderings. Angles stay in radians; nullopt bounds become
/// null, and bounds that are infinite for degenerate angles become "inf".
namespace heterosolve::serialize {

using Json = nlohmann::ordered_json;

Json to_json(const heterogeneity::Report& r);
Json to_json(const rates::RateReport& r);
Json to_json(const bounds::BoundReport& r);
/// Sidecar: everything except the per-iteration errors.
Json to_json(const solvers::IterationTrace& t);
Json to_json(const solvers::SolverConfig& c);

/// "iter,error" rows.
std::string trace_csv(const solvers::IterationTrace& t);

/// Header line plus one data row.
std::string rates_csv(const rates::RateReport& r);
std::string bounds_csv(const bounds::BoundReport& r);

}  // namespace heterosolve::serialize
