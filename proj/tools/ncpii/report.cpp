#include "report.hpp"

#include <cmath>
#include <sstream>

#ifndef NCPII_VERSION
#define NCPII_VERSION "0.0.0"
#endif

namespace ncpii::cli {

json to_json(const cplx& c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

json to_json(const Gaussian& g) { return g.str(); }

json to_json(const SessionConfig& cfg) {
    json lambdas = json::array();
    for (const auto& l : cfg.lambdas) lambdas.push_back(to_json(l));
    return json{{"relations", cfg.relations},
                {"kappa", print_expr(cfg.kappa)},
                {"hbar", to_json(cfg.hbar)},
                {"lambda", lambdas},
                {"beta", to_json(cfg.beta)},
                {"C", to_json(cfg.C)},
                {"grid", {{"start", cfg.grid.start}, {"stop", cfg.grid.stop}, {"step", cfg.grid.step}}},
                {"dim", cfg.dim},
                {"init", cfg.init},
                {"tol", {{"residual", cfg.tol_residual}, {"invariant", cfg.tol_invariant}}},
                {"seed", cfg.seed},
                {"out", {{"json", cfg.out_json}, {"csv", cfg.out_csv}}}};
}

json to_json(const ResidualReport& r) {
    json meta = json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    json grid = json::object();
    if (!r.points.empty()) {
        grid["start"] = r.points.front().z;
        grid["stop"] = r.points.back().z;
        grid["count"] = r.points.size();
        grid["step"] = r.points.size() > 1 ? (r.points.back().z - r.points.front().z) / double(r.points.size() - 1) : 0.0;
    }
    return json{{"name", r.name},       {"kind", "residual"},        {"max_residual", r.max_norm()},
                {"max_z", r.max_z()},   {"masked", r.masked_count()}, {"tolerance", r.tolerance},
                {"pass", r.pass()},     {"grid", grid},              {"metadata", meta}};
}

json to_json(const CriterionResult& r) {
    json metrics = json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    return json{{"criterion", r.id},          {"name", r.name},         {"pass", r.pass},
                {"measured", r.measured},     {"tolerance", r.tolerance}, {"metrics", metrics},
                {"notes", r.notes}};
}

Report::Report(std::string subcommand, const SessionConfig& cfg)
    : subcommand_(std::move(subcommand)), config_(to_json(cfg)) {}

void Report::add(json result) { results_.push_back(std::move(result)); }

void Report::add_residual(const ResidualReport& r, bool gated) {
    json j = to_json(r);
    j["gated"] = gated;
    results_.push_back(std::move(j));
    residuals_.push_back(r);
    if (gated) {
        const double m = r.max_norm();
        if (std::isfinite(m)) max_residual_ = std::max(max_residual_, m);
        if (!r.pass()) pass_ = false;
    }
}

void Report::add_check(const std::string& name, bool ok, json detail) {
    results_.push_back(json{{"name", name}, {"kind", "check"}, {"pass", ok}, {"detail", std::move(detail)}});
    if (!ok) pass_ = false;
}

json Report::document(double wall_seconds) const {
    json outputs = {{"json", config_["out"]["json"]}, {"csv", config_["out"]["csv"]}};
    return json{{"manifest",
                 {{"subcommand", subcommand_},
                  {"version", NCPII_VERSION},
                  {"config", config_},
                  {"seed", config_["seed"]},
                  {"outputs", outputs}}},
                {"results", results_},
                {"max_residual", max_residual_},
                {"pass", pass_},
                {"timing", {{"wall_seconds", wall_seconds}}}};
}

std::string Report::csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "report,z,norm,masked\n";
    for (const auto& r : residuals_)
        for (const auto& p : r.points) os << r.name << ',' << p.z << ',' << p.norm << ',' << (p.masked ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace ncpii::cli
