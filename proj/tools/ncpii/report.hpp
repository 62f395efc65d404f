#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ncpii/acceptance.hpp"
#include "ncpii/exprio.hpp"
#include "ncpii/grid.hpp"

namespace ncpii::cli {

using nlohmann::json;

json to_json(const cplx& c);
json to_json(const Gaussian& g);
json to_json(const SessionConfig& cfg);
json to_json(const ResidualReport& r);
json to_json(const CriterionResult& r);

// Collects results for one run. Everything except `timing` is a pure
// function of the resolved config and seed, so repeated runs produce
// byte-identical `report` documents.
class Report {
public:
    Report(std::string subcommand, const SessionConfig& cfg);

    void add(json result);
    // Adds a residual report, folding its maximum into max_residual and its
    // pass flag into the overall verdict; also kept for the CSV output.
    void add_residual(const ResidualReport& r, bool gated = true);
    void add_check(const std::string& name, bool ok, json detail = json::object());
    void fail() { pass_ = false; }

    bool pass() const { return pass_; }
    json document(double wall_seconds) const;

    // Columns: report,z,norm,masked.
    std::string csv() const;

private:
    std::string subcommand_;
    json config_;
    std::vector<json> results_;
    std::vector<ResidualReport> residuals_;
    double max_residual_ = 0.0;
    bool pass_ = true;
};

}  // namespace ncpii::cli
