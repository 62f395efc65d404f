#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ncpii {

// One line of the acceptance table. `metrics` are the measured quantities
// (name, value) and `tolerances` the thresholds they are compared against.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;   // headline quantity
    double tolerance = 0.0;  // headline threshold
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> notes;

    std::string line() const;
};

CriterionResult criterion_qdet_inverse_duality(std::uint64_t seed = 0);
CriterionResult criterion_commutative_reduction(std::uint64_t seed = 0);
CriterionResult criterion_toda_zero_curvature();
CriterionResult criterion_ncpii_zero_curvature();
CriterionResult criterion_quantum_derivation();
CriterionResult criterion_riccati_closed_form();
CriterionResult criterion_toda_seed();
CriterionResult criterion_darboux_consistency(std::uint64_t seed = 0);
CriterionResult criterion_darboux_covariance();
CriterionResult criterion_linear_integrator();

CriterionResult run_criterion(int id, std::uint64_t seed = 0);
inline constexpr int kCriterionCount = 10;

}  // namespace ncpii
