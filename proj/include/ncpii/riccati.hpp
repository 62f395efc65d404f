#pragma once

#include <vector>

#include "ncpii/grid.hpp"

namespace ncpii {

// Gamma' + 4i l Gamma - u + Gamma u Gamma. Gamma' by finite differences
// unless an exact derivative is supplied.
ResidualReport ncpii_riccati_residual(const GridFunction& gamma, const GridFunction& u, cplx lambda,
                                      double tolerance = 1e-5, const GridFunction* dgamma = nullptr);

enum class QuantumRiccatiMode {
    WithLambda,  // Delta' + 4i l Delta - f - [f, Delta] + Delta f Delta
    Bare,        // Delta' = -4i Delta + ..., i.e. the lambda dropped
};

ResidualReport quantum_riccati_residual(const GridFunction& delta, const GridFunction& f, cplx lambda,
                                        QuantumRiccatiMode mode = QuantumRiccatiMode::WithLambda,
                                        double tolerance = 1e-5, const GridFunction* ddelta = nullptr);

// Gamma = chi Phi^-1 pointwise. Points where Phi cannot be inverted are
// recorded (and set to zero) instead of aborting.
struct RiccatiField {
    GridFunction gamma;
    std::vector<double> singular_z;
    std::vector<bool> singular;  // per grid point
};
RiccatiField gamma_from_linear(const GridFunction& chi, const GridFunction& Phi);

// Closed-form scalar pair Gamma = exp(4i l1 z),
// u = -8i l1 (1 - exp(-8i l1 z))^-1 exp(-4i l1 z), checked with the exact
// Gamma'. Points within `exclusion` of a pole of u are masked.
struct ClosedFormRiccati {
    GridFunction gamma, dgamma, u;
    std::vector<double> poles;
    ResidualReport report;
};
ClosedFormRiccati riccati_closed_form(cplx lambda1, double start, double stop, double step, double exclusion = 0.05,
                                      double tolerance = 1e-10);

}  // namespace ncpii
