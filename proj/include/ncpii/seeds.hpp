#pragma once

#include <stdexcept>
#include <string>

#include "ncpii/grid.hpp"

namespace ncpii {

class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double z) : std::runtime_error(what), z_(z) {}
    double z() const { return z_; }

private:
    double z_;
};

struct TodaInit {
    RingValue phi, dphi, psi, dpsi;
};

struct TodaGrid {
    double start = 0.0;
    double stop = 1.0;
    double step = 1e-3;
};

// phi, psi and their derivatives on the grid, with u1 = phi' phi^-1 and
// u_-1 = psi' psi^-1 formed from the integrated derivative states.
struct TodaPair {
    cplx beta;
    GridFunction phi, dphi, psi, dpsi;
    GridFunction u1, u_minus1;
    std::vector<double> invariant_drift;  // ||(psi phi' - psi' phi) - 2 beta I||
    double max_drift = 0.0;
};

// phi'' = 2 z phi - 2 phi psi phi, psi'' = 2 z psi - 2 psi phi psi by RK4 on
// the first-order system. Throws IntegrationFailure on blow-up (norm > 1e8),
// when det phi or det psi passes through zero between grid points,
// on a singular phi or psi, or when the drift exceeds `tol_invariant`.
TodaPair integrate_toda_pair(cplx beta, const TodaInit& init, const TodaGrid& grid, double tol_invariant = 1e-8);

// Checks psi phi' - psi' phi = 2 beta I at the initial point.
double toda_init_defect(cplx beta, const TodaInit& init);

// Residual u'' - 2u^3 + 2(zu + uz) - C I, with u'' by finite differences.
ResidualReport ncpii_residual(const GridFunction& u, cplx C, double tolerance = 1e-5);

// Least-squares constant C for the scalar trace of the residual (d = 1 uses
// the residual itself): mean of u'' - 2u^3 + 2(zu + uz) over interior points.
cplx best_fit_C(const GridFunction& u);

// C = 4(alpha + 1/2) for NC PII(z, alpha).
inline cplx pii_constant(cplx alpha) { return 4.0 * (alpha + 0.5); }

}  // namespace ncpii
