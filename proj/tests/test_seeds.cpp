#include <doctest.h>

#include <cmath>

#include "ncpii/seeds.hpp"

using namespace ncpii;

TEST_CASE("scalar Toda seed gives PII with C = 4(beta + 1/2)") {
    const TodaInit init{RingValue(1.0), RingValue(0.1), RingValue(0.5), RingValue(0.05)};
    const TodaPair p = integrate_toda_pair(0.0, init, TodaGrid{0.0, 1.0, 1e-3}, 1e-10);
    CHECK(p.max_drift < 1e-10);
    CHECK(ncpii_residual(p.u1, pii_constant(0.0)).max_norm() < 1e-5);
    CHECK(std::abs(best_fit_C(p.u1) - 2.0) < 1e-6);
}

TEST_CASE("nonzero beta keeps the invariant and shifts the constants") {
    // psi phi' - psi' phi = 1*0.4 - (-0.2)*1 = 0.6 = 2 beta.
    const cplx beta = 0.3;
    const TodaInit init{RingValue(1.0), RingValue(0.4), RingValue(1.0), RingValue(-0.2)};
    const TodaPair p = integrate_toda_pair(beta, init, TodaGrid{0.0, 1.0, 1e-3}, 1e-8);
    CHECK(p.max_drift < 1e-10);
    CHECK(ncpii_residual(p.u1, pii_constant(beta)).max_norm() < 1e-5);
    // u_-1 = psi' psi^-1 satisfies PII with C = 2 - 4 beta.
    CHECK(std::abs(best_fit_C(p.u_minus1) - (2.0 - 4.0 * beta)) < 1e-6);
    CHECK(ncpii_residual(p.u_minus1, 2.0 - 4.0 * beta).max_norm() < 1e-5);
}

TEST_CASE("matrix Toda seed") {
    CMatrix phi(2, 2), psi(2, 2);
    phi << 1.0, 0.1, 0.0, 1.2;
    psi << 0.5, 0.0, 0.05, 0.6;
    // phi' = psi' = 0 satisfies the invariant with beta = 0.
    const TodaInit init{RingValue(phi), RingValue::zero(2), RingValue(psi), RingValue::zero(2)};
    const TodaPair p = integrate_toda_pair(0.0, init, TodaGrid{0.0, 1.0, 1e-3}, 1e-8);
    CHECK(p.max_drift < 1e-9);
    CHECK(ncpii_residual(p.u1, pii_constant(0.0)).max_norm() < 1e-5);
}

TEST_CASE("invalid initial data and blow-up") {
    const TodaInit bad{RingValue(1.0), RingValue(1.0), RingValue(1.0), RingValue(0.0)};
    CHECK(toda_init_defect(0.0, bad) == doctest::Approx(1.0));
    CHECK_THROWS_AS(integrate_toda_pair(0.0, bad, TodaGrid{}), std::invalid_argument);
    // phi crosses zero before z = 1 for this data.
    const TodaInit pole{RingValue(1.0), RingValue(0.3), RingValue(2.0), RingValue(0.6)};
    CHECK_THROWS_AS(integrate_toda_pair(0.0, pole, TodaGrid{0.0, 3.0, 1e-3}), IntegrationFailure);
}
