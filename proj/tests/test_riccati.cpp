#include <doctest.h>

#include <cmath>
#include <random>

#include "ncpii/laxzc.hpp"
#include "ncpii/riccati.hpp"

using namespace ncpii;

TEST_CASE("closed-form pair at lambda1 = 0.25") {
    const auto cf = riccati_closed_form(0.25, 0.1, 2.0, 1e-3);
    CHECK(cf.report.max_norm() < 1e-8);
    CHECK(cf.report.masked_count() == 0);
    // Near z = 0 the pole is excluded.
    const auto near = riccati_closed_form(0.25, -0.5, 0.5, 1e-3);
    CHECK(near.report.masked_count() > 0);
    CHECK(near.report.max_norm() < 1e-8);
}

TEST_CASE("trivial data have zero residual") {
    const GridFunction zero = GridFunction::constant(0.0, 0.01, 11, RingValue(0.0));
    CHECK(ncpii_riccati_residual(zero, zero, 0.5).max_norm() == 0.0);
    CHECK(quantum_riccati_residual(zero, zero, 0.5, QuantumRiccatiMode::WithLambda).max_norm() == 0.0);
    CHECK(quantum_riccati_residual(zero, zero, 0.5, QuantumRiccatiMode::Bare).max_norm() == 0.0);
}

TEST_CASE("Gamma = chi Phi^-1 from the NC PII linear system") {
    const GridFunction u = GridFunction::sample(0.0, 1e-3, 1001, [](double z) { return RingValue(0.3 * z); });
    const cplx l = 0.7;
    const auto s = integrate_linear_system(LinearSystemKind::NcPii, l, u, RingValue(0.4), RingValue(1.0));
    const auto g = gamma_from_linear(s.X, s.Y);
    CHECK(g.singular_z.empty());
    CHECK(ncpii_riccati_residual(g.gamma, u, l).max_norm() < 1e-6);
}

TEST_CASE("matrix Gamma satisfies the Riccati form") {
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    CMatrix a(2, 2), x0(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            a(i, j) = cplx(d(rng), d(rng));
            x0(i, j) = cplx(d(rng), d(rng));
        }
    const GridFunction u = GridFunction::sample(0.0, 1e-3, 501, [&](double z) { return RingValue(CMatrix(z * a)); });
    const auto s = integrate_linear_system(LinearSystemKind::NcPii, 0.5, u, RingValue(x0), RingValue::identity(2));
    CHECK(ncpii_riccati_residual(gamma_from_linear(s.X, s.Y).gamma, u, 0.5).max_norm() < 1e-6);
}

TEST_CASE("chi = Phi gives the identity") {
    const GridFunction p = GridFunction::sample(0.0, 0.1, 11, [](double z) { return RingValue(1.0 + z); });
    const auto g = gamma_from_linear(p, p);
    for (int k = 0; k < p.count(); ++k) CHECK(std::abs(g.gamma[k](0, 0) - 1.0) < 1e-15);
}

TEST_CASE("coth from the q = 1 closed form is singular at z = 0") {
    const GridFunction q = GridFunction::constant(0.0, 1e-3, 1001, RingValue(1.0));
    const auto s = integrate_linear_system(LinearSystemKind::Toda, 0.0, q, RingValue(1.0), RingValue(0.0));
    const auto g = gamma_from_linear(s.X, s.Y);  // cosh / sinh
    REQUIRE(g.singular_z.size() == 1);
    CHECK(g.singular_z[0] == 0.0);
    CHECK(std::abs(g.gamma[1000](0, 0) - 1.0 / std::tanh(1.0)) < 1e-10);
}

TEST_CASE("quantum Riccati modes differ by 4i(lambda - 1) Delta") {
    const GridFunction f = GridFunction::sample(0.0, 1e-3, 1001, [](double z) { return RingValue(0.5 - 0.2 * z); });
    for (cplx l : {cplx(1.0), cplx(0.6)}) {
        const auto s = integrate_linear_system(LinearSystemKind::Quantum, l, f, RingValue(0.3), RingValue(1.0));
        const auto D = gamma_from_linear(s.X, s.Y);
        const auto with = quantum_riccati_residual(D.gamma, f, l, QuantumRiccatiMode::WithLambda);
        const auto bare = quantum_riccati_residual(D.gamma, f, l, QuantumRiccatiMode::Bare);
        CHECK(with.max_norm() < 1e-6);
        double expect = 0.0;
        for (int k = 0; k < f.count(); ++k) expect = std::max(expect, std::abs(4.0 * (l - 1.0) * D.gamma[k](0, 0)));
        CHECK(bare.max_norm() == doctest::Approx(expect).epsilon(1e-3));
    }
}

TEST_CASE("at d = 1 the quantum form with zero f2 commutator is the NC PII form") {
    const GridFunction f = GridFunction::sample(0.0, 1e-3, 501, [](double z) { return RingValue(0.2 + z); });
    const GridFunction D = GridFunction::sample(0.0, 1e-3, 501, [](double z) { return RingValue(std::sin(z)); });
    const auto a = quantum_riccati_residual(D, f, 0.4);
    const auto b = ncpii_riccati_residual(D, f, 0.4);
    for (std::size_t k = 0; k < a.points.size(); ++k) CHECK(a.points[k].norm == doctest::Approx(b.points[k].norm));
}
