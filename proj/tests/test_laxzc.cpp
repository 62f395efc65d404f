#include <doctest.h>

#include <cmath>

#include "ncpii/exprio.hpp"
#include "ncpii/laxzc.hpp"

using namespace ncpii;

namespace {
NCExpr P(const char* s) { return parse_expression(s); }
}  // namespace

TEST_CASE("Pauli matrices") {
    CHECK(is_zero(pauli1() * pauli1() - identity2()));
    CHECK(is_zero(pauli1() * pauli2() - NCExpr::imag() * pauli3()));
    CHECK(is_zero(pauli3() * pauli3() - identity2()));
}

TEST_CASE("Toda pair: reference entries and reduction") {
    const LaxPair T = build_toda_lax();
    const RewriteSystem R = RewriteSystem::inv();
    const auto raw = zero_curvature_symbolic(T, R);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            CHECK(raw.Az_minus_Bl(i, j) == normal_form(toda_reference_Az_minus_Bl()(i, j), R));
            CHECK(raw.commutator(i, j) == normal_form(toda_reference_commutator()(i, j), R));
        }
    // Modulo the quotient only a constant diagonal survives: A_z - B_lambda
    // carries trace -6 while BA - AB is traceless.
    const auto red = zero_curvature_symbolic(T, RewriteSystem::central_z(), toda_quotient());
    CHECK(red.residual(1, 1) == NCExpr(-3));
    CHECK(red.residual(2, 2) == NCExpr(-3));
    CHECK(red.residual(1, 2).is_zero());
    CHECK(red.residual(2, 1).is_zero());
}

TEST_CASE("NC PII pair") {
    const Mat2 raw = zero_curvature_expression(build_ncpii_lax());
    const RewriteSystem R = RewriteSystem::inv();
    CHECK(normal_form(raw(1, 2), R) == P("i*C - 2*i*z*u - 2*i*u*z + 2*i*u^3 - i*u''"));
    CHECK(normal_form(raw(2, 1) + raw(1, 2), R).is_zero());
    CHECK(normal_form(raw(1, 1), R).is_zero());
    const auto red = zero_curvature_symbolic(build_ncpii_lax(), R, {ncpii_relation()});
    CHECK(is_zero(red.residual));
}

TEST_CASE("quantum PII derivation") {
    const QuantumDerivation q = quantum_pii_derivation();
    CHECK(q.diagonal_raw(1, 1) == P("2*hbar*f2 - 2*i*z*f2 + 2*i*f2*z"));
    CHECK(q.kappa == P("-i*hbar"));
    CHECK(q.kappa_unique);
    CHECK(q.kappa_linear_in_hbar);
    CHECK(q.diagonal_annihilated);
    CHECK(q.lemma_computed == P("4*hbar*lambda"));
    CHECK(q.lemma_reference == P("-4*hbar*lambda"));
    CHECK(q.lemma_unscaled == P("-2*hbar"));
    // Either sign of the lemma leaves 8 i hbar lambda in one off-diagonal entry.
    CHECK(q.offdiag12_reference_lemma == P("8*i*hbar*lambda"));
    CHECK(q.offdiag21_reference_lemma.is_zero());
    CHECK(q.offdiag12_computed_lemma.is_zero());
    CHECK(q.offdiag21_computed_lemma == P("8*i*hbar*lambda"));
    CHECK(!q.offdiag_reduces_reference);
    CHECK(!q.offdiag_reduces_computed);
    CHECK(q.classical_limit_ok);
    CHECK(q.reduces_to_ncpii_pair);
}

TEST_CASE("quotient systems add derivative closures") {
    const RewriteSystem R = quotient_system(RewriteSystem::inv(), {ncpii_relation()}, 1);
    CHECK(R.rules().size() == 2);
    CHECK(normal_form(P("u'''"), R) == normal_form(derive(P("2*u^3 - 2*z*u - 2*u*z + C")), R));
}

TEST_CASE("linear system integrator against the q = 1 closed form") {
    const GridFunction q = GridFunction::constant(0.0, 1e-3, 1001, RingValue(1.0));
    const auto s = integrate_linear_system(LinearSystemKind::Toda, 0.0, q, RingValue(1.0), RingValue(0.0));
    CHECK(std::abs(s.X[1000](0, 0) - std::cosh(1.0)) < 1e-12);
    CHECK(std::abs(s.Y[1000](0, 0) - std::sinh(1.0)) < 1e-12);
    const auto n = integrate_linear_system(LinearSystemKind::NcPii, 0.5, GridFunction::constant(0.0, 1e-3, 1001, 0.0),
                                           RingValue(1.0), RingValue(1.0));
    CHECK(std::abs(n.X[1000](0, 0) - std::exp(cplx(0.0, -1.0))) < 1e-12);
    CHECK(std::abs(n.Y[1000](0, 0) - std::exp(cplx(0.0, 1.0))) < 1e-12);
    CHECK_THROWS_AS(integrate_linear_system(LinearSystemKind::Toda, 0.0, q, RingValue::identity(2), RingValue(0.0)),
                    DimensionMismatch);
}

TEST_CASE("numeric zero curvature of the NC PII pair on a constant field") {
    // u = 0 solves u'' = 2u^3 - 2(zu+uz) + C only for C = 0.
    const GridFunction u = GridFunction::constant(0.0, 1e-2, 101, RingValue(0.0));
    const auto ok = zero_curvature_numeric(build_ncpii_lax(), {{"u", u}}, {0.5, cplx(1.0, 1.0)}, {{"C", 0.0}}, 1e-10);
    CHECK(ok.max_residual < 1e-12);
    const auto bad = zero_curvature_numeric(build_ncpii_lax(), {{"u", u}}, {0.5}, {{"C", 1.0}}, 1e-10);
    CHECK(bad.max_residual == doctest::Approx(std::sqrt(2.0)));
}
