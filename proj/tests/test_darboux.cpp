#include <doctest.h>

#include <cmath>
#include <random>

#include "ncpii/darboux.hpp"
#include "ncpii/exprio.hpp"
#include "ncpii/seeds.hpp"

using namespace ncpii;

namespace {

RingValue rand_matrix(int d, std::mt19937_64& rng, double shift) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CMatrix m(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const double re = u(rng);
            const double im = u(rng);
            m(a, b) = cplx(re, im);
        }
    return RingValue(CMatrix(m + shift * CMatrix::Identity(d, d)));
}

GridFunction scalar_q() {
    return GridFunction::sample(0.0, 1e-3, 501, [](double z) { return RingValue(0.4 + 0.2 * z); });
}

EigenData random_eigen_data(int d, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const RingValue A = rand_matrix(d, rng, 0.0), B = rand_matrix(d, rng, 0.0);
    const GridFunction q = GridFunction::sample(0.0, 1e-2, 41, [&](double z) { return 0.5 * A + (0.5 * z) * B; });
    std::vector<cplx> lambdas;
    std::vector<std::pair<RingValue, RingValue>> init;
    for (int k = 0; k <= n; ++k) {
        lambdas.push_back(0.3 + 0.35 * k);
        init.emplace_back(rand_matrix(d, rng, 2.0), rand_matrix(d, rng, 0.0));
    }
    return EigenData::integrate(LinearSystemKind::Toda, q, lambdas, init);
}

}  // namespace

TEST_CASE("eigen data are verified on ingestion") {
    const GridFunction q = scalar_q();
    const auto s = integrate_linear_system(LinearSystemKind::Toda, 0.5, q, RingValue(1.0), RingValue(0.2));
    CHECK_NOTHROW(EigenData(LinearSystemKind::Toda, q, {{0.5, s.X, s.Y}}));
    CHECK_THROWS_AS(EigenData(LinearSystemKind::Toda, q, {{0.7, s.X, s.Y}}), std::invalid_argument);
    CHECK_THROWS_AS(EigenData(LinearSystemKind::Toda, q, {}), std::invalid_argument);
}

TEST_CASE("scalar one-fold collapses to q s^2") {
    const GridFunction q = scalar_q();
    const auto s = integrate_linear_system(LinearSystemKind::Toda, 0.5, q, RingValue(1.0), RingValue(0.3));
    const GridFunction q1 = one_fold_q(q, s.X, s.Y);
    for (int k = 0; k < q.count(); k += 50) {
        const cplx r = s.Y[k](0, 0) / s.X[k](0, 0);
        CHECK(std::abs(q1[k](0, 0) - q[k](0, 0) * r * r) < 1e-14);
    }
}

TEST_CASE("transforming a particular solution by itself annihilates it") {
    const GridFunction q = scalar_q();
    const auto s = integrate_linear_system(LinearSystemKind::Toda, 0.5, q, RingValue(1.0), RingValue(0.3));
    const auto t = transform_eigenfunctions(s.X, s.Y, s.X, s.Y, 0.5, 0.5);
    for (int k = 0; k < q.count(); ++k) {
        CHECK(t.X[k].norm() < 1e-14);
        CHECK(t.Y[k].norm() < 1e-14);
    }
}

TEST_CASE("covariance: the X line holds at lambda1, the Y line does not") {
    const GridFunction q = scalar_q();
    const cplx l1 = 0.5;
    const auto p = integrate_linear_system(LinearSystemKind::Toda, l1, q, RingValue(1.0), RingValue(0.3));
    const auto o = integrate_linear_system(LinearSystemKind::Toda, l1, q, RingValue(0.2), RingValue(1.0));
    const auto rep = covariance_diagnostic(one_fold_q(q, p.X, p.Y), transform_eigenfunctions(o.X, o.Y, p.X, p.Y, l1, l1),
                                           l1, pole_mask(p.X, p.Y));
    CHECK(rep.x_line.max_norm() < 1e-9);
    CHECK(rep.y_line.max_norm() > 1e-2);
    // Scalar check of the defects: X line (l - l1)(1 - s^2) q X, zero here;
    // Y line l1 q (1 - s^2)(Y - X (1 + s^2)/s + Y/s^2).
    const int k = 250;
    const cplx s = p.Y[k](0, 0) / p.X[k](0, 0), X = o.X[k](0, 0), Y = o.Y[k](0, 0);
    const cplx expect = l1 * q[k](0, 0) * (1.0 - s * s) * (Y - X * (1.0 + s * s) / s + Y / (s * s));
    CHECK(rep.y_line.points[k].norm == doctest::Approx(std::abs(expect)).epsilon(1e-6));
}

TEST_CASE("the X-line defect is linear in lambda - lambda1") {
    const GridFunction q = scalar_q();
    const cplx l1 = 0.5;
    const auto p = integrate_linear_system(LinearSystemKind::Toda, l1, q, RingValue(1.0), RingValue(0.3));
    const GridFunction q1 = one_fold_q(q, p.X, p.Y);
    auto x_defect = [&](double dl) {
        const auto o = integrate_linear_system(LinearSystemKind::Toda, l1 + dl, q, RingValue(0.2), RingValue(1.0));
        return covariance_diagnostic(q1, transform_eigenfunctions(o.X, o.Y, p.X, p.Y, l1 + dl, l1), l1 + dl)
            .x_line.max_norm();
    };
    CHECK(x_defect(2e-3) / x_defect(1e-3) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("alternating arrays follow the row pattern") {
    const auto A = build_upsilon_symbolic(2, ArrayKind::X);
    CHECK(A.order() == 3);
    CHECK(A(1, 1) == parse_expression("X2"));
    CHECK(A(2, 2) == NCExpr::central("lambda1") * parse_expression("Y1"));
    CHECK(A(3, 3) == NCExpr::central("lambda0", 2) * parse_expression("X0"));
    const auto B = build_upsilon_symbolic(1, ArrayKind::Y);
    CHECK(quasideterminant(B, 2, 2) ==
          NCExpr::central("lambda0") * parse_expression("X0") -
              NCExpr::central("lambda1") * parse_expression("X1*inv(Y1)*Y0"));
}

TEST_CASE("build_upsilon checks parity and slot count") {
    const EigenData E = random_eigen_data(1, 2, 0);
    CHECK_NOTHROW(build_upsilon(E, 2, ArrayKind::X, Parity::Odd, 0));
    CHECK_THROWS_AS(build_upsilon(E, 2, ArrayKind::X, Parity::Even, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_upsilon(E, 3, ArrayKind::X, Parity::Even, 0), std::invalid_argument);
    // The boxed quasideterminant of the 2x2 array is the one-fold X[1].
    const EigenData F = random_eigen_data(2, 1, 1);
    const auto t = transform_eigenfunctions(F[0].X, F[0].Y, F[1].X, F[1].Y, F[0].lambda, F[1].lambda);
    for (int k = 0; k < F.q().count(); k += 10)
        CHECK(relative_error(quasideterminant(build_upsilon(F, 1, ArrayKind::X, Parity::Even, k), 2, 2), t.X[k]) < 1e-13);
}

TEST_CASE("N-fold: quasideterminant form equals the iterated product form") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const EigenData E = random_eigen_data(2, 3, seed);
        for (int N = 1; N <= 3; ++N)
            CHECK(max_relative_error(phi_n_fold(E.q(), E, N), phi_n_fold_product(E.q(), E, N)) < 1e-8);
        CHECK(max_relative_error(phi_n_fold(E.q(), E, 1), one_fold_q(E.q(), E[1].X, E[1].Y)) == 0.0);
    }
}

TEST_CASE("psi uses the same generic construction") {
    const EigenData E = random_eigen_data(2, 2, 9);
    CHECK(max_relative_error(psi_n_fold(E.q(), E, 2), phi_n_fold(E.q(), E, 2)) == 0.0);
}

TEST_CASE("NC PII N-fold at N = 1 is the one-fold formula") {
    const TodaInit init{RingValue(1.0), RingValue(0.1), RingValue(0.5), RingValue(0.05)};
    const TodaPair seed = integrate_toda_pair(0.0, init, TodaGrid{0.0, 1.0, 1e-3});
    const GridFunction& u = seed.u1;
    std::vector<EigenSolution> slots;
    for (cplx l : {cplx(0.2), cplx(0.6)}) {
        const auto s = integrate_linear_system(LinearSystemKind::NcPii, l, u, RingValue(1.0), RingValue(0.5));
        slots.push_back({l, s.X, s.Y});
    }
    const EigenData E(LinearSystemKind::NcPii, u, slots);
    const GridFunction u2 = ncpii_n_fold(u, E, 1);
    for (int k = 0; k < u.count(); k += 100) {
        const RingValue s = E[1].Y[k] * E[1].X[k].inverse();
        CHECK(relative_error(u2[k], s * u[k] * s) < 1e-14);
    }
}

TEST_CASE("singular particular solutions are located") {
    const GridFunction q = scalar_q();
    GridFunction X = GridFunction::constant(0.0, 1e-3, 501, RingValue(1.0));
    X[100] = RingValue(0.0);
    try {
        one_fold_q(q, X, X);
        FAIL("expected a pointwise singularity");
    } catch (const PointwiseSingularity& e) {
        REQUIRE(e.locations().size() == 1);
        CHECK(e.locations()[0] == doctest::Approx(0.1));
    }
    const auto poles = pole_mask(X, X);
    CHECK(poles[100]);
    CHECK(!poles[99]);
}
