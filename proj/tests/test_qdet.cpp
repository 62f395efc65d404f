#include <doctest.h>

#include <random>

#include "ncpii/exprio.hpp"
#include "ncpii/qdet.hpp"
#include "ncpii/rewrite.hpp"

using namespace ncpii;

namespace {
NCExpr P(const char* s) { return parse_expression(s); }
}  // namespace

TEST_CASE("2x2 symbolic quasideterminants") {
    const SquareArray<NCExpr> A{{P("a11"), P("a12")}, {P("a21"), P("a22")}};
    CHECK(quasideterminant(A, 1, 1) == P("a11 - a12*inv(a22)*a21"));
    CHECK(quasideterminant(A, 2, 2) == P("a22 - a21*inv(a11)*a12"));
    CHECK(quasideterminant(A, 1, 2) == P("a12 - a11*inv(a21)*a22"));
    CHECK(quasideterminant(A, 2, 1) == P("a21 - a22*inv(a12)*a11"));
}

TEST_CASE("a 1x1 array is its own quasideterminant") {
    const SquareArray<RingValue> A{{RingValue(cplx(2.0, 1.0))}};
    CHECK(quasideterminant(A, 1, 1)(0, 0) == cplx(2.0, 1.0));
}

TEST_CASE("quasideterminants match the inverse oracle") {
    std::mt19937_64 rng(42);
    for (int n = 2; n <= 4; ++n)
        for (int d = 1; d <= 3; ++d) {
            const auto A = random_array(n, d, rng);
            const auto all = all_quasideterminants(A);
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    const RingValue& q = all[static_cast<std::size_t>((i - 1) * n + j - 1)];
                    CHECK(relative_error(q, inverse_entry_oracle(A, i, j)) < 1e-9);
                    CHECK(relative_error(q, quasideterminant(A, i, j)) < 1e-13);
                }
        }
}

TEST_CASE("scalar quasideterminants are determinant ratios") {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 4; ++n) {
        const auto A = random_array(n, 1, rng);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) CHECK(commutative_reduction_check(A, i, j) < 1e-10);
    }
}

TEST_CASE("heredity: a 3x3 quasideterminant by 2x2 blocks of quasideterminants") {
    std::mt19937_64 rng(5);
    const auto A = random_array(3, 2, rng);
    // Sylvester: |A|_33 = | |A^{1}|_22 ... | built from 2x2 minors with pivot (1,1).
    auto minor = [&](int r, int c) {
        SquareArray<RingValue> M{{A(1, 1), A(1, c)}, {A(r, 1), A(r, c)}};
        return quasideterminant(M, 2, 2);
    };
    const SquareArray<RingValue> S{{minor(2, 2), minor(2, 3)}, {minor(3, 2), minor(3, 3)}};
    CHECK(relative_error(quasideterminant(S, 2, 2), quasideterminant(A, 3, 3)) < 1e-12);
}

TEST_CASE("singular inner quasideterminants are reported with their minor") {
    const RingValue z = RingValue::zero(1), o = RingValue(1.0);
    const SquareArray<RingValue> A{{z, o}, {o, z}};
    try {
        quasideterminant(A, 1, 1);
        FAIL("expected a singular quasideterminant");
    } catch (const SingularQuasideterminant& e) {
        CHECK(e.rows() == std::vector<int>{2});
        CHECK(e.cols() == std::vector<int>{2});
    }
    CHECK(quasideterminant(A, 1, 2)(0, 0) == cplx(1.0));
}

TEST_CASE("argument validation") {
    std::mt19937_64 rng(0);
    const auto A = random_array(2, 2, rng);
    CHECK_THROWS_AS(quasideterminant(A, 3, 1), std::out_of_range);
    SquareArray<RingValue> B(2, RingValue::identity(2));
    B(1, 2) = RingValue::identity(3);
    CHECK_THROWS_AS(quasideterminant(B, 1, 1), DimensionMismatch);
    CHECK_THROWS_AS(commutative_reduction_check(A, 1, 1), DimensionMismatch);
    CHECK_THROWS(SquareArray<int>(0));
}
