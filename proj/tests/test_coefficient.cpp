#include <doctest.h>

#include "ncpii/coefficient.hpp"

using namespace ncpii;

TEST_CASE("rational arithmetic stays reduced") {
    Rational a(6, -8);
    CHECK(a.num() == -3);
    CHECK(a.den() == 4);
    CHECK((a + Rational(3, 4)).is_zero());
    CHECK((Rational(1, 3) * Rational(3, 5)) == Rational(1, 5));
    CHECK((Rational(1, 2) / Rational(1, 4)) == Rational(2));
    CHECK(Rational(-1, 4).str() == "-1/4");
    CHECK(Rational(7).str() == "7");
    CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("rational zero division and overflow throw") {
    CHECK_THROWS(Rational(1, 0));
    CHECK_THROWS(Rational(0).inverse());
    const Rational big(std::int64_t(1) << 62);
    CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("decimal literals are exact") {
    CHECK(Rational::from_decimal("0.25") == Rational(1, 4));
    CHECK(Rational::from_decimal("1e-3") == Rational(1, 1000));
    CHECK(Rational::from_decimal("2.5E+2") == Rational(250));
    CHECK(Rational::from_decimal("12") == Rational(12));
}

TEST_CASE("gaussian rationals") {
    const Gaussian i = Gaussian::i();
    CHECK(i * i == Gaussian(-1));
    CHECK(Gaussian(Rational(1), Rational(2)).inverse() == Gaussian(Rational(1, 5), Rational(-2, 5)));
    CHECK(i.str() == "i");
    CHECK((-i).str() == "-i");
    CHECK((Gaussian(3) * i).str() == "3*i");
    CHECK(Gaussian(Rational(1, 2), Rational(2)).str() == "(1/2+2*i)");
    CHECK(Gaussian(Rational(1, 2), Rational(2)).conj() == Gaussian(Rational(1, 2), Rational(-2)));
    CHECK_THROWS(Gaussian(0).inverse());
}
