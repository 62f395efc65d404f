#include <doctest.h>

#include "ncpii/exprio.hpp"
#include "ncpii/ncexpr.hpp"

using namespace ncpii;

namespace {
NCExpr g(const std::string& s) { return NCExpr::generator(s); }
NCExpr P(const char* s) { return parse_expression(s); }
}  // namespace

TEST_CASE("products do not commute but central parameters do") {
    CHECK(!(g("a") * g("b") == g("b") * g("a")));
    const NCExpr l = NCExpr::central("lambda");
    CHECK(l * g("a") == g("a") * l);
    CHECK(commutator(g("a"), g("a")).is_zero());
    CHECK(anticommutator(g("a"), g("b")) == g("a") * g("b") + g("b") * g("a"));
}

TEST_CASE("central Laurent exponents cancel") {
    const NCExpr l = NCExpr::central("lambda");
    CHECK(l * NCExpr::central("lambda", -1) == NCExpr::one());
    CHECK(power(l, 3) * power(NCExpr::central("lambda", -1), 3) == NCExpr::one());
    CHECK(power(g("a"), 0) == NCExpr::one());
}

TEST_CASE("word order is prime weight, then length, then atom precedence") {
    const Word z{{"z"}}, f0{{"f0"}}, f2{{"f2"}}, u1{{"u", 1}}, uu{{"u"}, {"u"}}, a{{"a"}}, inva{{"a", 0, true}};
    CHECK(compare_words(z, f0) < 0);
    CHECK(compare_words(f0, f2) < 0);
    CHECK(compare_words(uu, u1) < 0);  // any primed word outweighs an unprimed one
    CHECK(compare_words(a, uu) < 0);
    CHECK(compare_words(a, inva) < 0);
    CHECK(compare_atoms(Atom{"f2"}, Atom{"b"}) < 0);
}

TEST_CASE("derivation obeys Leibniz and the inverse rule") {
    const NCExpr a = g("a"), b = g("b");
    CHECK(derive(a * b) == derive(a) * b + a * derive(b));
    CHECK(derive(NCExpr::generator("z")) == NCExpr::one());
    CHECK(derive(NCExpr::central("lambda")).is_zero());
    CHECK(print_expr(P("D(inv(phi))")) == "-inv(phi)*phi'*inv(phi)");
    CHECK(derive(P("u"), 2) == P("u''"));
}

TEST_CASE("inverse of a monomial reverses and inverts letters") {
    const NCExpr m = P("2*lambda*a*b");
    CHECK(m.inverse() == P("1/2*lambda^-1*inv(b)*inv(a)"));
    CHECK_THROWS(P("a+b").inverse());
}

TEST_CASE("substitutions") {
    CHECK(specialize(P("lambda^2*a + hbar"), "lambda", Gaussian(3)) == P("9*a + hbar"));
    CHECK_THROWS(specialize(P("lambda^-1*a"), "lambda", Gaussian(0)));
    CHECK(substitute_central(P("kappa*f2"), "kappa", P("i*hbar")) == P("i*hbar*f2"));
    CHECK(substitute(P("a*b*a"), Atom{"a"}, P("c+1")) == P("(c+1)*b*(c+1)"));
    CHECK(substitute_generator(P("u'' + u"), "u", P("z*w")) == P("2*w' + z*w'' + z*w"));
    CHECK(derive_central(P("lambda^-2*a"), "lambda") == P("-2*lambda^-3*a"));
}

TEST_CASE("word coefficients group central polynomials") {
    const auto w = P("lambda*a + hbar*a + b").by_word();
    REQUIRE(w.size() == 2);
    CHECK(w.begin()->second == P("lambda + hbar"));
}
