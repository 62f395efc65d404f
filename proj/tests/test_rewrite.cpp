#include <doctest.h>

#include <random>

#include "ncpii/exprio.hpp"
#include "ncpii/rewrite.hpp"

using namespace ncpii;

namespace {

NCExpr P(const char* s) { return parse_expression(s); }

NCExpr random_f_word_sum(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nterms(1, 3), len(1, 5), letter(0, 3), coef(-3, 3);
    const std::vector<std::string> names{"f0", "f1", "f2", "z"};
    NCExpr e;
    for (int t = nterms(rng); t > 0; --t) {
        NCExpr m = NCExpr(coef(rng));
        for (int k = len(rng); k > 0; --k) m = m * NCExpr::generator(names[static_cast<std::size_t>(letter(rng))]);
        e += m;
    }
    return e;
}

// Noumi-Yamada right-hand sides for the derivatives of f0, f1, f2.
NCExpr ny_substitute(const NCExpr& e) {
    NCExpr r = substitute(e, Atom{"f0", 1}, P("f0*f2 + f2*f0 + alpha0"));
    r = substitute(r, Atom{"f1", 1}, P("-f1*f2 - f2*f1 + alpha1"));
    return substitute(r, Atom{"f2", 1}, P("f1 - f0"));
}

}  // namespace

TEST_CASE("QP1 rules are oriented to the larger word") {
    const RewriteSystem R = RewriteSystem::qp1();
    REQUIRE(R.rules().size() == 3);
    for (const auto& rule : R.rules())
        for (const auto& [w, c] : rule.rhs.by_word()) CHECK(compare_words(w, rule.lhs) < 0);
    CHECK(normal_form(P("f1*f0"), R) == P("f0*f1 + 2*hbar*f2"));
    CHECK(normal_form(P("f2*f0"), R) == P("f0*f2 - hbar"));
    CHECK(normal_form(P("f2*f1"), R) == P("f1*f2 + hbar"));
}

TEST_CASE("ZF moves z to the left of f2") {
    const RewriteSystem R = RewriteSystem::zf(P("kappa"));
    CHECK(normal_form(P("f2*z"), R) == P("z*f2 - kappa*f2"));
    CHECK(normal_form(P("f2*f2*z"), R) == P("z*f2*f2 - 2*kappa*f2*f2"));
    CHECK_THROWS(RewriteSystem::zf(P("f0")));
}

TEST_CASE("inverse cancellation and the central variable family") {
    CHECK(normal_form(P("a*inv(a)*b"), RewriteSystem::inv()) == P("b"));
    CHECK(normal_form(P("inv(a)*a"), RewriteSystem::inv()) == NCExpr::one());
    CHECK(normal_form(P("q*z*p"), RewriteSystem::central_z()) == P("z*q*p"));
    RewriteSystem off = RewriteSystem::inv();
    off.set_cancel_inverses(false);
    CHECK(normal_form(P("a*inv(a)"), off) == P("a*inv(a)"));
}

TEST_CASE("normal forms are independent of the strategy") {
    const RewriteSystem R = RewriteSystem::qp1().merged(RewriteSystem::zf(P("i*hbar")));
    std::mt19937_64 rng(0);
    for (int k = 0; k < 200; ++k) {
        const NCExpr e = random_f_word_sum(rng);
        const NCExpr a = normal_form(e, R, Strategy::LeftmostFirst);
        const NCExpr b = normal_form(e, R, Strategy::RightmostFirst);
        INFO(print_expr(e));
        REQUIRE(a == b);
        REQUIRE(is_normal(a, R));
    }
}

TEST_CASE("normal form is idempotent and linear") {
    const RewriteSystem R = RewriteSystem::qp1();
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k) {
        const NCExpr a = random_f_word_sum(rng), b = random_f_word_sum(rng);
        const NCExpr na = normal_form(a, R);
        CHECK(normal_form(na, R) == na);
        CHECK(normal_form(a + b, R) == na + normal_form(b, R));
    }
}

TEST_CASE("derivation commutes with QP1 normal form under the Noumi-Yamada flow") {
    const RewriteSystem R = RewriteSystem::qp1();
    std::mt19937_64 rng(2);
    for (int k = 0; k < 100; ++k) {
        NCExpr e = random_f_word_sum(rng);
        e = substitute(e, Atom{"z"}, P("f2"));  // z is not part of the flow
        const NCExpr lhs = normal_form(ny_substitute(derive(normal_form(e, R))), R);
        const NCExpr rhs = normal_form(ny_substitute(derive(e)), R);
        INFO(print_expr(e));
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("rules that do not decrease are refused") {
    RewriteSystem R;
    CHECK_THROWS_AS(R.add_rule({Word{{"a"}}, P("a*a"), "grow"}), NonDecreasingRule);
    R.add_rule_unchecked({Word{{"a"}}, P("a*a"), "grow"});
    R.set_budget(50);
    CHECK_THROWS_AS(normal_form(P("a"), R), RewriteBudgetExceeded);
}

TEST_CASE("relations are oriented by their leading word") {
    const RewriteRule r = orient(P("u'' - 2*u^3 + 2*z*u + 2*u*z - C"));
    CHECK(word_str(r.lhs) == "u''");
    CHECK(r.rhs == P("2*u^3 - 2*z*u - 2*u*z + C"));
    CHECK_THROWS(orient(NCExpr::zero()));
}

TEST_CASE("step statistics are reported") {
    NormalFormStats st;
    normal_form(P("f2*f1*f0"), RewriteSystem::qp1(), Strategy::LeftmostFirst, &st);
    CHECK(st.steps > 0);
}
