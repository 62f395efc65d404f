#include <doctest.h>

#include <random>

#include "ncpii/exprio.hpp"

using namespace ncpii;

namespace {

// Random sums of monomials over a small alphabet, including primed and
// inverted letters and Laurent central factors.
NCExpr random_expression(std::mt19937_64& rng) {
    const std::vector<Atom> letters{{"z"}, {"f2"}, {"u"}, {"u", 1}, {"q", 2}, {"phi", 0, true}, {"psi"}};
    const std::vector<std::string> centrals{"lambda", "hbar", "C"};
    std::uniform_int_distribution<int> nterms(0, 4), len(0, 4), letter(0, static_cast<int>(letters.size()) - 1),
        coef(-6, 6), den(1, 4), cen(0, 3), expo(-2, 2);
    NCExpr e;
    for (int t = nterms(rng); t > 0; --t) {
        Word w;
        for (int k = len(rng); k > 0; --k) w.push_back(letters[static_cast<std::size_t>(letter(rng))]);
        CentralMonomial m;
        const int c = cen(rng);
        if (c < 3) m = CentralMonomial::symbol(centrals[static_cast<std::size_t>(c)], expo(rng));
        const Gaussian g(Rational(coef(rng), den(rng)), Rational(coef(rng), den(rng)));
        e += NCExpr::term(g, m, w);
    }
    return e;
}

}  // namespace

TEST_CASE("print then parse is the identity on 1000 random expressions") {
    std::mt19937_64 rng(0);
    for (int k = 0; k < 1000; ++k) {
        const NCExpr e = random_expression(rng);
        const std::string text = print_expr(e);
        INFO("text: " << text);
        REQUIRE(parse_expression(text) == e);
    }
}

TEST_CASE("grammar corner cases") {
    CHECK(print_expr(NCExpr::zero()) == "0");
    CHECK(parse_expression("-a + b") == NCExpr::generator("b") - NCExpr::generator("a"));
    CHECK(parse_expression("a/2") == Gaussian(Rational(1, 2)) * NCExpr::generator("a"));
    CHECK(parse_expression("i*i") == NCExpr(-1));
    CHECK(parse_expression("lambda^-2") == NCExpr::central("lambda", -2));
    CHECK(parse_expression("inv(a)*a") == parse_expression("inv(a)*a"));
    CHECK(parse_expression("D(a*b)") == parse_expression("a'*b + a*b'"));
    CHECK(parse_relation("u'' = 2*u^3 - C") == parse_expression("u'' - 2*u^3 + C"));
    CHECK(parse_relation("a*b") == parse_expression("a*b"));
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_expression("a + * b");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parse_expression("sin(a)"), ParseError);
    CHECK_THROWS_AS(parse_expression("(a+b)^-1"), ParseError);
    CHECK_THROWS_AS(parse_expression("a/b"), ParseError);
    CHECK_THROWS_AS(parse_expression("a $ b"), ParseError);
    CHECK_THROWS_AS(parse_expression("(a"), ParseError);
}

TEST_CASE("config defaults and overrides") {
    const SessionConfig c = load_config("grid.start = 0\ngrid.stop = 1\n");
    CHECK(c.C == Gaussian(2));
    CHECK(c.grid.step == doctest::Approx(1e-3));
    CHECK(c.grid.count() == 1001);
    CHECK(c.seed == 0);
    CHECK(c.kappa == parse_expression("i*hbar"));

    const SessionConfig d = load_config(
        "# comment\nrelations = qp1, zf\nhbar = 1/2\nkappa = i*hbar\nlambda = 0.25, 1+i\n"
        "grid.start = -1\ngrid.stop = 1\ngrid.step = 0.01\ndim = 2\ninit.phi = 1\nseed = 7\n");
    CHECK(d.relations == std::vector<std::string>{"qp1", "zf"});
    CHECK(d.lambdas.size() == 2);
    CHECK(d.lambdas[1] == Gaussian(Rational(1), Rational(1)));
    CHECK(d.kappa_value() == Gaussian(Rational(0), Rational(1, 2)));
    CHECK(d.dim == 2);
    CHECK(d.init.at("phi") == "1");
    CHECK(d.seed == 7);
    CHECK(d.rewrite_system().rules().size() == 4);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(load_config("grid.stop = 1\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start = 0\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start = 1\ngrid.stop = 0\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start = 0\ngrid.stop = 1\ngrid.step = 0\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start = 0\ngrid.stop = 1\nrelations = weyl\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start = 0\ngrid.stop = 1\ncolour = blue\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start = 0\ngrid.stop = 1\nkappa = f2\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start = 0\ngrid.stop = 1\ndim = 0\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start = 0\ngrid.stop = 1\nseed = -1\n"), ConfigError);
    CHECK_THROWS_AS(load_config("grid.start\n"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/session.cfg"), ConfigError);
}
