#include <doctest.h>

#include <cmath>

#include "ncpii/grid.hpp"

using namespace ncpii;

namespace {
GridFunction scalar_grid(double h, int n, double (*f)(double)) {
    return GridFunction::sample(0.0, h, n, [f](double z) { return RingValue(f(z)); });
}
double max_abs_error(const GridFunction& g, double (*f)(double)) {
    double e = 0.0;
    for (int k = 0; k < g.count(); ++k) e = std::max(e, std::abs(g[k](0, 0) - f(g.z(k))));
    return e;
}
}  // namespace

TEST_CASE("stencils are exact on quartics") {
    auto quartic = [](double z) { return z * z * z * z - 2.0 * z + 1.0; };
    auto d1 = [](double z) { return 4.0 * z * z * z - 2.0; };
    auto d2 = [](double z) { return 12.0 * z * z; };
    const GridFunction g = scalar_grid(0.1, 11, quartic);
    CHECK(max_abs_error(g.derivative(), d1) < 1e-11);
    CHECK(max_abs_error(g.second_derivative(), d2) < 1e-9);
}

TEST_CASE("stencils converge at fourth order, edges included") {
    const double e1 = max_abs_error(scalar_grid(0.05, 21, [](double z) { return std::sin(3 * z); }).derivative(),
                                    [](double z) { return 3 * std::cos(3 * z); });
    const double e2 = max_abs_error(scalar_grid(0.025, 41, [](double z) { return std::sin(3 * z); }).derivative(),
                                    [](double z) { return 3 * std::cos(3 * z); });
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.1));
    const double s1 = max_abs_error(scalar_grid(0.05, 21, [](double z) { return std::exp(z); }).second_derivative(),
                                    [](double z) { return std::exp(z); });
    const double s2 = max_abs_error(scalar_grid(0.025, 41, [](double z) { return std::exp(z); }).second_derivative(),
                                    [](double z) { return std::exp(z); });
    CHECK(std::log2(s1 / s2) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("cubic interpolation reproduces cubics") {
    const GridFunction g = scalar_grid(0.1, 11, [](double z) { return z * z * z - z; });
    for (double z : {0.0, 0.05, 0.333, 0.95, 1.0}) CHECK(std::abs(g.interpolate(z)(0, 0) - (z * z * z - z)) < 1e-13);
    CHECK_THROWS(g.interpolate(1.5));
}

TEST_CASE("grids that are too short are refused") {
    const GridFunction g = GridFunction::constant(0.0, 0.1, 5, RingValue(1.0));
    CHECK_THROWS_AS(g.derivative(), GridTooShort);
    CHECK_THROWS_AS(g.second_derivative(), GridTooShort);
}

TEST_CASE("residual reports mask poles") {
    ResidualReport r;
    r.tolerance = 1.0;
    for (int k = 0; k < 10; ++k) r.points.push_back({0.1 * k, k == 5 ? 1e9 : 0.5});
    CHECK(!r.pass());
    std::vector<bool> poles(10, false);
    poles[5] = true;
    r.mask_near(poles, 1);
    CHECK(r.masked_count() == 3);
    CHECK(r.pass());
    CHECK(r.max_norm() == doctest::Approx(0.5));
    CHECK(r.to_csv().rfind("z,norm,masked\n", 0) == 0);
}

TEST_CASE("pointwise maps keep the grid") {
    const GridFunction g = GridFunction::constant(1.0, 0.5, 6, RingValue::identity(2));
    const GridFunction h = g.zip(g, [](const RingValue& a, const RingValue& b) { return a + b; });
    CHECK(h.same_grid(g));
    CHECK(h[3](1, 1) == cplx(2.0));
    CHECK(h.stop() == doctest::Approx(3.5));
}
