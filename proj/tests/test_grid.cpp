#include <doctest.h>

#include "loggas/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <sstream>

using namespace loggas;

TEST_SUITE("grid")
{
    TEST_CASE("nodes are symmetric and evenly spaced")
    {
        const Grid g(7.3, 256);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.node(i) == -g.node(g.size() - 1 - i));
        CHECK(g.node(0) == doctest::Approx(-7.3).epsilon(1e-15));
        CHECK(g.step() == doctest::Approx(2 * 7.3 / 255).epsilon(1e-15));
        CHECK_THROWS_AS(Grid(5.0, 63), std::invalid_argument);
        CHECK_THROWS_AS(Grid(5.0, 65), std::invalid_argument);
        CHECK_THROWS_AS(Grid(0.0, 128), std::invalid_argument);
    }

    TEST_CASE("grid functions reject non-finite values")
    {
        const Grid g(1.0, 64);
        std::vector<double> v(64, 0.0);
        v[3] = std::nan("");
        CHECK_THROWS_AS(GridFunction(g, v), std::domain_error);
        CHECK_THROWS_AS(GridFunction(g, std::vector<double>(10, 0.0)), std::invalid_argument);
    }

    TEST_CASE("trapezoid integration")
    {
        const Grid g(5.0, 1024);
        CHECK(integrate(GridFunction::from_function(g, [](double) { return 1.0; })) == doctest::Approx(10.0).epsilon(1e-15));
        const GridFunction odd = GridFunction::from_function(g, [](double x) { return x * std::cos(x); });
        CHECK(std::abs(integrate(odd)) <= 1e-13 * odd.sup_norm() * 5.0);

        const Grid wide(8.0, 1024);
        const double gauss = integrate(GridFunction::from_function(wide, [](double x) { return std::exp(-x * x / 2); }));
        CHECK(std::abs(gauss - std::sqrt(2 * std::numbers::pi)) < 1e-10);

        const GridFunction f = GridFunction::from_function(wide, [](double x) { return std::exp(-x * x); });
        const GridFunction h = GridFunction::from_function(wide, [](double x) { return std::sin(x) + 0.3; });
        CHECK(integrate(f * 2.5 + h * -1.5) == doctest::Approx(2.5 * integrate(f) - 1.5 * integrate(h)).epsilon(1e-14));
    }

    TEST_CASE("fourth-order derivative")
    {
        const Grid g(3.0, 128);
        const GridFunction sq = derivative(GridFunction::from_function(g, [](double x) { return x * x; }));
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(sq[i] - 2 * g.node(i)) < 1e-10);
        CHECK(derivative(GridFunction::from_function(g, [](double) { return 4.0; })).sup_norm() < 1e-12);

        const Grid s(6.0, 512);
        const GridFunction d = derivative(GridFunction::from_function(s, [](double x) { return std::sin(x); }));
        double err = 0.0;
        for (std::size_t i = 2; i + 2 < s.size(); ++i) err = std::max(err, std::abs(d[i] - std::cos(s.node(i))));
        CHECK(err < 1e-7);
    }

    TEST_CASE("derivative then integrate recovers the end values")
    {
        const Grid g(4.0, 256);
        const GridFunction f = GridFunction::from_function(g, [](double x) { return std::atan(x) + 0.1 * x * x; });
        CHECK(integrate(derivative(f)) == doctest::Approx(f[g.size() - 1] - f[0]).epsilon(1e-4));
    }

    TEST_CASE("cubic interpolation")
    {
        const Grid g(2.0, 64);
        const GridFunction cube = GridFunction::from_function(g, [](double x) { return x * x * x - x; });
        CHECK(interpolate(cube, g.node(17)) == cube[17]);
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const double m = 0.5 * (g.node(i) + g.node(i + 1));
            CHECK(interpolate(cube, m) == doctest::Approx(m * m * m - m).epsilon(1e-12));
        }
        const Grid fine(8.0, 1024);
        const GridFunction gauss = GridFunction::from_function(fine, [](double x) { return std::exp(-x * x / 2); });
        CHECK(std::abs(interpolate(gauss, 0.3141) - std::exp(-0.3141 * 0.3141 / 2)) < 1e-8);
        CHECK_THROWS_AS(interpolate(gauss, 8.01), std::out_of_range);
    }

    TEST_CASE("running integrals")
    {
        const Grid g(6.0, 512);
        const GridFunction f = GridFunction::from_function(g, [](double x) { return std::exp(-x * x / 2); });
        const auto left = running_integral_from_left(f);
        const auto right = running_integral_from_right(f);
        const double total = std::sqrt(2 * std::numbers::pi);
        for (std::size_t i = 0; i < g.size(); i += 37) {
            const double expected = 0.5 * total * std::erfc(-g.node(i) / std::sqrt(2.0));
            CHECK(std::abs(left[i] - expected) < 1e-8);
            CHECK(std::abs(left[i] + right[i] - total) < 1e-8);
        }
    }

    TEST_CASE("csv dump")
    {
        const Grid g(1.0, 64);
        std::ostringstream s;
        write_csv(s, GridFunction::from_function(g, [](double x) { return x; }));
        std::istringstream in(s.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "x,value");
        std::getline(in, line);
        CHECK(line == "-1,-1");
    }

    TEST_CASE("gauss-legendre")
    {
        const QuadratureRule r = gauss_legendre(6, -1.0, 2.0);
        double s = 0.0;
        for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * std::pow(r.nodes[k], 11);
        CHECK(s == doctest::Approx((std::pow(2.0, 12) - 1.0) / 12.0).epsilon(1e-13));
    }
}
