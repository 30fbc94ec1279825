#include <doctest.h>

#include "loggas/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>

using namespace loggas;

namespace {

constexpr double pi = std::numbers::pi;

double interior_sup(const GridFunction& f, double limit)
{
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.grid().node(i)) <= limit) m = std::max(m, std::abs(f[i]));
    return m;
}

} // namespace

TEST_SUITE("hilbert")
{
    TEST_CASE("even input gives odd output")
    {
        const Grid g(10.0, 512);
        const GridFunction f = GridFunction::from_function(g, [](double x) {
            return std::abs(x) < 3.0 ? std::pow(9.0 - x * x, 3) : 0.0;
        });
        const GridFunction h = hilbert(f);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(h[i] + h[g.size() - 1 - i]) <= 1e-12 * h.sup_norm());
        CHECK(hilbert(GridFunction(g)).sup_norm() == 0.0);
    }

    TEST_CASE("cauchy density")
    {
        // Closed form of the transform of the density truncated to [-L, L].
        const double L = 40.0;
        const Grid g(L, 4096);
        const GridFunction f = GridFunction::from_function(g, [](double y) { return 1.0 / (pi * (1.0 + y * y)); });
        const GridFunction h = hilbert(f);
        double truncated_err = 0.0, full_err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = g.node(i);
            if (std::abs(x) > 5.0) continue;
            const double a = 1.0 / (1.0 + x * x);
            const double truncated = a / pi * (std::log((L - x) / (L + x)) - 2.0 * x * std::atan(L));
            truncated_err = std::max(truncated_err, std::abs(h[i] - truncated));
            full_err = std::max(full_err, std::abs(h[i] + x * a));
        }
        CHECK(truncated_err < 1e-5);
        CHECK(full_err < 2e-5);
    }

    TEST_CASE("gaussian against dawson values")
    {
        const Grid g(12.0, 2048);
        const GridFunction h = hilbert(GridFunction::from_function(g, [](double y) { return std::exp(-y * y); }));
        CHECK(interpolate(h, 0.5) == doctest::Approx(-1.5045878048051396981).epsilon(1e-5));
        CHECK(interpolate(h, 1.0) == doctest::Approx(-1.9074421882417552323).epsilon(1e-5));
        CHECK(interpolate(h, 2.0) == doctest::Approx(-1.0682238655626819573).epsilon(1e-5));
    }

    TEST_CASE("tail law of a probability density")
    {
        const Grid g(20.0, 2048);
        const GridFunction rho = GridFunction::from_function(g, [](double y) { return std::exp(-y * y / 2) / std::sqrt(2 * pi); });
        const GridFunction h = hilbert(rho);
        for (double x : {-10.0, 10.0}) CHECK(std::abs(x * interpolate(h, x) + 1.0) < 0.02);
    }

    TEST_CASE("skew adjointness")
    {
        const Grid g(15.0, 1024);
        const GridFunction f = GridFunction::from_function(g, [](double x) { return std::exp(-(x - 1) * (x - 1)); });
        const GridFunction k = GridFunction::from_function(g, [](double x) { return x * std::exp(-x * x / 2) + std::exp(-x * x); });
        const double left = integrate(k * hilbert(f));
        const double right = integrate(f * hilbert(k));
        CHECK(std::abs(left + right) < 1e-10);
    }

    TEST_CASE("square is minus pi squared")
    {
        const Grid g(40.0, 4096);
        const GridFunction f = GridFunction::from_function(g, [](double x) { return x * std::exp(-x * x); });
        const GridFunction twice = hilbert(hilbert(f));
        CHECK((twice + f * (pi * pi)).sup_norm() / (pi * pi * f.sup_norm()) < 2e-3);
    }

    TEST_CASE("isometry of the scaled transform")
    {
        const Grid g(40.0, 4096);
        const GridFunction f = GridFunction::from_function(g, [](double x) { return x * std::exp(-x * x / 2) * std::cos(x); });
        const GridFunction h = hilbert(f) * (1.0 / pi);
        CHECK(std::sqrt(integrate(h * h)) == doctest::Approx(std::sqrt(integrate(f * f))).epsilon(2e-3));
    }

    TEST_CASE("commutes with the derivative")
    {
        const Grid g(20.0, 2048);
        const GridFunction f = GridFunction::from_function(g, [](double x) { return std::exp(-x * x) * (1 + 0.3 * x); });
        CHECK(interior_sup(hilbert(derivative(f)) - derivative(hilbert(f)), 16.0) < 1e-5);
    }

    TEST_CASE("log potential")
    {
        const Grid g(20.0, 2048);
        CHECK(log_potential(GridFunction(g)).sup_norm() == 0.0);

        const GridFunction rho = GridFunction::from_function(g, [](double y) { return std::exp(-y * y) / std::sqrt(pi); });
        const GridFunction u = log_potential(rho);
        CHECK(std::abs(u[1023] - u[1024]) < 1e-13);
        CHECK(std::abs(interpolate(u, 0.0) - 0.98175501301071173972) < 1e-6);
        CHECK(std::abs(interpolate(u, 1.0) - 0.24231338291163243922) < 1e-6);
        CHECK(interior_sup(derivative(u) - hilbert(rho), 16.0) < 1e-5);

        const LogKernel kernel(g);
        const GridFunction again = log_potential(rho, kernel);
        CHECK((again - u).sup_norm() < 1e-13);
        const Eigen::VectorXd dense = -kernel.matrix() * Eigen::Map<const Eigen::VectorXd>(rho.values().data(), 2048);
        double gap = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) gap = std::max(gap, std::abs(dense[static_cast<Eigen::Index>(i)] - u[i]));
        CHECK(gap < 1e-12);
    }

    TEST_CASE("far field of a narrow bump")
    {
        const Grid g(20.0, 4096);
        const double s = 0.1;
        const GridFunction bump = GridFunction::from_function(g, [s](double y) { return std::exp(-y * y / (s * s)) / (s * std::sqrt(pi)); });
        const GridFunction u = log_potential(bump);
        for (double x : {-10.0, 10.0}) CHECK(std::abs(interpolate(u, x) + std::log(10.0)) < 1e-4);
    }
}
