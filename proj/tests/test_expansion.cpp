#include <doctest.h>

#include "loggas/expansion.hpp"
#include "loggas/special.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>

using namespace loggas;

// Reference values computed with mpmath at 30 digits.
TEST_SUITE("expansion")
{
    TEST_CASE("closed-form partition function")
    {
        CHECK(mehta_log_partition(10, 1.0) == doctest::Approx(8.8858256401252149483).epsilon(1e-14));
        CHECK(mehta_log_partition(50, 2.0) == doctest::Approx(52.992668293872968373).epsilon(1e-14));
        CHECK(mehta_log_partition(3, 1.0) == doctest::Approx(2.8808840501340626565).epsilon(1e-14));
        CHECK(mehta_log_partition(2, 2.0) == doctest::Approx(std::log(4 * std::numbers::pi)).epsilon(1e-14));
        CHECK(mehta_log_partition(1, 3.0) == doctest::Approx(0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-14));
        CHECK(mehta_log_partition(7, 0.0) == doctest::Approx(3.5 * std::log(2 * std::numbers::pi)).epsilon(1e-14));
        CHECK_THROWS_AS(mehta_log_partition(0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(mehta_log_partition(4, -1.0), std::invalid_argument);
        for (int N : {5, 40, 300}) CHECK(mehta_log_partition(N, 1.5) < mehta_log_partition(N, 2.5));
    }

    TEST_CASE("gaussian coefficients")
    {
        const double g1[] = {0.22821671363314381913, 0.57721566490153286061, 1.5010049200830383759};
        const double g2[] = {-0.18004569006935708034, -0.7391337000907798849, -3.0398681336964528729};
        const double g4[] = {-0.017184793089598490592, -0.27335858620556232566, -4.3542929348445527661};
        const double Ps[] = {0.5, 1.0, 2.0};
        for (int k = 0; k < 3; ++k) {
            const ExpansionResult r = gaussian_expansion_coefficients(Ps[k], 4);
            CHECK(r.method == ExpansionMethod::euler_maclaurin);
            CHECK(std::abs(r.coefficients[1] - g1[k]) < 1e-12);
            CHECK(std::abs(r.coefficients[2] - g2[k]) < 1e-12);
            CHECK(std::abs(r.coefficients[4] - g4[k]) < 1e-11);
            CHECK(std::abs(r.coefficients[1] - g1_series(Ps[k])) < 1e-9);
        }
        CHECK(std::abs(gaussian_expansion_coefficients(1.0, 0).coefficients[0] - 0.8378770664093458) < 1e-13);
        const ExpansionResult a = gaussian_expansion_coefficients(1.3, 3, 10000);
        const ExpansionResult b = gaussian_expansion_coefficients(1.3, 3, 40000);
        for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(a.coefficients[k] - b.coefficients[k]) < 1e-12);
        const ExpansionResult free = gaussian_expansion_coefficients(0.0, 2);
        CHECK(free.coefficients[0] == doctest::Approx(0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-15));
        CHECK(std::abs(free.coefficients[1]) < 1e-15);
        CHECK_THROWS_AS(gaussian_expansion_coefficients(1.0, 9), std::invalid_argument);
        CHECK_THROWS_AS(gaussian_expansion_coefficients(1.0, 2, 500), std::invalid_argument);
        CHECK(to_string(ExpansionMethod::mehta_exact) == "mehta-exact");
    }

    TEST_CASE("remainder decays at the expected rate")
    {
        for (double P : {0.5, 1.0, 2.0, 5.0}) {
            CAPTURE(P);
            CHECK(remainder_slope(gaussian_expansion_coefficients(P, 2)) <= -2.7);
            CHECK(remainder_slope(gaussian_expansion_coefficients(P, 3)) <= -3.7);
        }
    }

    TEST_CASE("extrapolation of the exact sums")
    {
        CHECK(richardson_limit({1.0, 0.5, 0.25}, {3.0, 2.0, 1.5}) == doctest::Approx(1.0).epsilon(1e-14));
        for (double P : {0.5, 1.0, 2.0}) {
            const ExpansionResult g = gaussian_expansion_coefficients(P, 0);
            std::vector<double> h, v;
            for (int N : {200, 400, 800, 1600}) {
                h.push_back(1.0 / N);
                v.push_back(N * (mehta_log_partition(N, P) / N - g.coefficients[0]));
            }
            CHECK(std::abs(richardson_limit(h, v) - g1_series(P)) < 1e-6);
        }
    }

    TEST_CASE("free energy")
    {
        CHECK(free_energy(10.0) == doctest::Approx(-9.930367382944).epsilon(1e-11));
        CHECK(free_energy(100.0) == doctest::Approx(-108.659730363887).epsilon(1e-11));
        CHECK_THROWS_AS(free_energy(0.0), std::invalid_argument);
        // Scaled-potential Mehta value at large N as an independent estimate.
        const double P = 3.0;
        const int N = 4000;
        const double scaled = mehta_log_partition(N, P) / N - 0.5 * (1.0 + P * (N - 1.0) / N) * std::log(2.0 * P);
        CHECK(std::abs(scaled - free_energy(P)) < 5e-3);
        double previous = 0.0;
        for (double p : {10.0, 30.0, 100.0}) {
            const double scaled_residual = p * std::abs(free_energy(p) - free_energy_large_p(p));
            CHECK(scaled_residual < 1.0);
            if (previous > 0.0) CHECK(std::abs(free_energy(p) - free_energy_large_p(p)) <= previous);
            previous = std::abs(free_energy(p) - free_energy_large_p(p));
        }
    }

    TEST_CASE("interpolated log partition")
    {
        const PotentialSpec gauss = gaussian_potential();
        CHECK(interpolated_log_partition(gauss, 1.0, 25) == mehta_log_partition(25, 1.0));
        PotentialSpec silent = gauss;
        silent.perturbation = {PerturbationKind::cosine, 0.0, 1.0, 0.0, 1.0};
        CHECK(interpolated_log_partition(silent, 1.0, 25) == mehta_log_partition(25, 1.0));

        const CoefficientResult plain = perturbed_coefficients(gauss, 1.0);
        CHECK(plain.c1 == plain.g1);
        CHECK(std::abs(plain.c0_energy - plain.g0) < 5e-6);
    }

    TEST_CASE("perturbed coefficients")
    {
        PotentialSpec v = gaussian_potential();
        v.perturbation = {PerturbationKind::cosine, 0.2, 1.0, 0.0, 1.0};
        const CoefficientResult r = perturbed_coefficients(v, 1.0);
        CHECK(r.nodes.size() == 12);
        CHECK(std::abs(r.c0_energy - r.c0_interpolated) < 1e-5);
        CHECK(r.smoothness < 1.0);
        CHECK(std::isfinite(r.c1));
        CHECK(std::abs(r.c1 - r.g1) < 0.2 * 0.5);

        // A constant shift of the potential moves c0 by exactly that constant.
        PotentialSpec shifted = gaussian_potential();
        shifted.even_coefficients = {0.3, 0.5};
        const Grid grid = choose_domain(gaussian_potential(), 1.0);
        const double base = c0(solve_equilibrium(gaussian_potential(), 1.0, grid));
        CHECK(c0(solve_equilibrium(shifted, 1.0, grid)) == doctest::Approx(base - 0.3).epsilon(1e-9));
    }
}
