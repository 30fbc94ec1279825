#include <doctest.h>

#include "loggas/flow.hpp"
#include "loggas/operators.hpp"

#include <cmath>
#include <stdexcept>

using namespace loggas;

namespace {

struct Setup {
    PotentialSpec potential;
    EquilibriumMeasure mu;
    GridFunction phi;
};

const Setup& cosine_setup()
{
    static const Setup s = [] {
        PotentialSpec v = gaussian_potential();
        v.perturbation = {PerturbationKind::cosine, 0.2, 1.0, 0.0, 1.0};
        const Grid grid = choose_domain(v.at(0.0), 1.0, 1e-14, 512);
        EquilibriumMeasure mu = solve_equilibrium(v.at(0.0), 1.0, grid);
        return Setup{v, mu, v.perturbation.sample(grid)};
    }();
    return s;
}

double sup_on(const GridFunction& f, double limit)
{
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.grid().node(i)) <= limit) m = std::max(m, std::abs(f[i]));
    return m;
}

GridFunction constant(const Grid& g, double c) { return GridFunction::from_function(g, [c](double) { return c; }); }

} // namespace

TEST_SUITE("flow")
{
    TEST_CASE("kernel operator and its inverse")
    {
        const Setup& s = cosine_setup();
        const FredholmKernel K(s.mu);
        CHECK(K.k().allFinite());
        const GridFunction v = center(GridFunction::from_function(s.mu.grid, [](double x) { return std::sin(x) + std::cos(2 * x); }), s.mu).f;
        const GridFunction w = GridFunction::from_function(s.mu.grid, [](double x) { return std::exp(-x * x / 3); });
        CHECK(t_kernel_apply(GridFunction(s.mu.grid), K, 1.0).sup_norm() == 0.0);
        CHECK((t_inverse(t_kernel_apply(v, K, 1.0), K, 1.0) - v).sup_norm() < 1e-9);
        CHECK((t_kernel_apply(v * 2.0 + w * 3.0, K, 1.0) - (t_kernel_apply(v, K, 1.0) * 2.0 + t_kernel_apply(w, K, 1.0) * 3.0)).sup_norm() < 1e-12);
        CHECK((t_inverse(v, K, 0.0) - v).sup_norm() == 0.0);
        CHECK(t_inverse(w, K, 1.0).sup_norm() <= 10.0 * w.sup_norm());
    }

    TEST_CASE("kernel operator as a composition")
    {
        const PotentialSpec gauss = gaussian_potential();
        const EquilibriumMeasure mu = solve_equilibrium(gauss, 1.0, choose_domain(gauss, 1.0));
        const FredholmKernel K(mu);
        const CenteredFunction v = center(GridFunction::from_function(mu.grid, [](double x) { return std::cos(x); }), mu);
        const GridFunction lhs = t_kernel_apply(v.f, K, 1.0);
        const GridFunction rhs = -xi_apply(a_inverse(v, mu), mu);
        CHECK(sup_on(lhs - rhs, 0.8 * mu.grid.half_width()) < 1e-5);
    }

    TEST_CASE("fixed point at the starting time")
    {
        const Setup& s = cosine_setup();
        const FlowState st = fixed_point_u(s.phi, 0.0, 0.0, s.mu, 1.0);
        const FredholmKernel K(s.mu);
        const GridFunction start = t_inverse(center(-s.phi, s.mu).f, K, 1.0);
        CHECK((st.u - start).sup_norm() < 1e-12);
        CHECK(lambda_update(st.u, s.phi, 0.0, 0.0, s.mu, 1.0) == doctest::Approx(s.mu.lambda).epsilon(1e-14));

        const GridFunction zero(s.mu.grid);
        const FlowState still = fixed_point_u(zero, 0.0, 0.05, s.mu, 1.0);
        CHECK(still.u.sup_norm() < 1e-14);
        CHECK(lambda_update(still.u, zero, 0.0, 0.05, s.mu, 1.0) == doctest::Approx(s.mu.lambda).epsilon(1e-12));
    }

    TEST_CASE("fixed point against an independent solve")
    {
        const Setup& s = cosine_setup();
        const double dt = 0.05;
        const FlowState st = fixed_point_u(s.phi, 0.0, dt, s.mu, 1.0);
        CHECK(std::abs(s.mu.mean(st.u)) < 1e-10);
        for (std::size_t i = 0; i < st.u.size(); ++i) CHECK(1.0 + dt * st.u[i] > 0.0);
        CHECK(st.contraction < 1.0);

        const EquilibriumMeasure direct = solve_equilibrium(s.potential.at(dt), 1.0, s.mu.grid);
        GridFunction rebuilt = (constant(s.mu.grid, 1.0) + st.u * dt) * s.mu.rho;
        rebuilt = rebuilt * (1.0 / integrate(rebuilt));
        CHECK((rebuilt - direct.rho).sup_norm() < 1e-6);
        CHECK((st.mu.rho - direct.rho).sup_norm() < 1e-6);
        CHECK(lambda_update(st.u, s.phi, 0.0, dt, s.mu, 1.0) == doctest::Approx(direct.lambda).epsilon(1e-6));
    }

    TEST_CASE("printed remainder reading is the worse fit")
    {
        const Setup& s = cosine_setup();
        const EquilibriumMeasure direct = solve_equilibrium(s.potential.at(0.05), 1.0, s.mu.grid);
        FixedPointOptions printed;
        printed.reading = RemainderReading::printed;
        const double proof_gap = (fixed_point_u(s.phi, 0.0, 0.05, s.mu, 1.0).mu.rho - direct.rho).sup_norm();
        const double printed_gap = (fixed_point_u(s.phi, 0.0, 0.05, s.mu, 1.0, printed).mu.rho - direct.rho).sup_norm();
        CHECK(proof_gap < printed_gap);
    }

    TEST_CASE("density flow")
    {
        const Setup& s = cosine_setup();
        CHECK_THROWS_AS(flow_density(s.phi, s.mu, 1.0, 15), std::invalid_argument);
        const EquilibriumMeasure same = flow_density(s.phi, s.mu, 0.0, 16);
        CHECK((same.rho - s.mu.rho).sup_norm() == 0.0);

        const EquilibriumMeasure frozen = flow_density(constant(s.mu.grid, 0.7), s.mu, 1.0, 16);
        CHECK((frozen.rho - s.mu.rho).sup_norm() < 1e-14);

        const EquilibriumMeasure flowed = flow_density(s.phi, s.mu, 1.0, 64);
        const EquilibriumMeasure direct = solve_equilibrium(s.potential.at(1.0), 1.0, s.mu.grid);
        CHECK(std::abs(integrate(flowed.rho) - 1.0) < 1e-10);
        CHECK((flowed.rho - direct.rho).sup_norm() < 1e-5);

        FlowOptions printed;
        printed.rule = FlowRule::printed;
        CHECK((flow_density(s.phi, s.mu, 1.0, 64, printed).rho - direct.rho).sup_norm() > 1e-3);

        const FlowState chained = fixed_point_u(s.phi, 0.0, 1.0, s.mu, 1.0);
        CHECK((chained.mu.rho - direct.rho).sup_norm() < 1e-5);
    }
}
