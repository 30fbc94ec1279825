#include "loggas/verify.hpp"
#include "loggas/expansion.hpp"
#include "loggas/flow.hpp"
#include "loggas/operators.hpp"
#include "loggas/sampler.hpp"
#include "loggas/special.hpp"

#include <algorithm>
#include <cmath>

namespace loggas {

double FlowTriangle::max() const { return std::max({ode_vs_fixed_point, ode_vs_refit, fixed_point_vs_refit}); }

FlowTriangle flow_triangle(const PotentialSpec& potential, double P, double t_end, std::size_t points, int ode_steps)
{
    const Grid a = choose_domain(potential.at(0.0), P, 1e-14, points);
    const Grid b = choose_domain(potential.at(t_end), P, 1e-14, points);
    const Grid grid = a.half_width() >= b.half_width() ? a : b;
    const EquilibriumMeasure mu0 = solve_equilibrium(potential.at(0.0), P, grid);
    const GridFunction phi = potential.perturbation.sample(grid);
    const EquilibriumMeasure refit = solve_equilibrium(potential.at(t_end), P, grid, 1e-12, 2000, mu0.log_rho, mu0.kernel);
    const FlowState fp = fixed_point_u(phi, 0.0, t_end, mu0, P);
    const EquilibriumMeasure ode = flow_density(phi, mu0, t_end, ode_steps);
    return {(ode.rho - fp.mu.rho).sup_norm(), (ode.rho - refit.rho).sup_norm(), (fp.mu.rho - refit.rho).sup_norm()};
}

double interpolation_identity_gap(const PotentialSpec& potential, double P, int t_nodes)
{
    const double lhs = brute_force_log_partition(2, P, potential.at(1.0)) - brute_force_log_partition(2, P, potential.at(0.0));
    const Perturbation phi = potential.perturbation;
    const QuadratureRule rule = gauss_legendre(static_cast<std::size_t>(t_nodes), 0.0, 1.0);
    double rhs = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        rhs -= 2.0 * rule.weights[k]
            * brute_force_expectation(2, P, potential.at(rule.nodes[k]), [&phi](std::span<const double> x) {
                  return 0.5 * (phi.value(x[0]) + phi.value(x[1]));
              });
    return std::abs(lhs - rhs);
}

namespace {

Check at_most(std::string name, double value, double tolerance)
{
    return {std::move(name), value, tolerance, value <= tolerance};
}

} // namespace

std::vector<Check> verification_suite(std::uint64_t seed)
{
    std::vector<Check> out;
    const PotentialSpec gauss = gaussian_potential();

    double gap = 0.0;
    for (double P : {0.5, 1.0, 2.0, 5.0}) {
        const double exact = mehta_log_partition(2, P);
        gap = std::max(gap, std::abs(brute_force_log_partition(2, P, gauss) - exact) / std::abs(exact));
    }
    out.push_back(at_most("mehta_vs_quadrature_n2", gap, 1e-6));
    out.push_back(at_most("mehta_vs_quadrature_n3",
                          std::abs(brute_force_log_partition(3, 1.0, gauss) / mehta_log_partition(3, 1.0) - 1.0), 1e-4));

    double series_gap = 0.0, richardson_gap = 0.0;
    for (double P : {0.5, 1.0, 2.0}) {
        const ExpansionResult g = gaussian_expansion_coefficients(P, 1);
        series_gap = std::max(series_gap, std::abs(g.coefficients[1] - g1_series(P)));
        std::vector<double> h, v;
        for (int N : {200, 400, 800, 1600}) {
            h.push_back(1.0 / N);
            v.push_back(mehta_log_partition(N, P) - N * g.coefficients[0]);
        }
        richardson_gap = std::max(richardson_gap, std::abs(richardson_limit(h, v) - g.coefficients[1]));
    }
    out.push_back(at_most("g1_series_vs_expansion", series_gap, 1e-9));
    out.push_back(at_most("g1_vs_richardson", richardson_gap, 1e-6));
    out.push_back(at_most("remainder_slope", remainder_slope(gaussian_expansion_coefficients(1.0, 2)), -2.7));

    double scaled = 0.0;
    for (double P : {10.0, 30.0, 100.0}) scaled = std::max(scaled, std::abs(free_energy(P) - free_energy_large_p(P)) * P);
    out.push_back(at_most("free_energy_large_p_scaled_residual", scaled, 1.0));

    const Grid grid = choose_domain(gauss, 1.0);
    const EquilibriumMeasure mu = solve_equilibrium(gauss, 1.0, grid);
    out.push_back(at_most("equilibrium_characterization", bulk_sup(characterization_residual(mu)), 1e-6));
    out.push_back(at_most("equilibrium_mass", std::abs(integrate(mu.rho) - 1.0), 1e-10));
    const ExpansionResult g = gaussian_expansion_coefficients(1.0, 1);
    out.push_back(at_most("c0_vs_g0", std::abs(c0(mu) - g.coefficients[0]), 5e-6));

    PotentialSpec perturbed = gauss;
    perturbed.perturbation = {PerturbationKind::cosine, 0.2, 1.0, 0.0, 1.0};
    out.push_back(at_most("interpolation_identity_n2", interpolation_identity_gap(perturbed, 1.0), 1e-6));
    out.push_back(at_most("flow_triangle", flow_triangle(perturbed, 1.0, 1.0, 512, 16).max(), 1e-5));

    const GridFunction cosine = GridFunction::from_function(grid, [](double x) { return std::cos(x); });
    const double d1 = d1_linear_statistic(cosine, mu);
    ChainConfig cfg;
    cfg.N = 100;
    cfg.P = 1.0;
    cfg.n_sweeps = 25000;
    cfg.burn_in = 1000;
    cfg.seed = seed;
    const SampleEstimate e = linear_statistic_estimate(cfg, [](double x) { return std::cos(x); }, 4);
    const double z = std::abs(cfg.N * (e.value - mu.mean(cosine)) - d1) / (cfg.N * e.std_error);
    out.push_back(at_most("d1_vs_monte_carlo_z", z, 3.0));
    return out;
}

} // namespace loggas
