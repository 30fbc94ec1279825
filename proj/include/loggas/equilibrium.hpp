#pragma once

#include "loggas/grid.hpp"
#include "loggas/hilbert.hpp"
#include "loggas/potential.hpp"

#include <memory>
#include <mutex>
#include <optional>

namespace loggas {

// Lazily built solver state shared by copies of one measure.
struct MeasureCache {
    std::mutex mutex;
    std::shared_ptr<const void> master_operator;
};

// Equilibrium density rho = exp(-V - 2P U^rho + lambda) on a grid.
struct EquilibriumMeasure {
    Grid grid;
    GridFunction rho;
    GridFunction log_rho;
    double lambda = 0.0;
    double P = 0.0;
    PotentialSpec potential;
    int iterations = 0;
    double residual = 0.0;
    std::shared_ptr<const LogKernel> kernel;
    std::shared_ptr<MeasureCache> cache = std::make_shared<MeasureCache>();

    // int f dmu with trapezoid weights.
    double mean(const GridFunction& f) const { return integrate(f * rho); }
};

// Smallest L on a ladder of step 0.5 with (1+L)^{2P} exp(-V(+-L)) < tail_eps.
Grid choose_domain(const PotentialSpec& potential, double P, double tail_eps = 1e-14,
                   std::size_t points = Grid::default_points);

// Damped log-space fixed point, eta = 0.5, stopped once
// sup|log rho - (-V - 2P U^rho + lambda)| < tol.
EquilibriumMeasure solve_equilibrium(const PotentialSpec& potential, double P, const Grid& grid,
                                     double tol = 1e-12, int max_iter = 2000,
                                     const std::optional<GridFunction>& initial_log_rho = std::nullopt,
                                     std::shared_ptr<const LogKernel> kernel = nullptr);

// Builds a measure from a given density (used by the flow routes); lambda is
// taken from the normalization of exp(-V - 2P U^rho).
EquilibriumMeasure measure_from_density(const PotentialSpec& potential, double P, const GridFunction& rho,
                                        std::shared_ptr<const LogKernel> kernel = nullptr);

// exp(-x^2/2) / (sqrt(2 pi) |f_alpha(x)|^2), renormalized on the grid.
GridFunction gaussian_density_explicit(const Grid& grid, double P);

// int V dmu - P iint log|x-y| dmu dmu + int rho log rho.
double energy_functional(const EquilibriumMeasure& mu);
double energy_functional(const EquilibriumMeasure& mu, const GridFunction& trial_rho);

// r = V + 2P U^rho + log rho - lambda.
GridFunction characterization_residual(const EquilibriumMeasure& mu);

// sup over |x| <= 0.8 L of |rho' + (V' + 2P H[rho]) rho|.
double density_derivative_identity(const EquilibriumMeasure& mu);

// Largest |value| over nodes with |x| <= fraction * L.
double bulk_sup(const GridFunction& f, double fraction = 0.8);

} // namespace loggas
