#include "loggas/equilibrium.hpp"
#include "loggas/error.hpp"
#include "loggas/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <deque>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace loggas {

namespace {

// Returns log int exp(v) with trapezoid weights.
double log_mass(const Grid& grid, const std::vector<double>& v)
{
    const double top = *std::max_element(v.begin(), v.end());
    std::vector<double> e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e[i] = std::exp(v[i] - top);
    const double mass = integrate(GridFunction(grid, std::move(e)));
    if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericalError("candidate density has no positive mass");
    return top + std::log(mass);
}

std::vector<double> potential_values(const PotentialSpec& potential, const Grid& grid)
{
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = potential.value(grid.node(i));
    return v;
}


} // namespace

Grid choose_domain(const PotentialSpec& potential, double P, double tail_eps, std::size_t points)
{
    potential.validate();
    if (!(P > 0.0)) throw std::invalid_argument("P must be positive");
    if (!(tail_eps > 0.0 && tail_eps <= 1e-6)) throw std::invalid_argument("tail_eps must lie in (0, 1e-6]");
    const double log_eps = std::log(tail_eps);
    for (double L = 1.0; L <= 200.0; L += 0.5) {
        const double v = std::min(potential.value(L), potential.value(-L));
        if (2.0 * P * std::log1p(L) - v < log_eps) return Grid(L, points);
    }
    throw std::invalid_argument("potential too flat: no domain up to L = 200 meets the tail bound");
}

EquilibriumMeasure solve_equilibrium(const PotentialSpec& potential, double P, const Grid& grid, double tol,
                                     int max_iter, const std::optional<GridFunction>& initial_log_rho,
                                     std::shared_ptr<const LogKernel> kernel)
{
    potential.validate();
    if (!(P >= 0.0) || !std::isfinite(P)) throw std::invalid_argument("P must be non-negative");
    if (!(tol >= 1e-13 && tol <= 1e-6)) throw std::invalid_argument("tol must lie in [1e-13, 1e-6]");
    if (max_iter < 50) throw std::invalid_argument("max_iter must be at least 50");
    if (!kernel) kernel = std::make_shared<LogKernel>(grid);
    if (!(kernel->grid() == grid)) throw std::invalid_argument("log kernel built for another grid");

    const std::size_t n = grid.size();
    const std::vector<double> V = potential_values(potential, grid);
    std::vector<double> log_rho(n);
    if (initial_log_rho) {
        if (!(initial_log_rho->grid() == grid)) throw std::invalid_argument("initial density on another grid");
        log_rho.assign(initial_log_rho->values().begin(), initial_log_rho->values().end());
    } else {
        for (std::size_t i = 0; i < n; ++i) log_rho[i] = -V[i];
    }
    double shift = log_mass(grid, log_rho);
    for (double& v : log_rho) v -= shift;

    // Damped iteration (eta = 0.5) with Anderson extrapolation over the last
    // few residuals; plain damping alone stalls for P above about 4.
    const double eta = 0.5;
    const std::size_t depth = 6;
    std::deque<std::vector<double>> xs, fs;
    std::vector<double> rho(n), candidate(n), f(n);
    double residual = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) rho[i] = std::exp(log_rho[i]);
        const std::vector<double> logint = kernel->apply(rho); // = -U
        for (std::size_t i = 0; i < n; ++i) candidate[i] = -V[i] + 2.0 * P * logint[i];
        const double lm = log_mass(grid, candidate);
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            candidate[i] -= lm;
            f[i] = candidate[i] - log_rho[i];
            residual = std::max(residual, std::abs(f[i]));
        }
        if (!std::isfinite(residual)) throw NumericalError("equilibrium iteration produced non-finite values");
        if (residual < tol) {
            EquilibriumMeasure mu{grid, GridFunction(grid, rho), GridFunction(grid, log_rho), -lm, P, potential,
                                  it, residual, kernel};
            return mu;
        }
        xs.push_back(log_rho);
        fs.push_back(f);
        if (xs.size() > depth + 1) {
            xs.pop_front();
            fs.pop_front();
        }
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = log_rho[i] + eta * f[i];
        const std::size_t m = xs.size() - 1;
        if (m > 0) {
            Eigen::MatrixXd dF(n, m);
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t i = 0; i < n; ++i) dF(i, k) = fs[k + 1][i] - fs[k][i];
            const Eigen::Map<const Eigen::VectorXd> fk(f.data(), static_cast<Eigen::Index>(n));
            const Eigen::VectorXd g = dF.colPivHouseholderQr().solve(fk);
            if (g.allFinite()) {
                for (std::size_t k = 0; k < m; ++k)
                    for (std::size_t i = 0; i < n; ++i)
                        next[i] -= g(k) * ((xs[k + 1][i] - xs[k][i]) + eta * (fs[k + 1][i] - fs[k][i]));
            }
        }
        log_rho = std::move(next);
        shift = log_mass(grid, log_rho);
        for (double& v : log_rho) v -= shift;
    }
    std::ostringstream msg;
    msg << "equilibrium iteration did not converge in " << max_iter << " iterations (residual " << residual << ")";
    throw NumericalError(msg.str(), residual);
}

EquilibriumMeasure measure_from_density(const PotentialSpec& potential, double P, const GridFunction& rho,
                                        std::shared_ptr<const LogKernel> kernel)
{
    const Grid& grid = rho.grid();
    if (!kernel) kernel = std::make_shared<LogKernel>(grid);
    const std::size_t n = grid.size();
    std::vector<double> log_rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rho[i] > 0.0)) throw NumericalError("density must be positive on the grid");
        log_rho[i] = std::log(rho[i]);
    }
    const std::vector<double> logint = kernel->apply(rho.values());
    std::vector<double> candidate(n);
    for (std::size_t i = 0; i < n; ++i) candidate[i] = -potential.value(grid.node(i)) + 2.0 * P * logint[i];
    const double lm = log_mass(grid, candidate);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(candidate[i] - lm - log_rho[i]));
    return EquilibriumMeasure{grid, rho, GridFunction(grid, std::move(log_rho)), -lm, P, potential, 0, residual,
                              kernel};
}

GridFunction gaussian_density_explicit(const Grid& grid, double P)
{
    if (!(P > 0.0)) throw std::domain_error("gaussian_density_explicit needs P > 0");
    const std::size_t n = grid.size();
    std::vector<double> v(n);
    const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t i = n / 2; i < n; ++i) {
        const double x = grid.node(i);
        v[i] = c * std::exp(-0.5 * x * x) / f_hat_alpha(x, P);
        v[n - 1 - i] = v[i];
    }
    GridFunction rho(grid, std::move(v));
    return rho * (1.0 / integrate(rho));
}

double energy_functional(const EquilibriumMeasure& mu, const GridFunction& trial_rho)
{
    const Grid& grid = mu.grid;
    const GridFunction V = GridFunction::from_function(grid, [&](double x) { return mu.potential.value(x); });
    const GridFunction U = log_potential(trial_rho, *mu.kernel);
    const GridFunction entropy = trial_rho.map([](double r) {
        const double c = std::max(r, 1e-300);
        return r * std::log(c);
    });
    return integrate(V * trial_rho) + mu.P * integrate(U * trial_rho) + integrate(entropy);
}

double energy_functional(const EquilibriumMeasure& mu)
{
    const Grid& grid = mu.grid;
    const GridFunction V = GridFunction::from_function(grid, [&](double x) { return mu.potential.value(x); });
    const GridFunction U = log_potential(mu.rho, *mu.kernel);
    return integrate(V * mu.rho) + mu.P * integrate(U * mu.rho) + integrate(mu.rho * mu.log_rho);
}

GridFunction characterization_residual(const EquilibriumMeasure& mu)
{
    const GridFunction U = log_potential(mu.rho, *mu.kernel);
    std::vector<double> r(mu.grid.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = mu.potential.value(mu.grid.node(i)) + 2.0 * mu.P * U[i] + mu.log_rho[i] - mu.lambda;
    return GridFunction(mu.grid, std::move(r));
}

double density_derivative_identity(const EquilibriumMeasure& mu)
{
    const GridFunction drho = derivative(mu.rho);
    const GridFunction H = hilbert(mu.rho);
    std::vector<double> r(mu.grid.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = drho[i] + (mu.potential.derivative(mu.grid.node(i)) + 2.0 * mu.P * H[i]) * mu.rho[i];
    return bulk_sup(GridFunction(mu.grid, std::move(r)));
}

double bulk_sup(const GridFunction& f, double fraction)
{
    const double cut = fraction * f.grid().half_width();
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.grid().node(i)) <= cut) m = std::max(m, std::abs(f[i]));
    return m;
}

} // namespace loggas
