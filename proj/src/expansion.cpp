#include "loggas/expansion.hpp"
#include "loggas/operators.hpp"
#include "loggas/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loggas {

std::string to_string(ExpansionMethod method)
{
    switch (method) {
    case ExpansionMethod::mehta_exact: return "mehta-exact";
    case ExpansionMethod::euler_maclaurin: return "euler-maclaurin";
    case ExpansionMethod::interpolation: return "interpolation";
    }
    return "unknown";
}

namespace {

// Neumaier compensated accumulator.
struct Compensated {
    double sum = 0.0, carry = 0.0;
    void add(double v)
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

// q(u) = (1+u) log(1+u) - u - u^2/2, so that int xm_log1p = -q.
double q_of(double u)
{
    if (std::abs(u) < 0.1) {
        double s = 0.0, p = u * u;
        for (int n = 3; n < 30; ++n) {
            p *= -u;
            s -= p / (n * (n - 1.0));
        }
        return s;
    }
    return (1.0 + u) * std::log1p(u) - u - 0.5 * u * u;
}

// int_0^1 xm_log1p(a + b x) dx for a > 0, b >= 0.
double mean_xm_on_segment(double a, double b)
{
    if (b < 0.5 * (1.0 + a)) {
        static const QuadratureRule rule = gauss_legendre(20, 0.0, 1.0);
        double s = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * xm_log1p(a + b * rule.nodes[k]);
        return s;
    }
    return (q_of(a) - q_of(a + b)) / b;
}

} // namespace

double mehta_log_partition(int N, double P)
{
    if (N < 1) throw std::invalid_argument("mehta_log_partition needs N >= 1");
    if (!(P >= 0.0)) throw std::invalid_argument("mehta_log_partition needs P >= 0");
    Compensated s;
    s.add(0.5 * N * std::log(2.0 * std::numbers::pi));
    const double base = log_gamma(1.0 + P / N);
    for (int a = 1; a <= N; ++a) {
        s.add(log_gamma(1.0 + a * P / N));
        s.add(-base);
    }
    return s.value();
}

ExpansionResult gaussian_expansion_coefficients(double P, int K, std::size_t terms)
{
    if (K < 0 || K > 8) throw std::invalid_argument("expansion order must lie in [0, 8]");
    if (!(P >= 0.0) || !std::isfinite(P)) throw std::invalid_argument("P must be a finite non-negative number");
    if (terms < 1000) throw std::invalid_argument("at least 1000 explicit series terms are required");
    const SpecialConstants& sc = special_constants();
    const double gamma = sc.euler_gamma;

    ExpansionResult r;
    r.method = ExpansionMethod::euler_maclaurin;
    r.P = P;
    r.potential = gaussian_potential();
    r.coefficients.assign(static_cast<std::size_t>(K) + 1, 0.0);

    // Boundary terms of the Euler-Maclaurin sum over a, summed over j.
    const double c_minus1 = P > 0.0 ? (1.0 + 1.0 / P) * std::log1p(P) - 1.0 : 0.0;
    const double c_zero = 0.5 * std::log1p(P);
    const auto c_k = [&](int k) {
        if (k % 2 == 0) return 0.0;
        return -sc.bernoulli[static_cast<std::size_t>(k) + 1] * std::pow(-P, k) / (k * (k + 1.0))
            * (std::pow(1.0 + P, -k) - 1.0);
    };

    // Sums over j of the Weierstrass summands.
    const double d_plus1 = sum_with_tail([P](double j) { return mean_xm_on_segment(1.0 / j, P / j); }, terms);
    const double d_zero = sum_with_tail(
        [P](double j) { return P / (2.0 * j) - 0.5 * (std::log1p((1.0 + P) / j) - std::log1p(1.0 / j)); }, terms);
    const auto d_minus = [&](int q) {
        const double e = 1.0 - 2.0 * q;
        const double s = sum_with_tail(
            [P, e](double j) { return std::pow(j + 1.0 + P, e) - std::pow(j + 1.0, e); }, terms);
        return -sc.bernoulli[static_cast<std::size_t>(2 * q)] * std::pow(P, 2 * q - 1) / (2.0 * q * (2 * q - 1.0)) * s;
    };

    r.coefficients[0] = 0.5 * std::log(2.0 * std::numbers::pi) - gamma - 0.5 * gamma * P - c_minus1 + d_plus1;
    if (K >= 1) r.coefficients[1] = gamma * P - 0.5 * gamma * P - c_zero + d_zero;
    for (int m = 2; m <= K; ++m) {
        double g = -sc.zeta[static_cast<std::size_t>(m)] * std::pow(-P, m) / m - c_k(m - 1);
        if (m % 2 == 0) g += d_minus(m / 2);
        r.coefficients[static_cast<std::size_t>(m)] = g;
    }

    if (K >= 1 && P > 0.0) r.diagnostics["g1_series_gap"] = std::abs(r.coefficients[1] - g1_series(P, terms));
    if (K >= 2 && P > 0.0) r.diagnostics["remainder_slope"] = remainder_slope(r);
    return r;
}

double remainder_slope(const ExpansionResult& g, const std::vector<int>& Ns)
{
    if (Ns.size() < 2) throw std::invalid_argument("remainder_slope needs at least two sizes");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int N : Ns) {
        double predicted = 0.0;
        for (std::size_t k = g.coefficients.size(); k-- > 0;) predicted = predicted / N + g.coefficients[k];
        const double residual = std::abs(mehta_log_partition(N, g.P) / N - predicted);
        const double x = std::log(static_cast<double>(N));
        const double y = std::log(std::max(residual, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(Ns.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double richardson_limit(const std::vector<double>& h, const std::vector<double>& values)
{
    if (h.size() != values.size() || h.empty()) throw std::invalid_argument("richardson_limit needs matching data");
    std::vector<double> p = values;
    const std::size_t n = h.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            p[i] = (h[i] * p[i + 1] - h[i + level] * p[i]) / (h[i] - h[i + level]);
    return p[0];
}

double free_energy(double P)
{
    if (!(P > 0.0) || !std::isfinite(P)) throw std::invalid_argument("free_energy needs P > 0");
    double error = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [P](double x) { return log_gamma(1.0 + P * x); }, 0.0, 1.0, 15, 1e-14, &error);
    return -0.5 * (1.0 + P) * std::log(2.0 * P) + 0.5 * std::log(2.0 * std::numbers::pi) + integral;
}

double free_energy_large_p(double P)
{
    const double ln2 = std::numbers::ln2;
    return -P * (3.0 + 2.0 * ln2) / 4.0 - 0.5 * (1.0 + ln2) + std::log(2.0 * std::numbers::pi)
        + std::log(P) / (12.0 * P);
}

double c0(const EquilibriumMeasure& mu) { return -energy_functional(mu); }

namespace {

Grid sweep_grid(const PotentialSpec& potential, double P, const InterpolationOptions& o)
{
    const Grid a = choose_domain(potential.at(0.0), P, o.tail_eps, o.grid_points);
    const Grid b = choose_domain(potential.at(1.0), P, o.tail_eps, o.grid_points);
    return a.half_width() >= b.half_width() ? a : b;
}

} // namespace

std::vector<InterpolationNode> interpolation_sweep(const PotentialSpec& potential, double P,
                                                  const InterpolationOptions& options)
{
    if (options.t_nodes < 8) throw std::invalid_argument("the t-quadrature needs at least 8 nodes");
    potential.validate();
    const Grid grid = sweep_grid(potential, P, options);
    const GridFunction phi = potential.perturbation.sample(grid);
    const QuadratureRule rule = gauss_legendre(static_cast<std::size_t>(options.t_nodes), 0.0, 1.0);

    std::vector<InterpolationNode> nodes;
    std::optional<GridFunction> warm;
    std::shared_ptr<const LogKernel> kernel;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double t = rule.nodes[k];
        const EquilibriumMeasure mu = solve_equilibrium(potential.at(t), P, grid, options.tol, 2000, warm, kernel);
        kernel = mu.kernel;
        warm = mu.log_rho;
        nodes.push_back({t, rule.weights[k], mu.mean(phi), d1_linear_statistic(phi, mu)});
    }
    return nodes;
}

double interpolated_log_partition(const PotentialSpec& potential, double P, int N, const InterpolationOptions& options)
{
    if (N < 1) throw std::invalid_argument("N must be positive");
    const double exact = mehta_log_partition(N, P);
    if (potential.perturbation.is_zero()) return exact;
    double integral = 0.0;
    for (const InterpolationNode& n : interpolation_sweep(potential, P, options))
        integral += n.weight * (n.mean_phi + n.d1 / N);
    return exact - N * integral;
}

CoefficientResult perturbed_coefficients(const PotentialSpec& potential, double P, const InterpolationOptions& options)
{
    const ExpansionResult g = gaussian_expansion_coefficients(P, 1);
    CoefficientResult r;
    r.g0 = g.coefficients[0];
    r.g1 = g.coefficients[1];
    if (potential.perturbation.is_zero()) {
        r.c0_interpolated = r.g0;
        r.c1 = r.g1;
        const Grid grid = sweep_grid(potential, P, options);
        r.c0_energy = c0(solve_equilibrium(potential.at(1.0), P, grid, options.tol));
        return r;
    }
    r.nodes = interpolation_sweep(potential, P, options);
    double mean_int = 0.0, d1_int = 0.0;
    for (const InterpolationNode& n : r.nodes) {
        mean_int += n.weight * n.mean_phi;
        d1_int += n.weight * n.d1;
    }
    r.c0_interpolated = r.g0 - mean_int;
    r.c1 = r.g1 - d1_int;

    double first = 0.0, second = 0.0;
    for (std::size_t k = 0; k + 1 < r.nodes.size(); ++k) first = std::max(first, std::abs(r.nodes[k + 1].d1 - r.nodes[k].d1));
    for (std::size_t k = 0; k + 2 < r.nodes.size(); ++k)
        second = std::max(second, std::abs(r.nodes[k + 2].d1 - 2.0 * r.nodes[k + 1].d1 + r.nodes[k].d1));
    r.smoothness = first > 0.0 ? second / first : 0.0;

    const Grid grid = sweep_grid(potential, P, options);
    r.c0_energy = c0(solve_equilibrium(potential.at(1.0), P, grid, options.tol));
    return r;
}

double c1(const PotentialSpec& potential, double P, const InterpolationOptions& options)
{
    return perturbed_coefficients(potential, P, options).c1;
}

} // namespace loggas
