#pragma once

#include "loggas/equilibrium.hpp"

#include <map>
#include <string>
#include <vector>

namespace loggas {

enum class ExpansionMethod { mehta_exact, euler_maclaurin, interpolation };
std::string to_string(ExpansionMethod method);

struct ExpansionResult {
    std::vector<double> coefficients; // g_0, g_1, ... or c_0, c_1
    ExpansionMethod method = ExpansionMethod::euler_maclaurin;
    double P = 0.0;
    PotentialSpec potential;
    std::map<std::string, double> diagnostics;
};

// log Z_N for V(x) = x^2/2 with pair exponent 2P/N:
// (N/2) log 2pi + sum_{a=1}^N log Gamma(1 + aP/N) - N log Gamma(1 + P/N).
double mehta_log_partition(int N, double P);

// g_0..g_K of N^{-1} log Z_N = sum_k g_k N^{-k} + O(N^{-K-1}) for the Gaussian,
// assembled from the Weierstrass product and Euler-Maclaurin sums.
ExpansionResult gaussian_expansion_coefficients(double P, int K, std::size_t terms = 10000);

// Log-log slope of |N^{-1} log Z_N - sum_k g_k N^{-k}| against N.
double remainder_slope(const ExpansionResult& g, const std::vector<int>& Ns = {50, 100, 200, 400, 800, 1600});

// Polynomial extrapolation of values(h) to h = 0 (Neville).
double richardson_limit(const std::vector<double>& h, const std::vector<double>& values);

// F(P) = -((1+P)/2) log(2P) + log(2pi)/2 + int_0^1 log Gamma(1 + P x) dx.
double free_energy(double P);

// Large-P law F ~ -P(3 + 2 log 2)/4 - (1 + log 2)/2 + log 2pi + log(P)/(12P).
double free_energy_large_p(double P);

// -energy_functional(mu).
double c0(const EquilibriumMeasure& mu);

struct InterpolationNode {
    double t = 0.0;
    double weight = 0.0;
    double mean_phi = 0.0; // int phi dmu_t
    double d1 = 0.0;       // d1_linear_statistic(phi) at mu_t
};

struct InterpolationOptions {
    int t_nodes = 12;
    std::size_t grid_points = Grid::default_points;
    double tail_eps = 1e-14;
    double tol = 1e-12;
};

// Equilibria of V + t phi at Gauss-Legendre nodes in t, each warm-started
// from the previous one.
std::vector<InterpolationNode> interpolation_sweep(const PotentialSpec& potential, double P,
                                                  const InterpolationOptions& options = {});

// log Z_N[V + phi] ~ mehta(N, P) - N int_0^1 (<phi>_t + d1(t)/N) dt for the
// Gaussian base.
double interpolated_log_partition(const PotentialSpec& potential, double P, int N,
                                  const InterpolationOptions& options = {});

struct CoefficientResult {
    double c0_energy = 0.0; // -energy at t = 1
    double c0_interpolated = 0.0; // g_0 - int <phi>_t dt
    double c1 = 0.0;
    double g0 = 0.0;
    double g1 = 0.0;
    double smoothness = 0.0; // max second difference / max first difference of d1 over the nodes
    std::vector<InterpolationNode> nodes;
};

// c_1 = g_1 - int_0^1 d1(t) dt, together with both routes to c_0.
CoefficientResult perturbed_coefficients(const PotentialSpec& potential, double P,
                                         const InterpolationOptions& options = {});
double c1(const PotentialSpec& potential, double P, const InterpolationOptions& options = {});

} // namespace loggas
