#pragma once

#include "loggas/potential.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace loggas {

struct ChainConfig {
    int N = 100;
    double P = 1.0;
    PotentialSpec potential;
    long n_sweeps = 10000; // recorded sweeps per chain
    long burn_in = 1000;
    double proposal_scale = 0.5;
    std::uint64_t seed = 42;

    void validate() const;
};

struct SampleEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
    double acceptance_rate = 0.0;
    double integrated_autocorrelation = 1.0;
    std::vector<double> batch_means; // 32 per chain, chain by chain
};

struct ChainSummary {
    double acceptance_rate = 0.0; // over recorded sweeps
    double proposal_scale = 0.0;  // frozen after burn-in
    std::vector<double> final_state;
};

// Log of the target-density ratio p(x with x_i -> proposal) / p(x).
double metropolis_log_ratio(std::span<const double> x, std::size_t i, double proposal, double coupling,
                            const PotentialSpec& potential);

// Single-site Gaussian random-walk Metropolis for
// prod_{i<j} |x_i - x_j|^{2P/N} prod_i exp(-V(x_i)). `observe` sees the state
// after every recorded sweep. `chain` selects an independent RNG stream.
ChainSummary metropolis_sample(const ChainConfig& cfg, const std::function<void(std::span<const double>)>& observe,
                               std::uint64_t chain = 0);

// Mean of N^{-1} sum_i psi(x_i) over `chains` independent chains, standard
// error from batch means (32 batches per chain).
SampleEstimate linear_statistic_estimate(const ChainConfig& cfg, const std::function<double(double)>& psi,
                                         int chains = 4);

// Same estimator for an arbitrary function of the configuration.
SampleEstimate configuration_estimate(const ChainConfig& cfg,
                                      const std::function<double(std::span<const double>)>& observable,
                                      int chains = 4);

// log Z_N by tensor quadrature, N <= 3.
double brute_force_log_partition(int N, double P, const PotentialSpec& potential);

// E[observable] under the N-particle density by the same quadrature, N <= 3.
double brute_force_expectation(int N, double P, const PotentialSpec& potential,
                               const std::function<double(std::span<const double>)>& observable);

// log(Z_N[V + phi] / Z_N[V]) = -N int_0^1 <N^{-1} sum phi(x_i)>_t dt with
// Gauss-Legendre nodes in t and one set of chains per node. The base
// potential is cfg.potential with t ignored.
SampleEstimate thermodynamic_integration(const ChainConfig& cfg, int t_nodes = 8, int chains = 4);

} // namespace loggas
