#pragma once

#include "loggas/potential.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace loggas {

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Pairwise sup-norm gaps between the RK4 density flow, the chained fixed
// point and a direct solve at V + t_end phi, all started from the t = 0
// equilibrium of `potential`.
struct FlowTriangle {
    double ode_vs_fixed_point = 0.0;
    double ode_vs_refit = 0.0;
    double fixed_point_vs_refit = 0.0;
    double max() const;
};
FlowTriangle flow_triangle(const PotentialSpec& potential, double P, double t_end, std::size_t points,
                           int ode_steps);

// |log(Z_2[V + phi] / Z_2[V]) + 2 int_0^1 <(phi(x) + phi(y)) / 2>_t dt|, both
// sides by tensor quadrature.
double interpolation_identity_gap(const PotentialSpec& potential, double P, int t_nodes = 16);

// Fixed-size oracle suite behind the `verify` command. Deterministic for a
// given seed.
std::vector<Check> verification_suite(std::uint64_t seed);

} // namespace loggas
