#pragma once

#include "loggas/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace loggas {

enum class PerturbationKind { zero, cosine, bump, lorentz };

// Bounded perturbation phi: amplitude * {cos(omega x), exp(-(x-mean)^2/width^2), 1/(1+x^2)}.
struct Perturbation {
    PerturbationKind kind = PerturbationKind::zero;
    double amplitude = 0.0;
    double omega = 1.0;
    double mean = 0.0;
    double width = 1.0;

    double value(double x) const;
    double derivative(double x) const;
    bool is_zero() const { return kind == PerturbationKind::zero || amplitude == 0.0; }
    GridFunction sample(const Grid& grid) const;
};

// V_t(x) = sum_k c_k x^{2k} + t * phi(x).
struct PotentialSpec {
    std::vector<double> even_coefficients{0.0, 0.5};
    Perturbation perturbation;
    double t = 1.0;

    void validate() const;
    double base(double x) const;
    double base_derivative(double x) const;
    double value(double x) const { return base(x) + t * perturbation.value(x); }
    double derivative(double x) const { return base_derivative(x) + t * perturbation.derivative(x); }
    PotentialSpec at(double t_new) const
    {
        PotentialSpec p = *this;
        p.t = t_new;
        return p;
    }
    bool is_gaussian() const;
};

PotentialSpec gaussian_potential();
PotentialSpec quartic_potential();

// "x^2/2", "x^4", or comma separated coefficients of x^0, x^2, x^4, ...
std::vector<double> parse_even_polynomial(const std::string& text);
PerturbationKind parse_perturbation_kind(const std::string& text);
std::string to_string(PerturbationKind kind);

// Named potentials used by the command line and the test suites.
std::vector<std::pair<std::string, PotentialSpec>> potential_presets();

} // namespace loggas
