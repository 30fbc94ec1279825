#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace loggas {

struct SpecialConstants {
    double euler_gamma;
    std::array<double, 33> bernoulli; // B_0..B_32 with B_1 = -1/2
    std::array<double, 35> zeta;      // zeta[k] = zeta(k) for 2 <= k <= 34; entries 0 and 1 unused
};

const SpecialConstants& special_constants();

// log Gamma(z) for z > 0; throws std::domain_error otherwise.
double log_gamma(double z);

// Digamma and polygamma psi^(n)(z), z > 0.
double digamma(double z);
double polygamma(int n, double z);

// u - log(1 + u), accurate for small |u|.
double xm_log1p(double u);

// |f_alpha(x)|^2 for the Gaussian crossover kernel
// f_alpha(x) = sqrt(P / Gamma(P)) * int_0^inf t^{P-1} exp(-t^2/2 + i x t) dt.
double f_hat_alpha(double x, double P);

// Sum over j >= 1 of term(j): explicit up to `terms - 1`, Euler-Maclaurin tail
// from j = terms on. `term` must accept real arguments and decay like j^{-2}
// or faster.
double sum_with_tail(const std::function<double(double)>& term, std::size_t terms);

// First-order coefficient of the Gaussian 1/N expansion,
// g1 = gamma P / 2 - log(1+P) / 2 - 1/2 sum_j [log(1 + P/(j+1)) - P/j].
double g1_series(double P, std::size_t terms = 10000);

} // namespace loggas
