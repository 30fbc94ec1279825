#include "loggas/special.hpp"
#include "loggas/grid.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace loggas {

const SpecialConstants& special_constants()
{
    static const SpecialConstants constants = [] {
        SpecialConstants c{};
        c.euler_gamma = boost::math::constants::euler<double>();
        c.bernoulli.fill(0.0);
        c.bernoulli[0] = 1.0;
        c.bernoulli[1] = -0.5;
        for (int k = 1; 2 * k <= 32; ++k) c.bernoulli[2 * k] = boost::math::bernoulli_b2n<double>(k);
        c.zeta.fill(0.0);
        for (int k = 2; k <= 34; ++k) c.zeta[k] = boost::math::zeta(static_cast<double>(k));
        return c;
    }();
    return constants;
}

double log_gamma(double z)
{
    if (!(z > 0.0)) throw std::domain_error("log_gamma needs a positive argument");
    return boost::math::lgamma(z);
}

double digamma(double z)
{
    if (!(z > 0.0)) throw std::domain_error("digamma needs a positive argument");
    return boost::math::digamma(z);
}

double polygamma(int n, double z)
{
    if (!(z > 0.0)) throw std::domain_error("polygamma needs a positive argument");
    if (n == 0) return digamma(z);
    return boost::math::polygamma(n, z);
}

double xm_log1p(double u)
{
    if (std::abs(u) < 0.1) {
        // sum_{k>=2} (-1)^k u^k / k
        double s = 0.0;
        for (int k = 24; k >= 2; --k) s = s * u + ((k % 2 == 0) ? 1.0 : -1.0) / k;
        return s * u * u;
    }
    return u - std::log1p(u);
}

double f_hat_alpha(double x, double P)
{
    if (!(P > 0.0) || !std::isfinite(P)) throw std::domain_error("f_hat_alpha needs P > 0");
    const double ax = std::abs(x);
    const double prefactor = P / std::exp(log_gamma(P));
    if (ax == 0.0) {
        const double v = std::exp((0.5 * P - 1.0) * std::log(2.0) + log_gamma(0.5 * P));
        return prefactor * v * v;
    }
    // Deform [0, inf) into [0, i x] followed by i x + [0, inf); both pieces are
    // free of oscillation so the algebraic decay in x is resolved to full
    // relative precision.
    thread_local boost::math::quadrature::tanh_sinh<double> finite_rule;
    thread_local boost::math::quadrature::exp_sinh<double> half_line_rule;
    const double tol = 1e-14;

    const double vertical = finite_rule.integrate(
        [&](double s) { return s <= 0.0 ? 0.0 : std::exp((P - 1.0) * std::log(s) + s * (0.5 * s - ax)); },
        0.0, ax, tol);

    const auto shifted = [&](double u, bool imag) {
        const double r = std::hypot(u, ax), theta = std::atan2(ax, u);
        const double mag = std::exp((P - 1.0) * std::log(r) - 0.5 * u * u);
        return imag ? mag * std::sin((P - 1.0) * theta) : mag * std::cos((P - 1.0) * theta);
    };
    const double horiz_re = half_line_rule.integrate([&](double u) { return shifted(u, false); }, tol);
    const double horiz_im = half_line_rule.integrate([&](double u) { return shifted(u, true); }, tol);

    const std::complex<double> value = std::polar(vertical, 0.5 * std::numbers::pi * P)
        + std::exp(-0.5 * ax * ax) * std::complex<double>(horiz_re, horiz_im);
    return prefactor * std::norm(value);
}

double sum_with_tail(const std::function<double(double)>& term, std::size_t terms)
{
    if (terms < 8) throw std::invalid_argument("sum_with_tail needs at least 8 terms");
    // Smallest terms first.
    double head = 0.0;
    for (std::size_t j = terms - 1; j >= 1; --j) head += term(static_cast<double>(j));
    const double J = static_cast<double>(terms);
    // int_J^inf term(x) dx with x = 1/u.
    const QuadratureRule rule = gauss_legendre(30, 0.0, 1.0 / J);
    double integral = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double u = rule.nodes[k];
        integral += rule.weights[k] * term(1.0 / u) / (u * u);
    }
    const double d1 = 0.5 * (term(J + 1.0) - term(J - 1.0));
    const double d3 = 0.5 * (term(J + 2.0) - 2.0 * term(J + 1.0) + 2.0 * term(J - 1.0) - term(J - 2.0));
    const double tail = integral + 0.5 * term(J) - d1 / 12.0 + d3 / 720.0;
    return head + tail;
}

double g1_series(double P, std::size_t terms)
{
    if (terms < 1000) throw std::invalid_argument("g1_series needs at least 1000 terms");
    if (P == 0.0) return 0.0;
    const double gamma = special_constants().euler_gamma;
    const double series = sum_with_tail(
        [P](double j) { return P / (2.0 * j * (j + 1.0)) + 0.5 * xm_log1p(P / (j + 1.0)); }, terms);
    return 0.5 * gamma * P - 0.5 * std::log1p(P) + series;
}

} // namespace loggas
