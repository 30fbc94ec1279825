#include "loggas/potential.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace loggas {

double Perturbation::value(double x) const
{
    switch (kind) {
    case PerturbationKind::zero: return 0.0;
    case PerturbationKind::cosine: return amplitude * std::cos(omega * x);
    case PerturbationKind::bump: {
        const double z = (x - mean) / width;
        return amplitude * std::exp(-z * z);
    }
    case PerturbationKind::lorentz: return amplitude / (1.0 + x * x);
    }
    return 0.0;
}

double Perturbation::derivative(double x) const
{
    switch (kind) {
    case PerturbationKind::zero: return 0.0;
    case PerturbationKind::cosine: return -amplitude * omega * std::sin(omega * x);
    case PerturbationKind::bump: {
        const double z = (x - mean) / width;
        return -2.0 * amplitude * z / width * std::exp(-z * z);
    }
    case PerturbationKind::lorentz: {
        const double d = 1.0 + x * x;
        return -2.0 * amplitude * x / (d * d);
    }
    }
    return 0.0;
}

GridFunction Perturbation::sample(const Grid& grid) const
{
    return GridFunction::from_function(grid, [this](double x) { return value(x); });
}

void PotentialSpec::validate() const
{
    std::size_t top = even_coefficients.size();
    while (top > 0 && even_coefficients[top - 1] == 0.0) --top;
    if (top < 2 || !(even_coefficients[top - 1] > 0.0))
        throw std::invalid_argument("potential needs a positive leading coefficient of degree >= 2");
    for (double c : even_coefficients)
        if (!std::isfinite(c)) throw std::invalid_argument("potential coefficients must be finite");
    if (perturbation.kind == PerturbationKind::bump && !(perturbation.width > 0.0))
        throw std::invalid_argument("bump width must be positive");
    if (!std::isfinite(perturbation.amplitude) || !std::isfinite(t))
        throw std::invalid_argument("perturbation parameters must be finite");
}

double PotentialSpec::base(double x) const
{
    const double x2 = x * x;
    double s = 0.0;
    for (std::size_t k = even_coefficients.size(); k-- > 0;) s = s * x2 + even_coefficients[k];
    return s;
}

double PotentialSpec::base_derivative(double x) const
{
    const double x2 = x * x;
    double s = 0.0;
    for (std::size_t k = even_coefficients.size(); k-- > 1;) s = s * x2 + 2.0 * k * even_coefficients[k];
    return s * x;
}

bool PotentialSpec::is_gaussian() const
{
    if (!(perturbation.is_zero() || t == 0.0)) return false;
    std::size_t top = even_coefficients.size();
    while (top > 0 && even_coefficients[top - 1] == 0.0) --top;
    return top == 2 && even_coefficients[0] == 0.0 && even_coefficients[1] == 0.5;
}

PotentialSpec gaussian_potential() { return PotentialSpec{}; }

PotentialSpec quartic_potential()
{
    PotentialSpec p;
    p.even_coefficients = {0.0, 0.0, 1.0};
    return p;
}

std::vector<double> parse_even_polynomial(const std::string& text)
{
    if (text == "x^2/2") return {0.0, 0.5};
    if (text == "x^4") return {0.0, 0.0, 1.0};
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse potential coefficient '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw std::invalid_argument("cannot parse potential coefficient '" + item + "'");
        out.push_back(v);
    }
    PotentialSpec probe;
    probe.even_coefficients = out;
    probe.validate();
    return out;
}

PerturbationKind parse_perturbation_kind(const std::string& text)
{
    if (text == "zero") return PerturbationKind::zero;
    if (text == "cos") return PerturbationKind::cosine;
    if (text == "bump") return PerturbationKind::bump;
    if (text == "lorentz") return PerturbationKind::lorentz;
    throw std::invalid_argument("unknown perturbation '" + text + "'");
}

std::string to_string(PerturbationKind kind)
{
    switch (kind) {
    case PerturbationKind::zero: return "zero";
    case PerturbationKind::cosine: return "cos";
    case PerturbationKind::bump: return "bump";
    case PerturbationKind::lorentz: return "lorentz";
    }
    return "zero";
}

std::vector<std::pair<std::string, PotentialSpec>> potential_presets()
{
    std::vector<std::pair<std::string, PotentialSpec>> out;
    out.emplace_back("gaussian", gaussian_potential());
    out.emplace_back("quartic", quartic_potential());

    PotentialSpec mixed;
    mixed.even_coefficients = {0.0, 0.5, 0.25};
    out.emplace_back("quadratic-quartic", mixed);

    PotentialSpec cosine = gaussian_potential();
    cosine.perturbation = {PerturbationKind::cosine, 0.2, 1.0, 0.0, 1.0};
    out.emplace_back("gaussian-cos", cosine);

    PotentialSpec bump = gaussian_potential();
    bump.perturbation = {PerturbationKind::bump, 0.5, 1.0, 0.5, 0.8};
    out.emplace_back("gaussian-bump", bump);

    PotentialSpec lorentz = gaussian_potential();
    lorentz.perturbation = {PerturbationKind::lorentz, -0.5, 1.0, 0.0, 1.0};
    out.emplace_back("gaussian-lorentz", lorentz);
    return out;
}

} // namespace loggas
