#include "loggas/grid.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace loggas {

Grid::Grid(double half_width, std::size_t points)
    : half_width_(half_width), points_(points)
{
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("grid half width must be positive");
    if (points < 64 || points % 2 != 0)
        throw std::invalid_argument("grid needs an even number of points >= 64");
    step_ = 2.0 * half_width / static_cast<double>(points - 1);
    auto nodes = std::make_shared<std::vector<double>>(points);
    // Odd integer multiples of h/2, so x_i = -x_{M-1-i} holds bit for bit.
    const double half_step = 0.5 * step_;
    for (std::size_t i = 0; i < points; ++i) {
        const double k = 2.0 * static_cast<double>(i) - static_cast<double>(points - 1);
        (*nodes)[i] = k * half_step;
    }
    nodes_ = std::move(nodes);
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("grid function size does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::domain_error("grid function has non-finite values");
}

GridFunction::GridFunction(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

GridFunction GridFunction::from_function(const Grid& grid, const std::function<double(double)>& f)
{
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
    return GridFunction(grid, std::move(v));
}

double GridFunction::sup_norm() const
{
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void GridFunction::check_same_grid(const GridFunction& o) const
{
    if (!(grid_ == o.grid_)) throw std::invalid_argument("grid functions live on different grids");
}

GridFunction GridFunction::operator+(const GridFunction& o) const
{
    check_same_grid(o);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.values_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::operator-(const GridFunction& o) const
{
    check_same_grid(o);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.values_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::operator*(const GridFunction& o) const
{
    check_same_grid(o);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= o.values_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::operator*(double a) const
{
    std::vector<double> v(values_);
    for (double& x : v) x *= a;
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::map(const std::function<double(double)>& f) const
{
    std::vector<double> v(values_);
    for (double& x : v) x = f(x);
    return GridFunction(grid_, std::move(v));
}

double integrate(const GridFunction& f)
{
    const auto v = f.values();
    const std::size_t n = v.size();
    // Pair symmetric nodes first so odd integrands cancel exactly.
    double s = 0.0;
    for (std::size_t i = 1; i < n / 2; ++i) s += v[i] + v[n - 1 - i];
    s += 0.5 * (v[0] + v[n - 1]);
    return s * f.grid().step();
}

GridFunction derivative(const GridFunction& f)
{
    const auto v = f.values();
    const std::size_t n = v.size();
    const double c = 1.0 / (12.0 * f.grid().step());
    std::vector<double> d(n);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * c;
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * c;
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * c;
    d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) * c;
    d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) * c;
    return GridFunction(f.grid(), std::move(d));
}

double interpolate(const GridFunction& f, double x)
{
    const Grid& g = f.grid();
    const double L = g.half_width();
    if (!(std::abs(x) <= L))
        throw std::out_of_range("interpolation point " + std::to_string(x) + " outside the grid");
    const std::size_t n = g.size();
    auto cell = static_cast<std::ptrdiff_t>(std::floor((x + L) / g.step()));
    cell = std::clamp<std::ptrdiff_t>(cell, 0, static_cast<std::ptrdiff_t>(n) - 2);
    if (x == g.node(cell)) return f[cell];
    if (x == g.node(cell + 1)) return f[cell + 1];
    const std::size_t first = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(cell - 1, 0, static_cast<std::ptrdiff_t>(n) - 4));
    double result = 0.0;
    for (std::size_t a = first; a < first + 4; ++a) {
        double w = 1.0;
        for (std::size_t b = first; b < first + 4; ++b)
            if (b != a) w *= (x - g.node(b)) / (g.node(a) - g.node(b));
        result += w * f[a];
    }
    return result;
}

namespace {

// Fourth-order integral over cell [i, i+1].
double cell_integral(std::span<const double> v, std::size_t i, double h)
{
    const std::size_t n = v.size();
    if (i == 0) return h * (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]) / 24.0;
    if (i + 2 == n) return h * (v[n - 4] - 5.0 * v[n - 3] + 19.0 * v[n - 2] + 9.0 * v[n - 1]) / 24.0;
    return h * (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]) / 24.0;
}

} // namespace

std::vector<double> running_integral_from_left(const GridFunction& f)
{
    const auto v = f.values();
    const double h = f.grid().step();
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 1; i < v.size(); ++i) out[i] = out[i - 1] + cell_integral(v, i - 1, h);
    return out;
}

std::vector<double> running_integral_from_right(const GridFunction& f)
{
    const auto v = f.values();
    const double h = f.grid().step();
    const std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) out[i] = out[i + 1] + cell_integral(v, i, h);
    return out;
}

void write_csv(std::ostream& out, const GridFunction& f)
{
    out << "x,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < f.size(); ++i) out << f.grid().node(i) << ',' << f[i] << '\n';
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b)
{
    if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t k = 0; k < (n + 1) / 2; ++k) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (std::size_t j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / static_cast<double>(j);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = z; p0 = 1.0; }
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        rule.nodes[k] = mid - half * z;
        rule.nodes[n - 1 - k] = mid + half * z;
        rule.weights[k] = rule.weights[n - 1 - k] = half * w;
    }
    return rule;
}

} // namespace loggas
