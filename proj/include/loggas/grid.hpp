#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace loggas {

// Uniform grid on [-L, L] with an even number of nodes, symmetric about 0.
class Grid {
public:
    static constexpr std::size_t default_points = 1024;

    Grid(double half_width, std::size_t points = default_points);

    double half_width() const { return half_width_; }
    std::size_t size() const { return points_; }
    double step() const { return step_; }
    double node(std::size_t i) const { return (*nodes_)[i]; }
    std::span<const double> nodes() const { return *nodes_; }

    // Trapezoid weight of node i.
    double weight(std::size_t i) const
    {
        return (i == 0 || i + 1 == points_) ? 0.5 * step_ : step_;
    }

    bool operator==(const Grid& other) const
    {
        return points_ == other.points_ && half_width_ == other.half_width_;
    }

private:
    double half_width_;
    std::size_t points_;
    double step_;
    std::shared_ptr<const std::vector<double>> nodes_;
};

class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);
    explicit GridFunction(Grid grid); // zeros

    static GridFunction from_function(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double sup_norm() const;

    GridFunction operator+(const GridFunction& o) const;
    GridFunction operator-(const GridFunction& o) const;
    GridFunction operator*(const GridFunction& o) const; // pointwise
    GridFunction operator*(double a) const;
    GridFunction operator-() const { return *this * -1.0; }
    GridFunction map(const std::function<double(double)>& f) const;

private:
    void check_same_grid(const GridFunction& o) const;

    Grid grid_;
    std::vector<double> values_;
};

inline GridFunction operator*(double a, const GridFunction& f) { return f * a; }

// Trapezoid rule over the whole grid.
double integrate(const GridFunction& f);

// Fourth-order finite differences, one-sided at the two boundary layers.
GridFunction derivative(const GridFunction& f);

// Four-point Lagrange interpolation; throws std::out_of_range for |x| > L.
double interpolate(const GridFunction& f, double x);

// Fourth-order running integrals: left(i) = int_{-L}^{x_i} f, right(i) = int_{x_i}^{L} f.
std::vector<double> running_integral_from_left(const GridFunction& f);
std::vector<double> running_integral_from_right(const GridFunction& f);

// Two columns "x,value" with 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& f);

// Gauss-Legendre rule on [a, b].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre(std::size_t n, double a = 0.0, double b = 1.0);

} // namespace loggas
