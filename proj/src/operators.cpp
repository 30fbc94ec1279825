#include "loggas/operators.hpp"
#include "loggas/error.hpp"
#include "loggas/parallel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace loggas {

BivariateGridFunction::BivariateGridFunction(Grid grid, Eigen::MatrixXd values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (values_.rows() != n || values_.cols() != n)
        throw std::invalid_argument("bivariate values do not match the grid");
    if (!values_.allFinite()) throw std::domain_error("bivariate grid function has non-finite values");
}

namespace {

// Four interpolation nodes and weights around x.
void stencil(const Grid& g, double x, std::size_t& first, double w[4])
{
    const double L = g.half_width();
    if (!(std::abs(x) <= L)) throw std::out_of_range("interpolation point outside the grid");
    const auto n = static_cast<std::ptrdiff_t>(g.size());
    auto cell = static_cast<std::ptrdiff_t>(std::floor((x + L) / g.step()));
    cell = std::clamp<std::ptrdiff_t>(cell, 0, n - 2);
    first = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(cell - 1, 0, n - 4));
    for (std::size_t a = 0; a < 4; ++a) {
        w[a] = 1.0;
        for (std::size_t b = 0; b < 4; ++b)
            if (b != a) w[a] *= (x - g.node(first + b)) / (g.node(first + a) - g.node(first + b));
    }
}

} // namespace

double BivariateGridFunction::at(double x, double y) const
{
    std::size_t fx, fy;
    double wx[4], wy[4];
    stencil(grid_, x, fx, wx);
    stencil(grid_, y, fy, wy);
    double s = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) s += wx[a] * wy[b] * (*this)(fx + a, fy + b);
    return s;
}

GridFunction BivariateGridFunction::column(std::size_t j) const
{
    const Eigen::VectorXd c = values_.col(static_cast<Eigen::Index>(j));
    return GridFunction(grid_, std::vector<double>(c.data(), c.data() + c.size()));
}

CenteredFunction center(const GridFunction& f, const EquilibriumMeasure& mu)
{
    if (!(f.grid() == mu.grid)) throw std::invalid_argument("function and measure live on different grids");
    const double m = mu.mean(f);
    return {f.map([m](double v) { return v - m; }), true};
}

CenteredFunction center(const CenteredFunction& f, const EquilibriumMeasure& mu)
{
    if (f.mean_removed) return f;
    return center(f.f, mu);
}

BivariateGridFunction ncd(const GridFunction& f)
{
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    const GridFunction d1 = derivative(f);
    const GridFunction d3 = derivative(derivative(d1));
    Eigen::MatrixXd out(n, n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t gap = i > j ? i - j : j - i;
            double v;
            if (gap >= 3) {
                v = (f[i] - f[j]) / (g.node(i) - g.node(j));
            } else {
                const double d = g.node(i) - g.node(j);
                double fp, fppp;
                if (gap % 2 == 0) {
                    const std::size_t m = (i + j) / 2;
                    fp = d1[m];
                    fppp = d3[m];
                } else {
                    const double mid = 0.5 * (g.node(i) + g.node(j));
                    fp = interpolate(d1, mid);
                    fppp = interpolate(d3, mid);
                }
                v = fp + d * d * fppp / 24.0;
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    });
    return BivariateGridFunction(g, std::move(out));
}

BivariateGridFunction ncd_partial2(const GridFunction& f)
{
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    const GridFunction d1 = derivative(f);
    const GridFunction d2 = derivative(d1);
    const GridFunction d3 = derivative(d2);
    const GridFunction d4 = derivative(d3);
    Eigen::MatrixXd out(n, n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t gap = i > j ? i - j : j - i;
            const double d = g.node(i) - g.node(j);
            double v;
            if (gap >= 3)
                v = (f[i] - f[j] - d * d1[j]) / (d * d);
            else
                v = d2[j] / 2.0 + d * d3[j] / 6.0 + d * d * d4[j] / 24.0;
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    });
    return BivariateGridFunction(g, std::move(out));
}

GridFunction theta_insert(const BivariateGridFunction& f, int slot)
{
    if (slot != 2) throw std::invalid_argument("only the two-variable insertion (slot 2) is supported");
    const Eigen::VectorXd d = f.values().diagonal();
    return GridFunction(f.grid(), std::vector<double>(d.data(), d.data() + d.size()));
}

namespace {

void a_inverse_raw(const double* f, const GridFunction& rho, Orientation orientation, double* out)
{
    const Grid& g = rho.grid();
    const std::size_t n = g.size();
    std::vector<double> weighted(n);
    for (std::size_t i = 0; i < n; ++i) weighted[i] = f[i] * rho[i];
    const GridFunction fr(g, std::move(weighted));
    std::vector<double> left, right;
    if (orientation != Orientation::from_right) left = running_integral_from_left(fr);
    if (orientation != Orientation::from_left) right = running_integral_from_right(fr);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rho[i];
        if (!(r > 1e-300)) throw NumericalError("density underflow in a_inverse");
        bool use_right = orientation == Orientation::from_right
            || (orientation == Orientation::outward && g.node(i) > 0.0);
        out[i] = use_right ? right[i] / r : -left[i] / r;
    }
}

} // namespace

GridFunction a_inverse(const CenteredFunction& f, const EquilibriumMeasure& mu, Orientation orientation)
{
    if (!(f.f.grid() == mu.grid)) throw std::invalid_argument("function and measure live on different grids");
    std::vector<double> out(mu.grid.size());
    a_inverse_raw(f.f.values().data(), mu.rho, orientation, out.data());
    return GridFunction(mu.grid, std::move(out));
}

GridFunction xi_apply(const GridFunction& psi, const EquilibriumMeasure& mu)
{
    if (!(psi.grid() == mu.grid)) throw std::invalid_argument("function and measure live on different grids");
    const GridFunction dpsi = derivative(psi);
    const GridFunction dlog = derivative(mu.log_rho);
    const GridFunction H = hilbert(psi * mu.rho);
    const double Hmean = mu.mean(H);
    std::vector<double> out(psi.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = dpsi[i] + dlog[i] * psi[i] + 2.0 * mu.P * (H[i] - Hmean);
    return GridFunction(mu.grid, std::move(out));
}

MasterOperator::MasterOperator(const EquilibriumMeasure& mu) : rho_(mu.rho)
{
    const Grid& g = mu.grid;
    const std::size_t n = g.size();
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd S(N, N);
    const double P = mu.P;
    parallel_for(n, [&](std::size_t j) {
        // Column j: e_j - a_inverse(2P center(H[rho_j e_j])).
        std::vector<double> col(n);
        const double rj = mu.rho[j];
        for (std::size_t i = 0; i < n; ++i) {
            const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
            col[i] = (k % 2 != 0) ? 2.0 * rj / static_cast<double>(k) : 0.0;
        }
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += g.weight(i) * mu.rho[i] * col[i];
        for (std::size_t i = 0; i < n; ++i) col[i] = 2.0 * P * (col[i] - m);
        std::vector<double> w(n);
        a_inverse_raw(col.data(), mu.rho, Orientation::outward, w.data());
        for (std::size_t i = 0; i < n; ++i)
            S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (i == j ? 1.0 : 0.0) - w[i];
    });
    lu_.compute(S);
    rcond_ = lu_.rcond();
    if (!(rcond_ > 1e-14)) {
        std::ostringstream msg;
        msg << "master operator system is numerically singular (rcond " << rcond_ << ")";
        throw NumericalError(msg.str(), rcond_);
    }
}

Eigen::VectorXd MasterOperator::right_hand_side(const GridFunction& f) const
{
    const std::size_t n = f.size();
    const double m = integrate(f * rho_);
    std::vector<double> c(n), a(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = f[i] - m;
    a_inverse_raw(c.data(), rho_, Orientation::outward, a.data());
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) b(static_cast<Eigen::Index>(i)) = -a[i];
    return b;
}

GridFunction MasterOperator::solve(const GridFunction& f) const
{
    if (!(f.grid() == rho_.grid())) throw std::invalid_argument("function and measure live on different grids");
    const Eigen::VectorXd x = lu_.solve(right_hand_side(f));
    return GridFunction(rho_.grid(), std::vector<double>(x.data(), x.data() + x.size()));
}

Eigen::MatrixXd MasterOperator::solve_columns(const Eigen::MatrixXd& F) const
{
    const std::size_t n = rho_.grid().size();
    Eigen::MatrixXd B(F.rows(), F.cols());
    parallel_for(static_cast<std::size_t>(F.cols()), [&](std::size_t j) {
        const Eigen::VectorXd c = F.col(static_cast<Eigen::Index>(j));
        B.col(static_cast<Eigen::Index>(j)) =
            right_hand_side(GridFunction(rho_.grid(), std::vector<double>(c.data(), c.data() + n)));
    });
    return lu_.solve(B);
}

std::shared_ptr<const MasterOperator> master_operator(const EquilibriumMeasure& mu)
{
    std::lock_guard<std::mutex> lock(mu.cache->mutex);
    if (!mu.cache->master_operator) mu.cache->master_operator = std::make_shared<const MasterOperator>(mu);
    return std::static_pointer_cast<const MasterOperator>(mu.cache->master_operator);
}

GridFunction xi_inverse(const GridFunction& f, const EquilibriumMeasure& mu)
{
    return master_operator(mu)->solve(f);
}

BivariateGridFunction xi1_inverse(const BivariateGridFunction& f, const EquilibriumMeasure& mu)
{
    if (!(f.grid() == mu.grid)) throw std::invalid_argument("function and measure live on different grids");
    return BivariateGridFunction(mu.grid, master_operator(mu)->solve_columns(f.values()));
}

D1Terms d1_terms(const GridFunction& psi, const EquilibriumMeasure& mu)
{
    const GridFunction chi = xi_inverse(psi, mu);
    const double A = mu.mean(derivative(chi));
    const BivariateGridFunction inner = xi1_inverse(ncd_partial2(chi), mu);
    const double B = mu.mean(theta_insert(inner));
    return {A, B, mu.P * (A + B)};
}

double d1_linear_statistic(const GridFunction& psi, const EquilibriumMeasure& mu)
{
    return d1_terms(psi, mu).value;
}

} // namespace loggas
