#include "loggas/hilbert.hpp"
#include "loggas/error.hpp"
#include "loggas/parallel.hpp"

#include <cmath>
#include <sstream>

namespace loggas {

namespace {

void check_decay(const GridFunction& f, const char* who)
{
    const double sup = f.sup_norm();
    const double edge = std::max(std::abs(f[0]), std::abs(f[f.size() - 1]));
    if (sup > 0.0 && edge >= 1e-12 * sup) {
        std::ostringstream msg;
        msg << who << ": input not decayed at the grid boundary (edge/sup = " << edge / sup << ")";
        warn(msg.str());
    }
}

double G(double s) { return s == 0.0 ? 0.0 : s * std::log(std::abs(s)) - s; }
double H2(double s) { return s == 0.0 ? 0.0 : 0.5 * s * s * std::log(std::abs(s)) - 0.25 * s * s; }

// int_0^1 tau^m log|a + tau| dtau for m = 0, 1 and integer a.
void cell_moments(double a, double& m0, double& m1)
{
    if (a >= 8.0 || a <= -9.0) {
        // log|a| + log1p(tau / a), expanded in 1/a.
        const double la = std::log(std::abs(a));
        double s0 = 0.0, s1 = 0.0, p = 1.0;
        for (int k = 1; k <= 24; ++k) {
            p /= a;
            const double sign = (k % 2 == 1) ? 1.0 : -1.0;
            s0 += sign * p / (k * (k + 1.0));
            s1 += sign * p / (k * (k + 2.0));
        }
        m0 = la + s0;
        m1 = 0.5 * la + s1;
        return;
    }
    m0 = G(a + 1.0) - G(a);
    m1 = H2(a + 1.0) - H2(a) - a * m0;
}

// (h^2/12) f'' with a fourth-order interior stencil.
std::vector<double> curvature_correction(std::span<const double> f)
{
    const std::size_t n = f.size();
    std::vector<double> c(n);
    for (std::size_t i = 2; i + 2 < n; ++i)
        c[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / 144.0;
    c[1] = (f[0] - 2.0 * f[1] + f[2]) / 12.0;
    c[n - 2] = (f[n - 1] - 2.0 * f[n - 2] + f[n - 3]) / 12.0;
    c[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / 12.0;
    c[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / 12.0;
    return c;
}

} // namespace

GridFunction hilbert(const GridFunction& f)
{
    check_decay(f, "hilbert");
    const std::size_t n = f.size();
    const auto v = f.values();
    std::vector<double> out(n);
    parallel_for(n, [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t j = i + 1, k = 1; j < n; j += 2, k += 2) s += v[j] / static_cast<double>(k);
        for (std::size_t k = 1; k <= i; k += 2) s -= v[i - k] / static_cast<double>(k);
        out[i] = 2.0 * s;
    });
    return GridFunction(f.grid(), std::move(out));
}

LogKernel::LogKernel(const Grid& grid) : grid_(grid)
{
    const std::size_t n = grid.size();
    right_.resize(2 * n);
    left_.resize(2 * n);
    for (std::size_t k = 0; k < 2 * n; ++k) {
        const double d = static_cast<double>(k) - static_cast<double>(n - 1);
        double m0, m1;
        cell_moments(d, m0, m1);
        right_[k] = m0 - m1;
        cell_moments(d - 1.0, m0, m1);
        left_[k] = m1;
    }
}

double LogKernel::linear_weight(std::size_t i, std::size_t j) const
{
    const std::size_t n = grid_.size();
    const double h = grid_.step();
    const std::size_t k = j + n - 1 - i;
    double w = 0.0;
    if (j + 1 < n) w += 0.5 * std::log(h) + right_[k];
    if (j > 0) w += 0.5 * std::log(h) + left_[k];
    return h * w;
}

std::vector<double> LogKernel::apply_linear(std::span<const double> f) const
{
    const std::size_t n = grid_.size();
    const double h = grid_.step();
    double mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) mass += f[j] * ((j == 0 || j + 1 == n) ? 0.5 : 1.0);
    const double log_term = std::log(h) * mass;
    std::vector<double> out(n);
    parallel_for(n, [&](std::size_t i) {
        const double* r = right_.data() + (n - 1 - i);
        const double* l = left_.data() + (n - 1 - i);
        double s = f[0] * r[0] + f[n - 1] * l[n - 1];
        for (std::size_t j = 1; j + 1 < n; ++j) s += f[j] * (r[j] + l[j]);
        out[i] = h * (log_term + s);
    });
    return out;
}

std::vector<double> LogKernel::apply(std::span<const double> f) const
{
    if (f.size() != grid_.size()) throw std::invalid_argument("log kernel size mismatch");
    std::vector<double> out = apply_linear(f);
    const std::vector<double> corr = apply_linear(curvature_correction(f));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= corr[i];
    return out;
}

const Eigen::MatrixXd& LogKernel::matrix() const
{
    std::call_once(matrix_once_, [this] { matrix_ = build_matrix(); });
    return matrix_;
}

Eigen::MatrixXd LogKernel::build_matrix() const
{
    const std::size_t n = grid_.size();
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd lin(N, N);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) lin(i, j) = linear_weight(i, j);
    });
    // Column j of the correction operator is curvature_correction(e_j).
    Eigen::MatrixXd out = lin;
    parallel_for(n, [&](std::size_t j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const std::vector<double> c = curvature_correction(e);
        for (std::size_t m = 0; m < n; ++m)
            if (c[m] != 0.0) out.col(static_cast<Eigen::Index>(j)) -= c[m] * lin.col(static_cast<Eigen::Index>(m));
    });
    return out;
}

GridFunction log_potential(const GridFunction& f, const LogKernel& kernel)
{
    if (!(kernel.grid() == f.grid())) throw std::invalid_argument("log kernel built for another grid");
    std::vector<double> u = kernel.apply(f.values());
    for (double& x : u) x = -x;
    return GridFunction(f.grid(), std::move(u));
}

GridFunction log_potential(const GridFunction& f)
{
    check_decay(f, "log_potential");
    return log_potential(f, LogKernel(f.grid()));
}

} // namespace loggas
