#include "loggas/flow.hpp"
#include "loggas/error.hpp"
#include "loggas/parallel.hpp"
#include "loggas/special.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace loggas {

FredholmKernel::FredholmKernel(const GridFunction& rho, const LogKernel& log_kernel) : rho_(rho)
{
    const Grid& g = rho.grid();
    if (!(log_kernel.grid() == g)) throw std::invalid_argument("log kernel built for another grid");
    const std::size_t n = g.size();
    const auto N = static_cast<Eigen::Index>(n);
    const Eigen::MatrixXd& lambda = log_kernel.matrix();
    k_.resize(N, N);
    rho_weights_.resize(N);
    std::vector<double> shift(n), mu_w(n);
    for (std::size_t i = 0; i < n; ++i) {
        shift[i] = std::log1p(std::abs(g.node(i)));
        mu_w[i] = g.weight(i) * rho[i];
        rho_weights_(static_cast<Eigen::Index>(i)) = mu_w[i];
    }
    parallel_for(n, [&](std::size_t j) {
        const auto J = static_cast<Eigen::Index>(j);
        const double wj = g.weight(j);
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto I = static_cast<Eigen::Index>(i);
            const double v = lambda(I, J) / wj - shift[i];
            k_(I, J) = v;
            c += mu_w[i] * v;
        }
        for (std::size_t i = 0; i < n; ++i) k_(static_cast<Eigen::Index>(i), J) -= c;
    });
}

FredholmKernel::FredholmKernel(const EquilibriumMeasure& mu) : FredholmKernel(mu.rho, *mu.kernel) {}

Eigen::VectorXd FredholmKernel::apply(const GridFunction& v) const
{
    if (!(v.grid() == grid())) throw std::invalid_argument("function lives on another grid");
    const Eigen::Map<const Eigen::VectorXd> vv(v.values().data(), static_cast<Eigen::Index>(v.size()));
    return k_ * rho_weights_.cwiseProduct(vv);
}

std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>> FredholmKernel::factorization(double P) const
{
    std::lock_guard<std::mutex> lock(mutex_);
    if (!lu_ || cached_P_ != P) {
        Eigen::MatrixXd A = -2.0 * P * k_ * rho_weights_.asDiagonal();
        A.diagonal().array() += 1.0;
        auto lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(A);
        const double rc = lu->rcond();
        if (!(rc > 1e-14)) {
            std::ostringstream msg;
            msg << "Fredholm system is numerically singular (rcond " << rc << ")";
            throw NumericalError(msg.str(), rc);
        }
        lu_ = std::move(lu);
        cached_P_ = P;
    }
    return lu_;
}

GridFunction t_kernel_apply(const GridFunction& v, const FredholmKernel& K, double P)
{
    const Eigen::VectorXd kv = K.apply(v);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] - 2.0 * P * kv(static_cast<Eigen::Index>(i));
    return GridFunction(v.grid(), std::move(out));
}

GridFunction t_inverse(const GridFunction& v, const FredholmKernel& K, double P)
{
    if (!(v.grid() == K.grid())) throw std::invalid_argument("function lives on another grid");
    if (P == 0.0) return v;
    const Eigen::Map<const Eigen::VectorXd> vv(v.values().data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::VectorXd w = K.factorization(P)->solve(vv);
    return GridFunction(v.grid(), std::vector<double>(w.data(), w.data() + w.size()));
}

namespace {

const QuadratureRule& s_rule()
{
    static const QuadratureRule rule = gauss_legendre(16, 0.0, 1.0);
    return rule;
}

double remainder_weight(double exponent_scale, double offset)
{
    // int_0^1 (1 - s) exp(s * exponent_scale + offset) ds
    const QuadratureRule& r = s_rule();
    double s = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k)
        s += r.weights[k] * (1.0 - r.nodes[k]) * std::exp(r.nodes[k] * exponent_scale + offset);
    return s;
}

struct StepResult {
    GridFunction u;
    int iterations;
    double contraction;
};

StepResult fixed_point_step(const GridFunction& phi, double dt, const EquilibriumMeasure& mu0,
                            const FredholmKernel& K, double P, const FixedPointOptions& opt)
{
    const std::size_t n = phi.size();
    const double phibar = mu0.mean(phi);
    const GridFunction base = phi.map([phibar](double v) { return -v + phibar; });
    GridFunction u = opt.start == FlowRule::corrected ? t_inverse(base, K, P) : base;
    if (dt == 0.0) return {u, 1, 0.0};

    double previous_change = -1.0, contraction = 0.0;
    int growth = 0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const Eigen::VectorXd Ku = K.apply(u);
        std::vector<double> xm(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!(1.0 + dt * u[i] > 0.0)) throw NumericalError("1 + dt u lost positivity; use a smaller step");
            xm[i] = xm_log1p(dt * u[i]);
        }
        const double mean_xm = mu0.mean(GridFunction(mu0.grid, xm)); // <dt u - log(1 + dt u)>
        const double ell = -mean_xm / dt;
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double drift = base[i] + 2.0 * P * Ku(static_cast<Eigen::Index>(i));
            const double h = drift + ell;
            const double weight = opt.reading == RemainderReading::proof ? remainder_weight(dt * h, 0.0)
                                                                          : remainder_weight(dt * drift, ell);
            next[i] = base[i] + dt * (h * h * weight - mean_xm / (dt * dt));
        }
        GridFunction u_new = t_inverse(GridFunction(mu0.grid, std::move(next)), K, P);
        const double change = (u_new - u).sup_norm();
        u = std::move(u_new);
        if (previous_change > 0.0 && it > 3) contraction = std::max(contraction, change / previous_change);
        growth = (previous_change > 0.0 && change > previous_change) ? growth + 1 : 0;
        if (growth >= 5) throw NumericalError("fixed-point iteration diverges; use a smaller step", change);
        if (change < opt.tol) return {u, it, contraction};
        previous_change = change;
    }
    throw NumericalError("fixed-point iteration did not converge", previous_change);
}

} // namespace

double lambda_update(const GridFunction& u, const GridFunction& phi, double t0, double t,
                     const EquilibriumMeasure& mu0, double P)
{
    const double dt = t - t0;
    if (dt == 0.0) return mu0.lambda;
    const std::size_t n = u.size();
    std::vector<double> ur(n), logs(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(1.0 + dt * u[i] > 0.0)) throw std::domain_error("log(1 + dt u) undefined");
        ur[i] = u[i] * mu0.rho[i];
        logs[i] = -xm_log1p(dt * u[i]);
    }
    const std::vector<double> log_int = mu0.kernel->apply(ur); // int log|x - y| u(y) rho(y) dy
    const double double_integral = mu0.mean(GridFunction(mu0.grid, log_int));
    return mu0.lambda + dt * mu0.mean(phi) - 2.0 * P * dt * double_integral + mu0.mean(GridFunction(mu0.grid, logs));
}

FlowState fixed_point_u(const GridFunction& phi, double t0, double t, const EquilibriumMeasure& mu0, double P,
                        const FixedPointOptions& options)
{
    if (!(phi.grid() == mu0.grid)) throw std::invalid_argument("perturbation lives on another grid");
    const double span = t - t0;
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(span) / options.max_step - 1e-9)));
    EquilibriumMeasure current = mu0;
    int iterations = 0;
    double contraction = 0.0;
    GridFunction u(mu0.grid);
    for (int k = 0; k < pieces; ++k) {
        const double a = t0 + span * k / pieces;
        const double b = (k + 1 == pieces) ? t : t0 + span * (k + 1) / pieces;
        const FredholmKernel K(current);
        StepResult step = fixed_point_step(phi, b - a, current, K, P, options);
        iterations += step.iterations;
        contraction = std::max(contraction, step.contraction);
        if (b == a) {
            u = step.u;
            break;
        }
        std::vector<double> rho(phi.size());
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = (1.0 + (b - a) * step.u[i]) * current.rho[i];
        GridFunction rho_b(mu0.grid, std::move(rho));
        rho_b = rho_b * (1.0 / integrate(rho_b));
        const double lambda_b = lambda_update(step.u, phi, a, b, current, P);
        EquilibriumMeasure next = measure_from_density(mu0.potential.at(b), P, rho_b, current.kernel);
        next.lambda = lambda_b;
        current = std::move(next);
        if (pieces == 1) u = step.u;
    }
    if (pieces > 1) {
        std::vector<double> rel(phi.size());
        for (std::size_t i = 0; i < rel.size(); ++i) rel[i] = (current.rho[i] / mu0.rho[i] - 1.0) / span;
        u = GridFunction(mu0.grid, std::move(rel));
    }
    if (span == 0.0) current = mu0;
    current.iterations = iterations;
    return FlowState{t, std::move(current), std::move(u), iterations, contraction};
}

EquilibriumMeasure flow_density(const GridFunction& phi, const EquilibriumMeasure& mu, double t_end, int steps,
                                const FlowOptions& options)
{
    if (steps < 16) throw std::invalid_argument("flow_density needs at least 16 steps");
    if (!(phi.grid() == mu.grid)) throw std::invalid_argument("perturbation lives on another grid");
    if (t_end == 0.0) return mu;
    const Grid& g = mu.grid;
    const std::size_t n = g.size();
    const double P = mu.P;

    const auto generator = [&](const GridFunction& rho) {
        const double phibar = integrate(phi * rho) / integrate(rho);
        GridFunction rate = phi.map([phibar](double v) { return -v + phibar; });
        if (options.rule == FlowRule::corrected) rate = t_inverse(rate, FredholmKernel(rho, *mu.kernel), P);
        return rate * rho;
    };

    GridFunction rho = mu.rho;
    const double dt = t_end / steps;
    for (int s = 0; s < steps; ++s) {
        const GridFunction k1 = generator(rho);
        const GridFunction k2 = generator(rho + k1 * (0.5 * dt));
        const GridFunction k3 = generator(rho + k2 * (0.5 * dt));
        const GridFunction k4 = generator(rho + k3 * dt);
        GridFunction next = rho + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        for (std::size_t i = 0; i < n; ++i)
            if (!(next[i] > 0.0)) throw NumericalError("flow produced a non-positive density");
        const double drift = std::abs(integrate(next) - integrate(rho));
        if (drift > options.mass_drift_limit) throw NumericalError("flow step does not conserve mass", drift);
        rho = next * (1.0 / integrate(next));
    }
    EquilibriumMeasure out = measure_from_density(mu.potential.at(mu.potential.t + t_end), P, rho, mu.kernel);
    out.iterations = steps;
    return out;
}

} // namespace loggas
