#pragma once

#include "loggas/equilibrium.hpp"

#include <Eigen/Dense>
#include <memory>
#include <mutex>

namespace loggas {

// K[v](x) = int k(x, y) v(y) rho(y) dy with
// k(x, y) = log(|x-y| / (1+|x|)) - int log(|z-y| / (1+|z|)) rho(z) dz.
// The log part uses the product-integration weights of LogKernel, so the
// diagonal is finite.
class FredholmKernel {
public:
    FredholmKernel(const GridFunction& rho, const LogKernel& log_kernel);
    explicit FredholmKernel(const EquilibriumMeasure& mu);

    const Grid& grid() const { return rho_.grid(); }
    const Eigen::MatrixXd& k() const { return k_; }
    const Eigen::VectorXd& rho_weights() const { return rho_weights_; } // w_j rho_j

    // int k(x_i, y) v(y) rho(y) dy.
    Eigen::VectorXd apply(const GridFunction& v) const;

    // Factorization of I - 2P K, cached for the last P used.
    std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>> factorization(double P) const;

private:
    GridFunction rho_;
    Eigen::MatrixXd k_;
    Eigen::VectorXd rho_weights_;
    mutable std::mutex mutex_;
    mutable double cached_P_ = -1.0;
    mutable std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

// T[v] = v - 2P K[v].
GridFunction t_kernel_apply(const GridFunction& v, const FredholmKernel& K, double P);

// Solves (I - 2P K) w = v.
GridFunction t_inverse(const GridFunction& v, const FredholmKernel& K, double P);

// Two readings of the exponent inside the Taylor remainder of the fixed-point map:
// proof:   int_0^1 (1-s) exp(s dt h) ds with h = -phi + <phi> + K u + l
// printed: int_0^1 (1-s) exp(s dt (-phi + <phi> + K u) + l) ds
// where l = <log(1 + dt u) - dt u> / dt.
enum class RemainderReading { proof, printed };

// Start of the Picard iteration at t = t0:
// corrected: T^{-1}[-phi + <phi>] (the t -> t0 limit of the relative increment)
// printed:   -phi + <phi>
enum class FlowRule { corrected, printed };

struct FlowState {
    double t = 0.0;
    EquilibriumMeasure mu; // equilibrium at V + t phi
    GridFunction u;        // rho_t = (1 + (t - t0) u) rho_t0
    int iterations = 0;
    double contraction = 0.0; // largest ratio of successive sup-changes after iteration 3
};

struct FixedPointOptions {
    RemainderReading reading = RemainderReading::proof;
    FlowRule start = FlowRule::corrected;
    double max_step = 0.05; // longer intervals are chained
    double tol = 1e-10;
    int max_iter = 200;
};

// u_t as the fixed point of T^{-1} o V_t, V_t[u] = -phi + <phi> + dt U_t[u].
// phi must be the perturbation of mu0.potential sampled on the grid; the
// returned measure carries mu0.potential.at(t).
FlowState fixed_point_u(const GridFunction& phi, double t0, double t, const EquilibriumMeasure& mu0, double P,
                        const FixedPointOptions& options = {});

// lambda_t = lambda_t0 + dt <phi> - 2P dt iint log|x-y| u(y) dmu0 dmu0 + <log(1 + dt u) - dt u>.
double lambda_update(const GridFunction& u, const GridFunction& phi, double t0, double t,
                     const EquilibriumMeasure& mu0, double P);

struct FlowOptions {
    FlowRule rule = FlowRule::corrected;
    double mass_drift_limit = 1e-10;
};

// Classical RK4 for d/dt rho = T_rho^{-1}[-phi + <phi>_rho] rho (corrected) or
// (-phi + <phi>_rho) rho (printed), from mu (at potential parameter t0 =
// mu.potential.t) over t_end units.
EquilibriumMeasure flow_density(const GridFunction& phi, const EquilibriumMeasure& mu, double t_end, int steps,
                                const FlowOptions& options = {});

} // namespace loggas
