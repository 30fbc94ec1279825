#pragma once

#include "loggas/equilibrium.hpp"

#include <Eigen/Dense>
#include <memory>

namespace loggas {

struct CenteredFunction {
    GridFunction f;
    bool mean_removed = false;
};

// Function of two variables on the tensor grid; rows index x, columns y.
class BivariateGridFunction {
public:
    BivariateGridFunction(Grid grid, Eigen::MatrixXd values);

    const Grid& grid() const { return grid_; }
    const Eigen::MatrixXd& values() const { return values_; }
    double operator()(std::size_t i, std::size_t j) const
    {
        return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    // Tensor four-point interpolation.
    double at(double x, double y) const;
    GridFunction column(std::size_t j) const;

private:
    Grid grid_;
    Eigen::MatrixXd values_;
};

// f - int f dmu. Already centered input is returned unchanged.
CenteredFunction center(const GridFunction& f, const EquilibriumMeasure& mu);
CenteredFunction center(const CenteredFunction& f, const EquilibriumMeasure& mu);

// (f(x) - f(y)) / (x - y), Taylor form near the diagonal.
BivariateGridFunction ncd(const GridFunction& f);

// d/dy of ncd(f): (f(x) - f(y) - (x - y) f'(y)) / (x - y)^2.
BivariateGridFunction ncd_partial2(const GridFunction& f);

// g(x) = F(x, x).
GridFunction theta_insert(const BivariateGridFunction& f, int slot = 2);

enum class Orientation { outward, from_left, from_right };

// w(x) = (1/rho(x)) int_x^{sgn(x) inf} f rho, so that -(w rho)'/rho = f.
// from_left / from_right integrate from a single end for every x.
GridFunction a_inverse(const CenteredFunction& f, const EquilibriumMeasure& mu,
                       Orientation orientation = Orientation::outward);

// psi' + (log rho)' psi + 2P (H[psi rho] - <H[psi rho]>).
GridFunction xi_apply(const GridFunction& psi, const EquilibriumMeasure& mu);

// Nystrom factorization of psi - a_inverse(2P center(H[rho psi])).
class MasterOperator {
public:
    explicit MasterOperator(const EquilibriumMeasure& mu);

    // Solves the system for the right-hand side f; returns psi with xi_apply(psi) = center(f).
    GridFunction solve(const GridFunction& f) const;
    // Column-wise version: every column of F is a right-hand side in x.
    Eigen::MatrixXd solve_columns(const Eigen::MatrixXd& F) const;
    double reciprocal_condition() const { return rcond_; }

private:
    Eigen::VectorXd right_hand_side(const GridFunction& f) const;

    GridFunction rho_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double rcond_ = 0.0;
};

// Factorization cached on the measure (built once, shared by copies).
std::shared_ptr<const MasterOperator> master_operator(const EquilibriumMeasure& mu);

GridFunction xi_inverse(const GridFunction& f, const EquilibriumMeasure& mu);
BivariateGridFunction xi1_inverse(const BivariateGridFunction& f, const EquilibriumMeasure& mu);

struct D1Terms {
    double derivative_term; // <chi'>
    double insertion_term;  // <Theta xi1_inverse(ncd_partial2(chi))>
    double value;           // P (derivative_term + insertion_term)
};

D1Terms d1_terms(const GridFunction& psi, const EquilibriumMeasure& mu);
double d1_linear_statistic(const GridFunction& psi, const EquilibriumMeasure& mu);

} // namespace loggas
