#pragma once

#include "loggas/grid.hpp"

#include <Eigen/Dense>
#include <mutex>
#include <vector>

namespace loggas {

// H[f](x) = p.v. int f(y) / (y - x) dy. With this sign H[density] ~ -1/x in
// the tails and H^2 = -pi^2.
//
// Alternating-point rule: H[f](x_i) = 2h sum_{j - i odd} f_j / (x_j - x_i).
GridFunction hilbert(const GridFunction& f);

// Product-integration weights for the logarithmic kernel on a grid:
// int log|x_i - y| f(y) dy ~ sum_j weight(i, j) f_j. The kernel is integrated
// exactly against the piecewise-linear interpolant of f, plus a second-order
// end correction -(h^2/12) times the same rule applied to f''.
class LogKernel {
public:
    explicit LogKernel(const Grid& grid);

    const Grid& grid() const { return grid_; }

    // int log|x_i - y| f(y) dy for every node.
    std::vector<double> apply(std::span<const double> f) const;

    // Dense weight matrix of apply(), built on first use.
    const Eigen::MatrixXd& matrix() const;

private:
    std::vector<double> apply_linear(std::span<const double> f) const;
    double linear_weight(std::size_t i, std::size_t j) const;

    Eigen::MatrixXd build_matrix() const;

    Grid grid_;
    mutable std::once_flag matrix_once_;
    mutable Eigen::MatrixXd matrix_;
    std::vector<double> right_; // right_[d + M - 1]: cell to the right of node j, d = j - i
    std::vector<double> left_;  // left_[d + M - 1]: cell to the left of node j
};

// U^f(x) = -int log|x - y| f(y) dy; its derivative is H[f].
GridFunction log_potential(const GridFunction& f);
GridFunction log_potential(const GridFunction& f, const LogKernel& kernel);

} // namespace loggas
