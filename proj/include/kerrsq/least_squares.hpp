#pragma once

#include <Eigen/Dense>

#include <functional>

namespace kerrsq {

struct LeastSquaresProblem {
    int residual_count = 0;
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)> residuals;
    // Optional. Forward differences are used when empty.
    std::function<void(const Eigen::VectorXd& x, Eigen::MatrixXd& jac)> jacobian;
};

struct LeastSquaresOptions {
    double tolerance = 1e-14;
    int max_evaluations = 2000;
};

struct LeastSquaresResult {
    Eigen::VectorXd x;
    Eigen::MatrixXd covariance;  // s^2 (J^T J)^{-1}, s^2 = RSS / (m - n)
    double residual_norm = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) minimization of ||r(x)||^2.
/// Parameters should be scaled to order one by the caller.
[[nodiscard]] LeastSquaresResult solve_least_squares(const LeastSquaresProblem& problem,
                                                     const Eigen::VectorXd& x0,
                                                     const LeastSquaresOptions& options = {});

}  // namespace kerrsq
