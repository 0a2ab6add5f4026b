#include "kerrsq/least_squares.hpp"

#include "kerrsq/error.hpp"

#include <unsupported/Eigen/NonLinearOptimization>

#include <cmath>

namespace kerrsq {

namespace {

struct Functor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const LeastSquaresProblem* problem;
    int n_inputs;

    [[nodiscard]] int values() const { return problem->residual_count; }
    [[nodiscard]] int inputs() const { return n_inputs; }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
        problem->residuals(x, r);
        return 0;
    }

    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
        if (problem->jacobian) {
            problem->jacobian(x, jac);
            return 0;
        }
        forward_difference(x, jac);
        return 0;
    }

    void forward_difference(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
        Eigen::VectorXd r0(values());
        problem->residuals(x, r0);
        Eigen::VectorXd xh = x;
        Eigen::VectorXd rh(values());
        jac.resize(values(), x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double h = 1e-7 * std::max(std::abs(x(j)), 1e-3);
            xh(j) = x(j) + h;
            problem->residuals(xh, rh);
            jac.col(j) = (rh - r0) / h;
            xh(j) = x(j);
        }
    }
};

}  // namespace

LeastSquaresResult solve_least_squares(const LeastSquaresProblem& problem,
                                       const Eigen::VectorXd& x0,
                                       const LeastSquaresOptions& options) {
    const auto n = static_cast<int>(x0.size());
    if (problem.residual_count < n) {
        throw Error(ErrorCode::RankDeficient, "fewer residuals than parameters");
    }
    Functor f{&problem, n};
    Eigen::LevenbergMarquardt<Functor> lm(f);
    lm.parameters.ftol = options.tolerance;
    lm.parameters.xtol = options.tolerance;
    lm.parameters.maxfev = options.max_evaluations;

    LeastSquaresResult res;
    res.x = x0;
    const auto status = lm.minimize(res.x);
    res.evaluations = static_cast<int>(lm.nfev);
    res.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::FtolTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::XtolTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::GtolTooSmall;

    Eigen::VectorXd r(problem.residual_count);
    problem.residuals(res.x, r);
    res.residual_norm = r.norm();

    Eigen::MatrixXd jac;
    f.df(res.x, jac);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const int dof = problem.residual_count - n;
    const double s2 = dof > 0 ? r.squaredNorm() / dof : 0.0;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jtj);
    res.covariance = s2 * cod.pseudoInverse();
    return res;
}

}  // namespace kerrsq
