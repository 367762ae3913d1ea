#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace fid {

// Bound-constrained quasi-Newton maximizer: L-BFGS directions with gradient
// projection onto the box and Armijo backtracking along the projection arc.
// Gradients are supplied by the caller (finite differences in this project).

struct OptimOptions {
    int max_fevals = 200;      // budget counted in objective evaluations
    int history = 6;           // L-BFGS memory
    double grad_tol = 1e-5;    // projected-gradient max-norm, scaled by |f|+1
    double step_tol = 1e-12;
};

struct OptimResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int n_fevals = 0;
    bool converged = false;
    std::string message;
};

OptimResult maximize_box(const std::function<double(const Eigen::VectorXd&)>& f,
                         const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                         const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper, const OptimOptions& opts,
                         int grad_feval_cost);

}  // namespace fid
