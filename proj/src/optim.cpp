#include "frailtyid/optim.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace fid {

namespace {

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

OptimResult maximize_box(const std::function<double(const Eigen::VectorXd&)>& f,
                         const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                         const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper, const OptimOptions& opts,
                         int grad_feval_cost) {
    const Eigen::Index d = x0.size();
    OptimResult res;
    res.x = project(x0, lower, upper);
    res.f = f(res.x);
    res.n_fevals = 1;
    if (!std::isfinite(res.f)) {
        res.message = "objective not finite at start";
        return res;
    }

    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> mem;  // (s, y) pairs
    Eigen::VectorXd g = grad(res.x);
    res.n_fevals += grad_feval_cost;

    while (res.n_fevals < opts.max_fevals) {
        // convergence on the projected gradient of the maximization problem
        Eigen::VectorXd pg = project(res.x + g, lower, upper) - res.x;
        if (pg.cwiseAbs().maxCoeff() <= opts.grad_tol * (std::abs(res.f) + 1.0)) {
            res.converged = true;
            res.message = "projected gradient below tolerance";
            return res;
        }

        // two-loop recursion on the negated problem (minimize -f)
        Eigen::VectorXd q = -g;
        std::vector<double> alpha(mem.size());
        for (std::size_t k = mem.size(); k-- > 0;) {
            const auto& [s, y] = mem[k];
            const double rho = 1.0 / y.dot(s);
            alpha[k] = rho * s.dot(q);
            q -= alpha[k] * y;
        }
        if (!mem.empty()) {
            const auto& [s, y] = mem.back();
            q *= s.dot(y) / y.dot(y);
        }
        for (std::size_t k = 0; k < mem.size(); ++k) {
            const auto& [s, y] = mem[k];
            const double rho = 1.0 / y.dot(s);
            const double beta = rho * y.dot(q);
            q += (alpha[k] - beta) * s;
        }
        Eigen::VectorXd dir = -q;  // ascent direction for f

        // keep the direction from pushing against active bounds
        for (Eigen::Index i = 0; i < d; ++i) {
            if ((res.x(i) <= lower(i) && dir(i) < 0.0) || (res.x(i) >= upper(i) && dir(i) > 0.0)) {
                dir(i) = 0.0;
            }
        }
        if (dir.dot(g) <= 0.0) dir = pg;  // fall back to projected steepest ascent

        // backtracking along the projection arc
        double step = 1.0;
        bool accepted = false;
        Eigen::VectorXd x_new;
        double f_new = 0.0;
        while (res.n_fevals < opts.max_fevals) {
            x_new = project(res.x + step * dir, lower, upper);
            Eigen::VectorXd delta = x_new - res.x;
            if (delta.cwiseAbs().maxCoeff() < opts.step_tol) break;
            f_new = f(x_new);
            ++res.n_fevals;
            if (std::isfinite(f_new) && f_new >= res.f + 1e-4 * g.dot(delta)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.converged = true;
            res.message = "no ascent step found";
            return res;
        }

        if (res.n_fevals + grad_feval_cost > opts.max_fevals) {
            res.x = x_new;
            res.f = f_new;
            res.message = "evaluation budget exhausted";
            return res;
        }
        Eigen::VectorXd g_new = grad(x_new);
        res.n_fevals += grad_feval_cost;

        // curvature pairs for minimizing -f: y = (-g_new) - (-g)
        Eigen::VectorXd s = x_new - res.x;
        Eigen::VectorXd y = g - g_new;
        if (s.dot(y) > 1e-10 * s.norm() * y.norm()) {
            mem.emplace_back(std::move(s), std::move(y));
            if (static_cast<int>(mem.size()) > opts.history) mem.pop_front();
        }
        res.x = std::move(x_new);
        res.f = f_new;
        g = std::move(g_new);
    }
    res.message = "evaluation budget exhausted";
    return res;
}

}  // namespace fid
