#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>

#include "frailtyid/hazard.hpp"

namespace fid {

// External population hazard for death, used to pin down h_013 below the
// minimum recruitment age. The grid has kappa equally spaced ages in
// (0, c_L]; inputs on other grids are linearly interpolated.
struct LifeTable {
    Eigen::ArrayXd grid;
    Eigen::ArrayXd marginal_hazard;

    double c_L() const { return grid.size() ? grid(grid.size() - 1) : 0.0; }
    int kappa() const { return int(grid.size()); }

    // CSV with header age,hazard.
    static LifeTable from_csv(const std::string& path, double c_L, int kappa = 200);
    // Tabulates fn(age) on the grid.
    static LifeTable from_function(const std::function<double(double)>& fn, double c_L,
                                   int kappa = 200);
    void write_csv(const std::string& path) const;
};

// Successive calibration of the baseline hazard on [0, c_L):
//   h_013(t) = h_13(t) * sum_i w_i exp{-H(t-) e_i} / sum_i w_i e_i exp{-H(t-) e_i},
//   e_i = exp(gamma13' z_i), H accumulated as (c_L/kappa) * running sum.
// Returns the cumulative segment as a step function with jumps at the grid
// ages. Z13 holds the cohort's covariates for the 1->3 transition.
StepHazard calibrate_h013(const LifeTable& table, const Eigen::VectorXd& gamma13,
                          const Eigen::MatrixXd& Z13, std::span<const double> weights = {});

}  // namespace fid
