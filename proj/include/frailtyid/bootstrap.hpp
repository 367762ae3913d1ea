#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "frailtyid/estimator.hpp"
#include "frailtyid/rng.hpp"

namespace fid {

struct BootstrapConfig {
    int n_reps = 100;
    std::uint64_t seed = 0;
    bool report_se = true;
    bool report_mad = true;
    int threads = 1;
    std::vector<double> hazard_times;
    // Test hook: replaces the standard-exponential weight draw.
    std::function<double(Rng&)> weight_draw;
};

struct BootstrapResult {
    std::vector<std::string> param_names;
    Eigen::VectorXd se;               // sample SD over replicates
    Eigen::VectorXd mad;              // median absolute deviation, scaled 1.4826
    Eigen::MatrixXd draws;            // n_ok x dim replicate estimates
    Eigen::VectorXd hazard_se12, hazard_se13, hazard_se23;  // pointwise, at hazard_times
    Eigen::MatrixXd hazard_draws12, hazard_draws13, hazard_draws23;
    int n_failed = 0;
    std::vector<std::string> failures;

    void write_draws_csv(const std::string& path) const;  // replicate,param,value
};

// Weighted bootstrap around a converged base fit: per replicate, i.i.d.
// standard-exponential subject weights (composing multiplicatively with any
// subsample weights), warm-started refit, and spread summaries of each
// parameter and of each baseline cumulative hazard at the requested times.
// Throws when more than 20% of replicates fail.
BootstrapResult bootstrap_fit(const Dataset& data, const StudyDesign& design,
                              const FitConfig& fit_config, const BootstrapConfig& boot_config,
                              const FitResult& base);

}  // namespace fid
