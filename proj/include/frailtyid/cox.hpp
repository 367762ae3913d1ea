#pragma once

#include <Eigen/Dense>
#include <span>

#include "frailtyid/data.hpp"
#include "frailtyid/frailty.hpp"
#include "frailtyid/hazard.hpp"

namespace fid {

enum class CoxExtra { None, ScaledV, TruncatedSplineV };
enum class CoxTruncation { None, EntryAge, EntryAndDiagnosis };

// One transition-specific Cox partial-likelihood model.
//   EntryAge:          risk sets I(R_j <= t <= exit_j), incident events only
//   EntryAndDiagnosis: for 2->3, risk sets I(max(V_j, R_j) <= t <= W_j)
// Extra covariates (2->3 only): the standardized age at diagnosis, or a
// linear truncated spline in it with knots at its quartiles.
struct CoxSpec {
    Transition transition = Transition::Illness;
    CoxExtra extra = CoxExtra::None;
    CoxTruncation truncation = CoxTruncation::None;
};

struct CoxFit {
    Eigen::VectorXd beta;
    Eigen::MatrixXd info;      // observed information at beta
    StepHazard baseline;       // Breslow baseline with the spec's risk sets
    double log_partial_lik = 0.0;
    int iterations = 0;
    // standardization constants for the extra covariates, diseased sample
    double v_mean = 0.0;
    double v_sd = 1.0;
    std::vector<double> v_knots;  // raw-V quartiles for the spline
};

// Internal per-transition encoding (exposed for tests).
struct CoxData {
    std::vector<double> entry;   // -inf when untruncated
    std::vector<double> exit;
    std::vector<bool> event;
    std::vector<double> weight;
    Eigen::MatrixXd design;
    double v_mean = 0.0, v_sd = 1.0;
    std::vector<double> v_knots;
};

CoxData encode_cox(const Dataset& data, const CoxSpec& spec);

// Analytic score and observed information of the log partial likelihood.
void cox_score_and_info(const CoxData& cd, const Eigen::VectorXd& beta, Eigen::VectorXd& score,
                        Eigen::MatrixXd& info, double& loglik);

// Newton-Raphson with step halving; convergence at max|score| < 1e-8.
// Throws on non-convergence, diverging coefficients (monotone likelihood)
// or a singular information matrix.
CoxFit cox_fit(const Dataset& data, const CoxSpec& spec);

// Coefficient table CSV: rows term,estimate,se.
void write_cox_csv(const std::string& path, const CoxFit& fit,
                   const std::vector<std::string>& term_names);

}  // namespace fid
