#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "frailtyid/data.hpp"
#include "frailtyid/hazard.hpp"

namespace fid {

// Observed-data pseudo-log-likelihood. Baseline hazards enter through their
// Breslow jumps at the observed event times (profile convention); the A_jk
// integrals use the piecewise-constant scheme of AGrid.
//
// A subject's plain contribution is
//   d1 log{dH_012(V) a*_12(V|Z)} + d2 log{dH_013(V) a*_13(V|Z)}
//   + d3 log{dH_023(W) a*_23(W|Z)} + log{(-1)^d. phi^(d.)(s)},
//   s = A_12(V|Z) + A_13(V|Z) + d1 A_23(W|Z) - d1 A_23(V|Z).
//
// Under delayed entry, incident subjects divide by phi(A_12(R)+A_13(R)) and
// prevalent subjects contribute the truncated disease-to-death factor only.

double subject_loglik_plain(const SubjectRecord& rec, const ParameterVector& params,
                            const HazardTriple& hazards, const CovariateMap& map = {});

double subject_loglik_delayed(const SubjectRecord& rec, const ParameterVector& params,
                              const HazardTriple& hazards, const StudyDesign& design,
                              const CovariateMap& map = {});

// Weighted sum of per-subject contributions; weights defaults to the record
// weights (which already carry any subsample factor; bootstrap weights
// compose multiplicatively). Returns -inf when any contribution is
// non-finite. Deterministic: per-subject terms are reduced in index order
// regardless of the thread count.
double total_loglik(const Dataset& data, const ParameterVector& params,
                    const HazardTriple& hazards, const StudyDesign& design,
                    std::span<const double> weights = {}, int threads = 1);

// Central finite differences with step h_i = max(1e-6, 1e-7 |x_i|); probes
// are clipped to [lower, upper] coordinate-wise (theta's lower bound 0).
// Throws when f is non-finite at a probe, identifying the coordinate.
Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                                 const Eigen::VectorXd& upper);

}  // namespace fid
