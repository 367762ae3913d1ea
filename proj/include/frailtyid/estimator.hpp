#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frailtyid/data.hpp"
#include "frailtyid/hazard.hpp"
#include "frailtyid/lifetable.hpp"

namespace fid {

struct FitConfig {
    int max_outer_iterations = 50;
    double rel_tol = 1e-4;          // relative pseudo-log-likelihood change
    double theta_init = 0.01;
    double theta_lower = 0.0;
    double theta_upper = 20.0;
    int optimizer_budget = 200;     // objective evaluations per inner solve
    int threads = 1;
    const LifeTable* lifetable = nullptr;  // delayed entry: h_013 below c_L
};

struct FitResult {
    ParameterVector params;
    HazardTriple hazards;
    std::vector<double> loglik_trace;  // one entry per outer iteration
    bool converged = false;
    int n_outer = 0;
    std::vector<std::string> warnings;

    void write_report(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<double>* se = nullptr) const;
};

struct SubsampleConfig {
    std::size_t n_tilde = 0;
    std::uint64_t seed = 0;
};

// Names for the flattened parameter vector: g12_1.., g13_1.., g23_1.., theta.
std::vector<std::string> parameter_names(const Dataset& data);

// Step 1: three transition-specific Cox fits (risk-set corrected under
// delayed entry) plus theta near independence. Cox failures fall back to
// zero coefficients with a warning.
ParameterVector init_coefficients(const Dataset& data, const StudyDesign& design,
                                  const FitConfig& config,
                                  std::vector<std::string>* warnings = nullptr);

// Alternates Breslow updates of the three baseline hazards with bounded
// quasi-Newton maximization of the pseudo-log-likelihood at fixed hazards,
// until the relative change in the pseudo-log-likelihood drops below
// rel_tol.
FitResult fit(const Dataset& data, const StudyDesign& design, const FitConfig& config);

// As fit(), with explicit per-subject weights (composing with the record
// weights) and optional warm starts; used by the bootstrap.
FitResult fit_weighted(const Dataset& data, const StudyDesign& design, const FitConfig& config,
                       std::span<const double> weights,
                       const ParameterVector* warm_params = nullptr,
                       const HazardTriple* warm_hazards = nullptr);

// Keeps every event-bearing subject, draws n_tilde of the n0 censored ones
// without replacement and gives them weight n0/n_tilde.
Dataset make_subsample(const Dataset& data, const SubsampleConfig& cfg);

FitResult fit_with_subsample(const Dataset& data, const StudyDesign& design,
                             const FitConfig& config, const SubsampleConfig& subsample);

}  // namespace fid
