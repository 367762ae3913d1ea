#include "frailtyid/estimator.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "frailtyid/cox.hpp"
#include "frailtyid/csv.hpp"
#include "frailtyid/likelihood.hpp"
#include "frailtyid/optim.hpp"
#include "frailtyid/rng.hpp"

namespace fid {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<std::string> parameter_names(const Dataset& data) {
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < data.Z12().cols(); ++j) {
        names.push_back("g12_" + std::to_string(j + 1));
    }
    for (Eigen::Index j = 0; j < data.Z13().cols(); ++j) {
        names.push_back("g13_" + std::to_string(j + 1));
    }
    for (Eigen::Index j = 0; j < data.Z23().cols(); ++j) {
        names.push_back("g23_" + std::to_string(j + 1));
    }
    names.push_back("theta");
    return names;
}

ParameterVector init_coefficients(const Dataset& data, const StudyDesign& design,
                                  const FitConfig& config, std::vector<std::string>* warnings) {
    ParameterVector p;
    p.theta = config.theta_init;
    auto run = [&](Transition tr, Eigen::Index dim) {
        CoxSpec spec;
        spec.transition = tr;
        if (tr == Transition::DeathAfterIllness) {
            spec.truncation = CoxTruncation::EntryAndDiagnosis;
        } else {
            spec.truncation = design.delayed_entry ? CoxTruncation::EntryAge : CoxTruncation::None;
        }
        try {
            return cox_fit(data, spec).beta;
        } catch (const std::exception& e) {
            if (warnings != nullptr) {
                warnings->push_back(std::string("init: Cox fit for transition ") +
                                    transition_name(tr) + " failed (" + e.what() +
                                    "), starting from zero coefficients");
            }
            return Eigen::VectorXd(Eigen::VectorXd::Zero(dim));
        }
    };
    p.gamma12 = run(Transition::Illness, data.Z12().cols());
    p.gamma13 = run(Transition::DeathHealthy, data.Z13().cols());
    p.gamma23 = run(Transition::DeathAfterIllness, data.Z23().cols());
    return p;
}

FitResult fit_weighted(const Dataset& data, const StudyDesign& design, const FitConfig& config,
                       std::span<const double> weights, const ParameterVector* warm_params,
                       const HazardTriple* warm_hazards) {
    data.validate(design);
    if (design.delayed_entry && !data.has_entry()) {
        throw std::invalid_argument("fit: delayed entry requires recruitment ages");
    }
    if (config.theta_init < config.theta_lower || config.theta_init > config.theta_upper) {
        throw std::invalid_argument("fit: theta_init outside bounds");
    }

    FitResult res;
    // Step 1
    if (warm_params != nullptr) {
        res.params = *warm_params;
    } else {
        res.params = init_coefficients(data, design, config, &res.warnings);
        res.params.theta =
            std::min(std::max(config.theta_init, config.theta_lower), config.theta_upper);
    }
    if (warm_hazards != nullptr) res.hazards = *warm_hazards;

    // effective weights: record weights composed with the override
    std::vector<double> w(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        w[i] = data.records()[i].weight * (weights.empty() ? 1.0 : weights[i]);
    }

    const Eigen::Index p12 = data.Z12().cols();
    const Eigen::Index p13 = data.Z13().cols();
    const Eigen::Index p23 = data.Z23().cols();
    const Eigen::Index dim = p12 + p13 + p23 + 1;

    Eigen::VectorXd lower = Eigen::VectorXd::Constant(dim, -kInf);
    Eigen::VectorXd upper = Eigen::VectorXd::Constant(dim, kInf);
    lower(dim - 1) = config.theta_lower;
    upper(dim - 1) = config.theta_upper;

    const bool use_lifetable = design.delayed_entry && config.lifetable != nullptr;

    double prev_ll = -kInf;
    for (int outer = 0; outer < config.max_outer_iterations; ++outer) {
        // Step 2: Breslow updates at current (gamma, theta); the life-table
        // segment is recomputed each pass because it depends on gamma13.
        StepHazard segment;
        if (use_lifetable) {
            segment = calibrate_h013(*config.lifetable, res.params.gamma13, data.Z13(), w);
        }
        res.hazards = breslow_update_all(data, res.params, res.hazards, w, design.delayed_entry,
                                         use_lifetable ? &segment : nullptr);

        // Step 3: maximize the pseudo-log-likelihood at fixed hazards.
        auto objective = [&](const Eigen::VectorXd& x) {
            ParameterVector pv = ParameterVector::unflatten(x, p12, p13, p23);
            return total_loglik(data, pv, res.hazards, design, w, config.threads);
        };
        auto gradient = [&](const Eigen::VectorXd& x) {
            return numeric_gradient(objective, x, lower, upper);
        };
        OptimOptions oo;
        oo.max_fevals = config.optimizer_budget;
        OptimResult opt;
        try {
            opt = maximize_box(objective, gradient, res.params.flatten(), lower, upper, oo,
                               int(2 * dim));
        } catch (const std::exception& e) {
            throw std::runtime_error("fit: inner optimizer failure at outer iteration " +
                                     std::to_string(outer + 1) + ": " + e.what());
        }
        if (!std::isfinite(opt.f)) {
            throw std::runtime_error("fit: non-finite pseudo-log-likelihood at outer iteration " +
                                     std::to_string(outer + 1));
        }
        res.params = ParameterVector::unflatten(opt.x, p12, p13, p23);
        res.loglik_trace.push_back(opt.f);
        res.n_outer = outer + 1;

        if (outer > 0) {
            const double rel = std::abs(opt.f - prev_ll) / std::max(std::abs(prev_ll), 1e-300);
            if (rel < config.rel_tol) {
                res.converged = true;
                break;
            }
        }
        prev_ll = opt.f;
    }
    if (!res.converged) {
        res.warnings.push_back("fit: outer iteration budget exhausted before convergence");
    }
    return res;
}

FitResult fit(const Dataset& data, const StudyDesign& design, const FitConfig& config) {
    return fit_weighted(data, design, config, {});
}

Dataset make_subsample(const Dataset& data, const SubsampleConfig& cfg) {
    std::vector<std::size_t> censored;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.records()[i].delta_sum() == 0) censored.push_back(i);
    }
    const std::size_t n0 = censored.size();
    if (cfg.n_tilde > n0) {
        throw std::invalid_argument("subsample: n_tilde exceeds the number of censored subjects (" +
                                    std::to_string(n0) + ")");
    }
    if (cfg.n_tilde == n0) return data;  // degenerate subsample, weights unchanged

    Rng rng(cfg.seed);
    std::vector<char> keep(data.size(), 0);
    for (std::size_t pos : rng.sample_without_replacement(n0, cfg.n_tilde)) {
        keep[censored[pos]] = 1;
    }
    const double w = double(n0) / double(cfg.n_tilde);
    std::vector<SubjectRecord> kept;
    kept.reserve(data.size() - n0 + cfg.n_tilde);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& r = data.records()[i];
        if (r.delta_sum() > 0) {
            kept.push_back(r);
        } else if (keep[i]) {
            kept.push_back(r);
            kept.back().weight *= w;
        }
    }
    return Dataset(std::move(kept), data.covariate_map());
}

FitResult fit_with_subsample(const Dataset& data, const StudyDesign& design,
                             const FitConfig& config, const SubsampleConfig& subsample) {
    Dataset reduced = make_subsample(data, subsample);
    return fit(reduced, design, config);
}

void FitResult::write_report(const std::string& path, const std::vector<std::string>& names,
                             const std::vector<double>* se) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const Eigen::VectorXd flat = params.flatten();
    if (static_cast<Eigen::Index>(names.size()) != flat.size()) {
        throw std::invalid_argument("write_report: name count mismatch");
    }
    out << "converged: " << (converged ? "yes" : "no") << "\n";
    out << "outer_iterations: " << n_outer << "\n";
    out << "\nparameters:\n";
    for (Eigen::Index j = 0; j < flat.size(); ++j) {
        out << "  " << names[j] << " = " << format_double(flat(j));
        if (se != nullptr) out << "  (se " << format_double((*se)[j]) << ")";
        out << "\n";
    }
    out << "\nloglik trace:\n";
    for (std::size_t i = 0; i < loglik_trace.size(); ++i) {
        out << "  " << (i + 1) << ": " << format_double(loglik_trace[i]) << "\n";
    }
    for (const auto& wmsg : warnings) out << "warning: " << wmsg << "\n";
}

}  // namespace fid
