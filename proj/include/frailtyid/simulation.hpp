#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frailtyid/data.hpp"
#include "frailtyid/estimator.hpp"
#include "frailtyid/frailty.hpp"
#include "frailtyid/lifetable.hpp"

namespace fid {

// Piecewise-constant baseline hazard: rate[i] on [knot[i], knot[i+1]), the
// last segment extending to infinity. knot[0] must be 0.
struct PiecewiseHazard {
    std::vector<double> knots;
    std::vector<double> rates;

    double rate_at(double t) const;
    double cum(double t) const;
    // smallest t with cum(t) = H; +inf when H is never reached
    double inverse_cum(double H) const;
    std::string to_string() const;
    static PiecewiseHazard parse(const std::string& text);  // "0:0.5 0.05:1 0.15:2"
};

struct ScenarioConfig {
    std::size_t n = 0;
    double theta_true = 0.0;
    Eigen::VectorXd gamma12, gamma13, gamma23;
    PiecewiseHazard h012, h013, h023;
    double censor_rate = 2.0;
    double admin_censor_time = 0.61;
    bool delayed_entry = false;
    double c_L = 0.05, c_U = 0.15;
    std::uint64_t seed = 1;
    double oversample = 4.0;

    Eigen::Index n_covariates() const { return gamma12.size(); }
    void validate() const;  // throws naming the offending field
    static ScenarioConfig from_file(const std::string& path);
    void write_file(const std::string& path) const;
};

// Latent quantities retained for test oracles. T2_latent is the
// death-free-of-disease draw; T2_final the operative death age after the
// truncated redraw for diseased subjects (equal to T2_latent otherwise).
struct LatentRecord {
    double T1 = 0.0;
    double T2_latent = 0.0;
    double T2_final = 0.0;
    double omega = 1.0;
    double C = 0.0;
    double R = 0.0;
};

struct Cohort {
    Dataset data;
    std::vector<LatentRecord> truth;
};

// Solves exp{-A_jk(T|Z) omega} = u for T, with the truncated variant
// exp{-A_23(T) omega} = u exp{-A_23(lower) omega} when lower_bound is set
// (2->3 draws). Closed form per piecewise-constant segment. Returns +inf
// when the integrated intensity cannot reach the target.
double sample_event_time(Transition tr, double omega, const Eigen::VectorXd& Z,
                         const ScenarioConfig& scenario, std::optional<double> lower_bound,
                         double u);

Cohort generate_cohort(const ScenarioConfig& scenario);

// truth CSV: header T1,T2,omega with T2 the latent death-free-of-disease
// draw (the pair whose Kendall tau is theta/(theta+2))
void write_truth_csv(const std::string& path, const std::vector<LatentRecord>& truth);

// Population marginal hazard of death free of disease implied by the
// scenario, for life-table input to delayed-entry fits: h_13(t) =
// h_013(t) E[e^g exp{-H_013(t) e^g}] / E[exp{-H_013(t) e^g}], g = gamma13'Z,
// Z ~ U(0,1)^p, by tensor Gauss-Legendre quadrature over the active
// coordinates.
LifeTable true_lifetable(const ScenarioConfig& scenario, int kappa = 200);

// ---- replicate studies (empirical summaries across seeded replicates) ----

struct SummaryCell {
    double mean = 0.0;
    double esd = 0.0;      // empirical SD across replicates
    double boot_se = 0.0;  // mean bootstrap SE (when bootstrap enabled)
    double coverage = -1.0;  // nominal-95% coverage (when bootstrap enabled)
    int n = 0;
    std::vector<double> draws;
};

struct StudyResult {
    // keys: theta, g12_1.., g23_4, H012@t, H013@t, H023@t
    std::map<std::string, SummaryCell> proposed;
    std::map<std::string, SummaryCell> cox;
    int failures_proposed = 0;
    int failures_cox = 0;
    std::vector<std::string> failure_messages;
};

struct StudyOptions {
    int n_reps = 20;
    bool run_proposed = true;
    bool run_cox = true;
    std::vector<double> hazard_times = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    int threads = 1;
    int bootstrap_reps = 0;  // per-replicate bootstrap SEs and coverage
    std::optional<SubsampleConfig> subsample;
    FitConfig fit_config;
    bool use_lifetable = true;  // delayed entry: feed the scenario-implied table
};

StudyResult replicate_study(const ScenarioConfig& scenario, const StudyOptions& opts);

// Mirrors the layout of the reported simulation tables, with a column of
// published reference values when available.
void write_study_csv(const std::string& path, const StudyResult& r, const ScenarioConfig& sc,
                     const std::string& table_id);

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fid
