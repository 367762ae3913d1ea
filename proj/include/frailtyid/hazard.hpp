#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "frailtyid/data.hpp"
#include "frailtyid/frailty.hpp"

namespace fid {

// Right-continuous nondecreasing step function with H(0) = 0. Evaluation
// beyond the last jump time plateaus.
class StepHazard {
public:
    StepHazard() = default;
    StepHazard(std::vector<double> times, std::vector<double> jumps);

    // H(t), inclusive of a jump exactly at t.
    double value(double t) const;
    // H(t-), exclusive of a jump exactly at t.
    double value_before(double t) const;
    // Jump size exactly at t (0 when t is not a jump time).
    double jump_at(double t) const;

    double tau() const { return times_.empty() ? 0.0 : times_.back(); }
    std::size_t n_jumps() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& jumps() const { return jumps_; }

    void write_csv(const std::string& path) const;  // header time,jump,cumulative
    static StepHazard read_csv(const std::string& path);

private:
    std::vector<double> times_;   // strictly increasing
    std::vector<double> jumps_;   // nonnegative
    std::vector<double> cum_;     // prefix sums
};

struct HazardTriple {
    StepHazard h12;
    StepHazard h13;
    StepHazard h23;
};

// Precomputed integration grid for the A_jk integrals of one hazard triple.
// The grid for A_12/A_13 pools the jump times of H_012 and H_013; the grid
// for A_23 uses the jump times of H_023. On each interval between grid
// points the integrand is constant: the interval's hazard slope times
// alpha* evaluated with the left-constant cumulative values.
struct AGrid {
    // pooled 1. grid
    std::vector<double> u;       // pooled jump times
    Eigen::ArrayXd dH12, dH13;   // jump of each hazard at u[j]
    Eigen::ArrayXd H12L, H13L;   // left value H(u[j]-)
    // 23 grid
    std::vector<double> v;
    Eigen::ArrayXd dH23;
    Eigen::ArrayXd H23L;

    static AGrid build(const HazardTriple& h);

    // A_12 and A_13 at time t for risk scores a = exp(g12'Z), b = exp(g13'Z).
    // ws is caller-provided scratch of size >= u.size().
    void a12_a13(double t, double theta, double a, double b, Eigen::ArrayXd& ws, double& A12,
                 double& A13) const;
    // A_23 at time t for risk score c = exp(g23'Z).
    double a23(double t, double theta, double c, Eigen::ArrayXd& ws) const;

    // Baseline step-function values H_0jk(t), inclusive of a jump at t.
    void h012_h013_at(double t, double& h12, double& h13) const;
    double h023_at(double t) const;
};

// A_jk(t|Z) = int_0^t h_0jk(s) alpha*_jk(s|Z) ds under the piecewise-constant
// scheme. One-shot convenience wrapper over AGrid.
double cumulative_A(Transition tr, const HazardTriple& h, const ParameterVector& params,
                    const Eigen::VectorXd& Z, double t, const CovariateMap& map = {});

// Breslow-type updates. Jump at each distinct observed transition time t:
//   (weighted tied-event count) / (weighted at-risk sum of
//    alpha*_jk(t-|Z_i) E(omega_i | F_{t-}))
// With delayed_entry, the 1->k risk sets require R_i <= t <= V_i and only
// incident events enter the numerator; the 2->3 risk set requires R_i < t and
// prevalent subjects do contribute.
// Throws std::runtime_error naming the time when a denominator underflows.
StepHazard breslow_update_1k(const Dataset& data, int k, const ParameterVector& params,
                             const HazardTriple& current, std::span<const double> weights,
                             bool delayed_entry);
StepHazard breslow_update_23(const Dataset& data, const ParameterVector& params,
                             const HazardTriple& current, std::span<const double> weights,
                             bool delayed_entry);

// Computes all three updates in one pass over the data (what the fitter
// uses). lifetable_segment, when nonempty, is spliced in as the [0, c_L)
// part of the updated H_013.
HazardTriple breslow_update_all(const Dataset& data, const ParameterVector& params,
                                const HazardTriple& current, std::span<const double> weights,
                                bool delayed_entry, const StepHazard* lifetable_segment = nullptr);

// Concatenates a [0, c_L) segment with jumps of `tail` at times >= c_L.
StepHazard splice_hazard(const StepHazard& head, const StepHazard& tail, double c_L);

}  // namespace fid
