#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frailtyid/hazard.hpp"
#include "frailtyid/likelihood.hpp"
#include "frailtyid/rng.hpp"
#include "oracles.hpp"

using namespace fid;

namespace {

Dataset synthetic_cohort(std::size_t n, std::uint64_t seed, bool with_entry) {
    Rng rng(seed);
    std::vector<SubjectRecord> recs;
    for (std::size_t i = 0; i < n; ++i) {
        SubjectRecord r;
        r.Z = Eigen::VectorXd::Constant(2, 0.0);
        r.Z(0) = rng.uniform();
        r.Z(1) = rng.uniform();
        const double t1 = rng.exponential(1.2);
        const double t2 = rng.exponential(0.8);
        const double c = rng.exponential(0.7);
        if (with_entry) r.R = rng.uniform(0.0, 0.1);
        if (t1 < std::min(t2, c)) {
            r.delta1 = true;
            r.V = t1;
            const double d = t1 + rng.exponential(1.5);
            const double cw = t1 + rng.exponential(1.0);
            r.W = std::min(d, cw);
            r.delta3 = d <= cw;
        } else if (t2 < std::min(t1, c)) {
            r.delta2 = true;
            r.V = t2;
        } else {
            r.V = c;
        }
        recs.push_back(r);
    }
    return Dataset(std::move(recs));
}

ParameterVector make_params(double g12a, double g12b, double g13a, double g13b, double g23a,
                            double g23b, double theta) {
    ParameterVector pv;
    pv.gamma12 = Eigen::Vector2d(g12a, g12b);
    pv.gamma13 = Eigen::Vector2d(g13a, g13b);
    pv.gamma23 = Eigen::Vector2d(g23a, g23b);
    pv.theta = theta;
    return pv;
}

HazardTriple fitted_style_hazards(const Dataset& data, const ParameterVector& pv) {
    std::vector<double> w(data.size(), 1.0);
    HazardTriple h = breslow_update_all(data, pv, HazardTriple{}, w, false);
    return breslow_update_all(data, pv, h, w, false);
}

// Cox full log-likelihood in counting-process form with plugged-in step
// hazards, summed over the three transitions; independent of the library's
// s_i / A machinery (raw prefix sums over jump arrays).
double independent_cox_loglik(const Dataset& data, const ParameterVector& pv,
                              const HazardTriple& h) {
    auto step_value = [](const StepHazard& sh, double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sh.n_jumps() && sh.times()[i] <= t; ++i) acc += sh.jumps()[i];
        return acc;
    };
    auto jump = [](const StepHazard& sh, double t) {
        for (std::size_t i = 0; i < sh.n_jumps(); ++i) {
            if (sh.times()[i] == t) return sh.jumps()[i];
        }
        return 0.0;
    };
    double total = 0.0;
    for (const auto& r : data.records()) {
        const double lp12 = pv.gamma12.dot(r.Z);
        const double lp13 = pv.gamma13.dot(r.Z);
        const double lp23 = pv.gamma23.dot(r.Z);
        if (r.delta1) total += std::log(jump(h.h12, r.V)) + lp12;
        total -= step_value(h.h12, r.V) * std::exp(lp12);
        if (r.delta2) total += std::log(jump(h.h13, r.V)) + lp13;
        total -= step_value(h.h13, r.V) * std::exp(lp13);
        if (r.delta1) {
            if (r.delta3) total += std::log(jump(h.h23, r.W)) + lp23;
            total -= (step_value(h.h23, r.W) - step_value(h.h23, r.V)) * std::exp(lp23);
        }
    }
    return total;
}

}  // namespace

TEST_CASE("theta 0 censored subject contributes minus the conditional cumulative hazard") {
    SubjectRecord r;
    r.Z = Eigen::Vector2d(1.0, 0.5);
    r.V = 1.7;
    HazardTriple h;
    h.h12 = StepHazard({0.5, 1.1}, {0.2, 0.1});
    h.h13 = StepHazard({0.9}, {0.3});
    ParameterVector pv = make_params(0.4, 0.0, -0.3, 0.2, 0.0, 0.0, 0.0);
    const double expect = -(0.3 * std::exp(0.4)) - (0.3 * std::exp(-0.3 + 0.1));
    CHECK(subject_loglik_plain(r, pv, h) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("theta 0 factorization into three Cox full log-likelihoods") {
    Dataset data = synthetic_cohort(300, 31, false);
    ParameterVector pv = make_params(0.5, -0.2, 0.1, 0.3, -0.4, 0.2, 0.0);
    HazardTriple h = fitted_style_hazards(data, pv);
    const double lhs = total_loglik(data, pv, h, StudyDesign{});
    const double rhs = independent_cox_loglik(data, pv, h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("worked subject with both events at theta 1") {
    SubjectRecord r;
    r.Z = Eigen::Vector2d(1.0, 0.0);
    r.delta1 = true;
    r.V = 1.0;
    r.delta3 = true;
    r.W = 2.0;
    HazardTriple h;
    h.h12 = StepHazard({1.0}, {0.15});
    h.h13 = StepHazard({0.8}, {0.25});
    h.h23 = StepHazard({1.5, 2.0}, {0.3, 0.2});
    ParameterVector pv = make_params(0.3, 0.0, 0.1, 0.0, 0.2, 0.0, 1.0);
    const double a = std::exp(0.3), b = std::exp(0.1), c = std::exp(0.2);

    // A integrals under the left-constant scheme (grid: 0.8, 1.0 / 1.5, 2.0)
    const double A12V = a * 0.15 * std::exp(1.0 * (a * 0.0 + b * 0.25));
    const double A13V = b * 0.25 * std::exp(0.0);
    const double rho = 0.5;
    const double A23V = 0.0;
    const double A23W =
        c / 2.0 * (0.3 * std::exp(rho * c * 0.0) + 0.2 * std::exp(rho * c * 0.3));
    const double s = A12V + A13V + A23W - A23V;

    double expect = std::log(0.15) + 0.3 + 1.0 * (a * 0.15 + b * 0.25);  // 12 event at V
    expect += std::log(0.2) + 0.2 + rho * c * 0.5 - std::log(2.0);       // 23 event at W
    expect += std::log(2.0) - 3.0 * std::log1p(s);                       // phi'' term
    CHECK(subject_loglik_plain(r, pv, h) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("delayed entry reductions at theta 0") {
    HazardTriple h;
    h.h12 = StepHazard({0.5, 1.1}, {0.2, 0.1});
    h.h13 = StepHazard({0.9, 1.4}, {0.3, 0.2});
    h.h23 = StepHazard({1.2, 1.8}, {0.25, 0.35});
    ParameterVector pv = make_params(0.4, 0.0, -0.3, 0.0, 0.25, 0.0, 0.0);
    StudyDesign design;
    design.delayed_entry = true;
    design.c_L = 0.1;
    design.c_U = 1.2;

    SubjectRecord inc;  // incident censored
    inc.Z = Eigen::Vector2d(1.0, 0.0);
    inc.V = 1.3;
    inc.R = 1.0;
    const double plain = subject_loglik_plain(inc, pv, h);
    const double corr = 0.2 * std::exp(0.4) + 0.3 * std::exp(-0.3);  // H12(R|Z)+H13(R|Z)
    CHECK(subject_loglik_delayed(inc, pv, h, design) ==
          doctest::Approx(plain + corr).epsilon(1e-12));

    SubjectRecord prev;  // prevalent censored after disease
    prev.Z = Eigen::Vector2d(1.0, 0.0);
    prev.delta1 = true;
    prev.V = 0.4;
    prev.W = 1.9;
    prev.R = 1.0;
    const double c = std::exp(0.25);
    const double expect = -c * (0.6 - 0.0);  // -(A23(W) - A23(R)) at theta 0
    CHECK(subject_loglik_delayed(prev, pv, h, design) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("prevalent subject with event at theta 1 matches the closed form") {
    HazardTriple h;
    h.h12 = StepHazard({0.5}, {0.2});
    h.h13 = StepHazard({0.9}, {0.3});
    h.h23 = StepHazard({1.2, 1.8}, {0.25, 0.35});
    ParameterVector pv = make_params(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0);
    StudyDesign design;
    design.delayed_entry = true;
    design.c_L = 0.1;
    design.c_U = 1.1;

    SubjectRecord prev;
    prev.Z = Eigen::Vector2d(0.0, 0.0);
    prev.delta1 = true;
    prev.V = 0.4;
    prev.W = 1.8;
    prev.delta3 = true;
    prev.R = 1.0;

    // A_1.(V)=0 (no mass below 0.4 in h12? the 0.5 jump is above V), so
    // s21 = A23(W), s22 = A23(R); A23 under the left-constant scheme:
    const double rho = 0.5;
    const double A23W = 0.5 * (0.25 + 0.35 * std::exp(rho * 0.25));
    const double A23R = 0.0;  // R=1.0 is before the first 23 jump at 1.2
    const double expect = std::log(0.35) + rho * (0.25 + 0.35) - std::log(2.0)  // event term
                          + std::log(2.0) - 3.0 * std::log1p(A23W)              // phi^(2)(s21)
                          - (-2.0 * std::log1p(A23R));                          // -log(-phi'(s22))
    CHECK(subject_loglik_delayed(prev, pv, h, design) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("delayed entry with all R=0 equals the plain likelihood exactly") {
    Dataset plain = synthetic_cohort(150, 77, false);
    std::vector<SubjectRecord> recs = plain.records();
    for (auto& r : recs) r.R = 0.0;
    Dataset delayed(recs);
    ParameterVector pv = make_params(0.5, -0.2, 0.1, 0.3, -0.4, 0.2, 0.9);
    HazardTriple h = fitted_style_hazards(plain, pv);
    StudyDesign d0;
    StudyDesign d1;
    d1.delayed_entry = true;
    d1.c_L = 0.0;
    d1.c_U = 1.0;
    CHECK(total_loglik(plain, pv, h, d0) == total_loglik(delayed, pv, h, d1));
}

TEST_CASE("weights scale the total linearly") {
    Dataset data = synthetic_cohort(100, 5, false);
    ParameterVector pv = make_params(0.2, 0.0, 0.0, 0.1, 0.3, 0.0, 0.5);
    HazardTriple h = fitted_style_hazards(data, pv);
    std::vector<double> w2(data.size(), 2.0);
    const double base = total_loglik(data, pv, h, StudyDesign{});
    const double twice = total_loglik(data, pv, h, StudyDesign{}, w2);
    CHECK(twice == doctest::Approx(2.0 * base).epsilon(1e-13));
}

TEST_CASE("total is deterministic across thread counts") {
    Dataset data = synthetic_cohort(301, 11, false);
    ParameterVector pv = make_params(0.5, -0.2, 0.1, 0.3, -0.4, 0.2, 1.4);
    HazardTriple h = fitted_style_hazards(data, pv);
    const double t1 = total_loglik(data, pv, h, StudyDesign{}, {}, 1);
    const double t4 = total_loglik(data, pv, h, StudyDesign{}, {}, 4);
    CHECK(t1 == t4);
}

TEST_CASE("zero jump at an observed event time is an error") {
    SubjectRecord r;
    r.Z = Eigen::Vector2d(0.0, 0.0);
    r.delta1 = true;
    r.V = 0.7;  // no jump at 0.7
    r.W = 0.7;
    HazardTriple h;
    h.h12 = StepHazard({0.5}, {0.2});
    ParameterVector pv = make_params(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_WITH_AS(subject_loglik_plain(r, pv, h), doctest::Contains("zero hazard jump"),
                         std::runtime_error);
}

TEST_CASE("numeric gradient basics") {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -1e30);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1e30);
    auto constant = [](const Eigen::VectorXd&) { return 3.5; };
    Eigen::VectorXd x(2);
    x << 1.0, 2.0;
    CHECK(numeric_gradient(constant, x, lo, hi).cwiseAbs().maxCoeff() == 0.0);

    auto quad = [](const Eigen::VectorXd& v) { return v.squaredNorm(); };
    Eigen::VectorXd g = numeric_gradient(quad, x, lo, hi);
    CHECK(g(0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g(1) == doctest::Approx(4.0).epsilon(1e-6));

    auto bad = [](const Eigen::VectorXd& v) {
        return v(0) > 1.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    };
    CHECK_THROWS_WITH_AS(numeric_gradient(bad, x, lo, hi), doctest::Contains("coordinate"),
                         std::runtime_error);
}

TEST_CASE("central and one-sided differences of the total agree") {
    Dataset data = synthetic_cohort(120, 404, false);
    ParameterVector pv = make_params(0.3, -0.1, 0.2, 0.1, 0.1, -0.3, 0.8);
    HazardTriple h = fitted_style_hazards(data, pv);
    auto f = [&](const Eigen::VectorXd& x) {
        return total_loglik(data, ParameterVector::unflatten(x, 2, 2, 2), h, StudyDesign{});
    };
    Eigen::VectorXd x = pv.flatten();
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(7, -1e30);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(7, 1e30);
    lo(6) = 0.0;
    Eigen::VectorXd central = numeric_gradient(f, x, lo, hi);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double hstep = 1e-6;
        Eigen::VectorXd xp = x;
        xp(i) += hstep;
        const double onesided = (f(xp) - f(x)) / hstep;
        CHECK(central(i) == doctest::Approx(onesided).epsilon(1e-4));
    }
}
