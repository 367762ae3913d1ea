#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "frailtyid/hazard.hpp"
#include "frailtyid/rng.hpp"
#include "oracles.hpp"

using namespace fid;

namespace {

ParameterVector zero_params(Eigen::Index p, double theta) {
    ParameterVector pv;
    pv.gamma12 = Eigen::VectorXd::Zero(p);
    pv.gamma13 = Eigen::VectorXd::Zero(p);
    pv.gamma23 = Eigen::VectorXd::Zero(p);
    pv.theta = theta;
    return pv;
}

// small random cohort without covariate effects
Dataset synthetic_cohort(std::size_t n, std::uint64_t seed, bool with_entry) {
    Rng rng(seed);
    std::vector<SubjectRecord> recs;
    for (std::size_t i = 0; i < n; ++i) {
        SubjectRecord r;
        r.Z = Eigen::VectorXd::Constant(1, rng.uniform());
        const double t1 = rng.exponential(1.2);
        const double t2 = rng.exponential(0.8);
        const double c = rng.exponential(0.9);
        if (with_entry) r.R = rng.uniform(0.0, 0.2);
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
        if (with_entry && *r.R > r.V && !r.delta1) continue;  // keep records valid
        recs.push_back(r);
    }
    return Dataset(std::move(recs));
}

}  // namespace

TEST_CASE("step hazard evaluation") {
    StepHazard empty;
    CHECK(empty.value(5.0) == 0.0);
    StepHazard h({1.0, 3.0}, {0.2, 0.3});
    CHECK(h.value(2.0) == doctest::Approx(0.2));
    CHECK(h.value(10.0) == doctest::Approx(0.5));  // plateau beyond tau = 3
    CHECK(h.value(1.0) == doctest::Approx(0.2));
    CHECK(h.value_before(1.0) == doctest::Approx(0.0));
    CHECK(h.jump_at(3.0) == doctest::Approx(0.3));
    CHECK(h.jump_at(2.0) == 0.0);
    CHECK_THROWS(StepHazard({2.0, 1.0}, {0.1, 0.1}));
    CHECK_THROWS(StepHazard({1.0}, {-0.1}));
}

TEST_CASE("step hazard csv round trip") {
    StepHazard h({0.5, 1.25, 2.0}, {0.1, 0.0, 0.4});
    const auto path = std::filesystem::temp_directory_path() / "fid_hazard_test.csv";
    h.write_csv(path.string());
    StepHazard back = StepHazard::read_csv(path.string());
    REQUIRE(back.n_jumps() == h.n_jumps());
    for (std::size_t i = 0; i < h.n_jumps(); ++i) {
        CHECK(back.times()[i] == h.times()[i]);
        CHECK(back.jumps()[i] == h.jumps()[i]);
    }
    std::filesystem::remove(path);
}

TEST_CASE("cumulative_A independence reduction and basics") {
    HazardTriple h;
    h.h12 = StepHazard({1.0}, {0.4});
    ParameterVector pv = zero_params(1, 0.0);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(1);
    CHECK(cumulative_A(Transition::Illness, h, pv, z, 2.0) == doctest::Approx(0.4));
    CHECK(cumulative_A(Transition::Illness, h, pv, z, 0.0) == 0.0);
    // exact step reduction at theta = 0 with a covariate effect
    pv.gamma12(0) = 0.7;
    Eigen::VectorXd z1 = Eigen::VectorXd::Constant(1, 1.0);
    CHECK(cumulative_A(Transition::Illness, h, pv, z1, 0.99) == 0.0);
    CHECK(cumulative_A(Transition::Illness, h, pv, z1, 1.0) ==
          doctest::Approx(0.4 * std::exp(0.7)).epsilon(1e-14));
}

TEST_CASE("cumulative_A against analytic integral on a fine grid") {
    // H_012 linear with slope 1 on [0,1], discretized at 100 points; theta=1:
    // A_12(1) = int_0^1 e^{theta s} ds = e - 1
    std::vector<double> t, j;
    for (int i = 1; i <= 100; ++i) {
        t.push_back(i / 100.0);
        j.push_back(0.01);
    }
    HazardTriple h;
    h.h12 = StepHazard(t, j);
    ParameterVector pv = zero_params(1, 1.0);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(1);
    const double got = cumulative_A(Transition::Illness, h, pv, z, 1.0);
    CHECK(got == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-2));
    // monotone in t
    double prev = -1.0;
    for (double tt = 0.0; tt <= 1.5; tt += 0.03) {
        const double v = cumulative_A(Transition::Illness, h, pv, z, tt);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("breslow single subject reductions") {
    std::vector<SubjectRecord> recs;
    SubjectRecord r;
    r.Z = Eigen::VectorXd::Zero(1);
    r.delta1 = true;
    r.V = 1.0;
    r.W = 2.0;
    r.delta3 = true;
    recs.push_back(r);
    Dataset data(recs);
    ParameterVector pv = zero_params(1, 0.0);
    HazardTriple current;
    std::vector<double> w = {1.0};

    StepHazard h12 = breslow_update_1k(data, 2, pv, current, w, false);
    REQUIRE(h12.n_jumps() == 1);
    CHECK(h12.times()[0] == 1.0);
    CHECK(h12.jumps()[0] == doctest::Approx(1.0));

    StepHazard h23 = breslow_update_23(data, pv, current, w, false);
    REQUIRE(h23.n_jumps() == 1);
    CHECK(h23.times()[0] == 2.0);
    CHECK(h23.jumps()[0] == doctest::Approx(1.0));
}

TEST_CASE("breslow two at risk gives half jump") {
    std::vector<SubjectRecord> recs(2);
    recs[0].Z = Eigen::VectorXd::Zero(1);
    recs[0].delta1 = true;
    recs[0].V = 1.0;
    recs[0].W = 1.0;
    recs[1].Z = Eigen::VectorXd::Zero(1);
    recs[1].V = 2.0;  // censored later
    Dataset data(recs);
    ParameterVector pv = zero_params(1, 0.0);
    std::vector<double> w = {1.0, 1.0};
    StepHazard h12 = breslow_update_1k(data, 2, pv, HazardTriple{}, w, false);
    REQUIRE(h12.n_jumps() == 1);
    CHECK(h12.jumps()[0] == doctest::Approx(0.5));
}

TEST_CASE("theta 0, no covariate effect: breslow equals Nelson-Aalen bit-exactly") {
    Dataset data = synthetic_cohort(400, 20240601, false);
    ParameterVector pv = zero_params(1, 0.0);
    std::vector<double> w(data.size(), 1.0);
    HazardTriple out = breslow_update_all(data, pv, HazardTriple{}, w, false);

    const auto& recs = data.records();
    std::vector<double> entry0(recs.size(), -1.0), exitV, exitW, entryV;
    std::vector<bool> ev12, ev13;
    for (const auto& r : recs) {
        exitV.push_back(r.V);
        ev12.push_back(r.delta1);
        ev13.push_back(r.delta2);
    }
    auto na12 = oracle::nelson_aalen(entry0, exitV, ev12);
    auto na13 = oracle::nelson_aalen(entry0, exitV, ev13);
    REQUIRE(out.h12.n_jumps() == na12.times.size());
    for (std::size_t i = 0; i < na12.times.size(); ++i) {
        CHECK(out.h12.times()[i] == na12.times[i]);
        CHECK(out.h12.jumps()[i] == na12.jumps[i]);  // exact
    }
    REQUIRE(out.h13.n_jumps() == na13.times.size());
    for (std::size_t i = 0; i < na13.times.size(); ++i) {
        CHECK(out.h13.jumps()[i] == na13.jumps[i]);
    }

    // 2->3: left truncated by V among diseased
    std::vector<double> entry23, exit23;
    std::vector<bool> ev23;
    for (const auto& r : recs) {
        if (r.delta1 && !r.delta2) {
            entry23.push_back(r.V);
            exit23.push_back(r.W);
            ev23.push_back(r.delta3);
        }
    }
    auto na23 = oracle::nelson_aalen(entry23, exit23, ev23);
    REQUIRE(out.h23.n_jumps() == na23.times.size());
    for (std::size_t i = 0; i < na23.times.size(); ++i) {
        CHECK(out.h23.jumps()[i] == na23.jumps[i]);
    }
}

TEST_CASE("breslow output is monotone with nonnegative jumps") {
    Dataset data = synthetic_cohort(300, 7, false);
    ParameterVector pv = zero_params(1, 1.0);
    pv.gamma12(0) = 0.4;
    pv.gamma13(0) = -0.2;
    pv.gamma23(0) = 0.3;
    std::vector<double> w(data.size(), 1.0);
    HazardTriple a = breslow_update_all(data, pv, HazardTriple{}, w, false);
    HazardTriple b = breslow_update_all(data, pv, a, w, false);
    for (const StepHazard* h : {&b.h12, &b.h13, &b.h23}) {
        for (double j : h->jumps()) CHECK(j >= 0.0);
    }
}

TEST_CASE("weight neutrality") {
    Dataset data = synthetic_cohort(200, 99, false);
    ParameterVector pv = zero_params(1, 0.7);
    pv.gamma12(0) = 0.2;
    std::vector<double> w1(data.size(), 1.0);
    HazardTriple a = breslow_update_all(data, pv, HazardTriple{}, w1, false);
    HazardTriple b = breslow_update_all(data, pv, HazardTriple{}, std::vector<double>(data.weights()), false);
    REQUIRE(a.h12.n_jumps() == b.h12.n_jumps());
    for (std::size_t i = 0; i < a.h12.n_jumps(); ++i) {
        CHECK(a.h12.jumps()[i] == b.h12.jumps()[i]);
    }
}

TEST_CASE("prevalent cases enter only the 2->3 update under delayed entry") {
    std::vector<SubjectRecord> recs(3);
    // prevalent: diagnosed at 0.5, recruited at 1.0, dies at 2.0
    recs[0].Z = Eigen::VectorXd::Zero(1);
    recs[0].delta1 = true;
    recs[0].V = 0.5;
    recs[0].W = 2.0;
    recs[0].delta3 = true;
    recs[0].R = 1.0;
    // incident: diagnosed at 1.5 after recruitment at 1.1
    recs[1].Z = Eigen::VectorXd::Zero(1);
    recs[1].delta1 = true;
    recs[1].V = 1.5;
    recs[1].W = 3.0;
    recs[1].delta3 = false;
    recs[1].R = 1.1;
    // censored healthy
    recs[2].Z = Eigen::VectorXd::Zero(1);
    recs[2].V = 2.5;
    recs[2].R = 1.2;
    Dataset data(recs);
    ParameterVector pv = zero_params(1, 0.0);
    std::vector<double> w(3, 1.0);

    StepHazard h12 = breslow_update_1k(data, 2, pv, HazardTriple{}, w, true);
    REQUIRE(h12.n_jumps() == 1);  // only the incident diagnosis at 1.5
    CHECK(h12.times()[0] == 1.5);
    // risk set at 1.5: incident (1.1 <= 1.5 <= 1.5) and censored (1.2 <= 1.5 <= 2.5)
    CHECK(h12.jumps()[0] == doctest::Approx(0.5));

    StepHazard h23 = breslow_update_23(data, pv, HazardTriple{}, w, true);
    REQUIRE(h23.n_jumps() == 1);  // the prevalent death at 2.0 does count
    CHECK(h23.times()[0] == 2.0);
    // at t=2.0: prevalent at risk (R=1.0 < 2.0 <= W=2.0); incident diseased at
    // risk (V=1.5 <= 2 <= 3, R=1.1 < 2)
    CHECK(h23.jumps()[0] == doctest::Approx(0.5));
}

TEST_CASE("delayed entry with R=0 equals the plain update bit-exactly") {
    Dataset plain = synthetic_cohort(250, 5150, false);
    std::vector<SubjectRecord> recs = plain.records();
    for (auto& r : recs) r.R = 0.0;
    Dataset delayed(recs);
    ParameterVector pv = zero_params(1, 1.3);
    pv.gamma12(0) = 0.3;
    pv.gamma13(0) = 0.1;
    pv.gamma23(0) = -0.2;
    std::vector<double> w(plain.size(), 1.0);
    HazardTriple cur;  // then one refinement pass to exercise nontrivial grids
    HazardTriple a0 = breslow_update_all(plain, pv, cur, w, false);
    HazardTriple b0 = breslow_update_all(delayed, pv, cur, w, true);
    HazardTriple a = breslow_update_all(plain, pv, a0, w, false);
    HazardTriple b = breslow_update_all(delayed, pv, b0, w, true);
    REQUIRE(a.h12.n_jumps() == b.h12.n_jumps());
    for (std::size_t i = 0; i < a.h12.n_jumps(); ++i) {
        CHECK(a.h12.jumps()[i] == b.h12.jumps()[i]);
    }
    REQUIRE(a.h23.n_jumps() == b.h23.n_jumps());
    for (std::size_t i = 0; i < a.h23.n_jumps(); ++i) {
        CHECK(a.h23.jumps()[i] == b.h23.jumps()[i]);
    }
}

TEST_CASE("zero denominator is reported with the time") {
    // single subject whose event is a tie with its own exit works; force an
    // empty risk set instead: prevalent-only data cannot support a 1->2 jump
    std::vector<SubjectRecord> recs(1);
    recs[0].Z = Eigen::VectorXd::Zero(1);
    recs[0].delta1 = true;
    recs[0].V = 1.0;
    recs[0].W = 2.0;
    recs[0].delta3 = true;
    recs[0].R = 0.5;
    Dataset data(recs);
    ParameterVector pv = zero_params(1, 0.0);
    std::vector<double> w = {1.0};
    // weight zero empties every denominator
    std::vector<double> w0 = {0.0};
    CHECK_THROWS_WITH_AS(breslow_update_1k(data, 2, pv, HazardTriple{}, w0, false),
                         doctest::Contains("zero denominator"), std::runtime_error);
}

TEST_CASE("splice keeps head below c_L and merges tails") {
    StepHazard head({0.1, 0.2}, {0.01, 0.02});
    StepHazard tail({0.15, 0.5}, {0.5, 0.7});  // the 0.15 jump is below c_L, dropped
    StepHazard s = splice_hazard(head, tail, 0.25);
    REQUIRE(s.n_jumps() == 3);
    CHECK(s.times()[2] == 0.5);
    CHECK(s.value(0.24) == doctest::Approx(0.03));
    CHECK(s.value(0.6) == doctest::Approx(0.73));
}
