#include "frailtyid/likelihood.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "frailtyid/parallel.hpp"

namespace fid {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Overflowed risk scores make the A integrals non-finite; those parameter
// points get a -inf objective so the line search retreats. A genuinely
// negative argument would be a bookkeeping bug and is thrown.
double checked_s(double s) {
    if (std::isnan(s)) return std::numeric_limits<double>::infinity();
    if (s < 0.0) {
        if (s < -1e-9) throw std::logic_error("likelihood: negative phi argument s");
        return 0.0;
    }
    return s;
}

double log_jump(const StepHazard& h, double t, const char* trans) {
    const double j = h.jump_at(t);
    if (!(j > 0.0)) {
        throw std::runtime_error(std::string("likelihood: zero hazard jump for transition ") +
                                 trans + " at observed event time t=" + std::to_string(t));
    }
    return std::log(j);
}

struct SubjectTerms {
    double lp12, lp13, lp23;  // linear predictors
    double a, b, c;           // risk scores exp(lp)
};

// Per-subject contribution shared by the plain and delayed variants.
// `hazards` supplies the jump lookups; `grid` the A integrals.
double contribution(const SubjectRecord& r, const SubjectTerms& st, double theta,
                    const HazardTriple& hazards, const AGrid& grid, bool delayed,
                    Eigen::ArrayXd& ws) {
    const bool indep = theta < kThetaIndependence;
    const double rho = indep ? 0.0 : theta / (1.0 + theta);

    if (delayed && r.prevalent()) {
        // L^LT2: disease history before recruitment is conditioned away.
        const double A23V = grid.a23(r.V, theta, st.c, ws);
        const double A23W = grid.a23(r.W, theta, st.c, ws);
        const double A23R = grid.a23(*r.R, theta, st.c, ws);
        double A12V = 0.0, A13V = 0.0;
        grid.a12_a13(r.V, theta, st.a, st.b, ws, A12V, A13V);
        const double s21 = checked_s(A12V + A13V + A23W - A23V);
        const double s22 = checked_s(A12V + A13V + A23R - A23V);
        double ll = log_laplace_deriv(theta, s21, 1 + int(r.delta3)) -
                    log_laplace_deriv(theta, s22, 1);
        if (r.delta3) {
            ll += log_jump(hazards.h23, r.W, "23");
            ll += st.lp23 + rho * st.c * grid.h023_at(r.W);
            if (!indep) ll -= std::log1p(theta);
        }
        return ll;
    }

    double A12V = 0.0, A13V = 0.0;
    grid.a12_a13(r.V, theta, st.a, st.b, ws, A12V, A13V);
    double s = A12V + A13V;
    double ll = 0.0;
    if (r.delta1) {
        const double A23V = grid.a23(r.V, theta, st.c, ws);
        const double A23W = grid.a23(r.W, theta, st.c, ws);
        s += A23W - A23V;
    }
    s = checked_s(s);

    if (r.delta1 || r.delta2) {
        double h12 = 0.0, h13 = 0.0;
        grid.h012_h013_at(r.V, h12, h13);
        const double log_corr = indep ? 0.0 : theta * (st.a * h12 + st.b * h13);
        if (r.delta1) ll += log_jump(hazards.h12, r.V, "12") + st.lp12 + log_corr;
        if (r.delta2) ll += log_jump(hazards.h13, r.V, "13") + st.lp13 + log_corr;
    }
    if (r.delta3) {
        ll += log_jump(hazards.h23, r.W, "23");
        ll += st.lp23 + rho * st.c * grid.h023_at(r.W);
        if (!indep) ll -= std::log1p(theta);
    }
    ll += log_laplace_deriv(theta, s, r.delta_sum());

    if (delayed) {
        double A12R = 0.0, A13R = 0.0;
        grid.a12_a13(*r.R, theta, st.a, st.b, ws, A12R, A13R);
        ll -= log_laplace_deriv(theta, checked_s(A12R + A13R), 0);
    }
    return ll;
}

SubjectTerms terms_for(const SubjectRecord& r, const ParameterVector& p, const CovariateMap& map) {
    auto pick = [&](const std::vector<int>& idx, const Eigen::VectorXd& g) {
        if (idx.empty()) {
            if (g.size() != r.Z.size()) throw std::invalid_argument("gamma/Z dimension mismatch");
            return g.dot(r.Z);
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < idx.size(); ++j) acc += g(j) * r.Z(idx[j]);
        return acc;
    };
    SubjectTerms st;
    st.lp12 = pick(map.idx12, p.gamma12);
    st.lp13 = pick(map.idx13, p.gamma13);
    st.lp23 = pick(map.idx23, p.gamma23);
    st.a = std::exp(st.lp12);
    st.b = std::exp(st.lp13);
    st.c = std::exp(st.lp23);
    return st;
}

}  // namespace

double subject_loglik_plain(const SubjectRecord& rec, const ParameterVector& params,
                            const HazardTriple& hazards, const CovariateMap& map) {
    AGrid grid = AGrid::build(hazards);
    Eigen::ArrayXd ws;
    return contribution(rec, terms_for(rec, params, map), params.theta, hazards, grid, false, ws);
}

double subject_loglik_delayed(const SubjectRecord& rec, const ParameterVector& params,
                              const HazardTriple& hazards, const StudyDesign& design,
                              const CovariateMap& map) {
    if (!design.delayed_entry) {
        return subject_loglik_plain(rec, params, hazards, map);
    }
    if (!rec.R.has_value()) throw std::invalid_argument("delayed likelihood requires R");
    AGrid grid = AGrid::build(hazards);
    Eigen::ArrayXd ws;
    return contribution(rec, terms_for(rec, params, map), params.theta, hazards, grid, true, ws);
}

double total_loglik(const Dataset& data, const ParameterVector& params,
                    const HazardTriple& hazards, const StudyDesign& design,
                    std::span<const double> weights, int threads) {
    const auto& recs = data.records();
    const std::size_t n = recs.size();
    AGrid grid = AGrid::build(hazards);
    const double theta = params.theta;

    Eigen::VectorXd lp12 = data.Z12() * params.gamma12;
    Eigen::VectorXd lp13 = data.Z13() * params.gamma13;
    Eigen::VectorXd lp23 = data.Z23() * params.gamma23;

    // Contributions land in per-subject slots, so the reduction below is in
    // subject-index order whatever the thread count.
    std::vector<double> contrib(n);
    std::mutex err_mutex;
    std::string error;
    auto body = [&](std::size_t i) {
        thread_local Eigen::ArrayXd ws;
        try {
            const auto& r = recs[i];
            SubjectTerms st;
            st.lp12 = lp12(i);
            st.lp13 = lp13(i);
            st.lp23 = lp23(i);
            st.a = std::exp(st.lp12);
            st.b = std::exp(st.lp13);
            st.c = std::exp(st.lp23);
            const double w = weights.empty() ? r.weight : weights[i];
            contrib[i] = w * contribution(r, st, theta, hazards, grid, design.delayed_entry, ws);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (error.empty()) error = e.what();
            contrib[i] = kNegInf;
        }
    };
    parallel_for(n, threads, body);
    if (!error.empty()) throw std::runtime_error(error);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(contrib[i])) return kNegInf;
        total += contrib[i];
    }
    return total;
}

Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                                 const Eigen::VectorXd& upper) {
    const Eigen::Index d = x.size();
    Eigen::VectorXd g(d);
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double h = std::max(1e-6, 1e-7 * std::abs(x(i)));
        const double xp = std::min(x(i) + h, upper(i));
        const double xm = std::max(x(i) - h, lower(i));
        if (!(xp > xm)) {
            g(i) = 0.0;  // coordinate pinned by equal bounds
            continue;
        }
        probe(i) = xp;
        const double fp = f(probe);
        probe(i) = xm;
        const double fm = f(probe);
        probe(i) = x(i);
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw std::runtime_error("numeric_gradient: non-finite value at probe of coordinate " +
                                     std::to_string(i));
        }
        g(i) = (fp - fm) / (xp - xm);
    }
    return g;
}

}  // namespace fid
