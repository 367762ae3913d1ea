#include "frailtyid/cox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "frailtyid/csv.hpp"

namespace fid {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    const double pos = q * double(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - double(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

CoxData encode_cox(const Dataset& data, const CoxSpec& spec) {
    const auto& recs = data.records();
    CoxData cd;
    if (spec.transition != Transition::DeathAfterIllness && spec.extra != CoxExtra::None) {
        throw std::invalid_argument("cox: extra covariates only apply to the 2->3 transition");
    }
    const bool use_entry_age = spec.truncation == CoxTruncation::EntryAge ||
                               spec.truncation == CoxTruncation::EntryAndDiagnosis;

    if (spec.transition == Transition::DeathAfterIllness) {
        // diseased subjects only; exit W, event delta3
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            if (recs[i].delta1 && !recs[i].delta2) rows.push_back(i);
        }
        std::vector<double> v_sorted;
        for (auto i : rows) v_sorted.push_back(recs[i].V);
        std::sort(v_sorted.begin(), v_sorted.end());
        double mean = 0.0, sd = 1.0;
        if (!rows.empty()) {
            mean = 0.0;
            for (auto i : rows) mean += recs[i].V;
            mean /= double(rows.size());
            double ss = 0.0;
            for (auto i : rows) ss += (recs[i].V - mean) * (recs[i].V - mean);
            sd = rows.size() > 1 ? std::sqrt(ss / double(rows.size() - 1)) : 1.0;
            if (!(sd > 0.0)) sd = 1.0;
        }
        cd.v_mean = mean;
        cd.v_sd = sd;
        int n_extra = 0;
        if (spec.extra == CoxExtra::ScaledV) n_extra = 1;
        if (spec.extra == CoxExtra::TruncatedSplineV) {
            n_extra = 4;
            cd.v_knots = {quantile_sorted(v_sorted, 0.25), quantile_sorted(v_sorted, 0.50),
                          quantile_sorted(v_sorted, 0.75)};
        }
        const Eigen::Index p = data.Z23().cols();
        cd.design.resize(rows.size(), p + n_extra);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto i = rows[r];
            cd.design.row(r).head(p) = data.Z23().row(i);
            const double sv = (recs[i].V - mean) / sd;
            if (spec.extra == CoxExtra::ScaledV) {
                cd.design(r, p) = sv;
            } else if (spec.extra == CoxExtra::TruncatedSplineV) {
                cd.design(r, p) = sv;
                for (int k = 0; k < 3; ++k) {
                    const double knot = (cd.v_knots[k] - mean) / sd;
                    cd.design(r, p + 1 + k) = std::max(sv - knot, 0.0);
                }
            }
            const auto& rec = recs[i];
            cd.exit.push_back(rec.W);
            cd.event.push_back(rec.delta3);
            cd.weight.push_back(rec.weight);
            double entry = rec.V;
            if (spec.truncation == CoxTruncation::EntryAndDiagnosis && rec.R.has_value()) {
                entry = std::max(entry, *rec.R);
            }
            cd.entry.push_back(spec.truncation == CoxTruncation::None ? kNegInf : entry);
        }
        return cd;
    }

    // 1->2 or 1->3: exit V, event delta1 or delta2, optional entry-age risk sets
    const bool is12 = spec.transition == Transition::Illness;
    const Eigen::MatrixXd& Z = is12 ? data.Z12() : data.Z13();
    cd.design.resize(recs.size(), Z.cols());
    std::size_t kept = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& rec = recs[i];
        if (use_entry_age && rec.prevalent()) continue;  // never in any risk set
        cd.design.row(kept++) = Z.row(i);
        cd.exit.push_back(rec.V);
        cd.event.push_back(is12 ? rec.delta1 : rec.delta2);
        cd.weight.push_back(rec.weight);
        cd.entry.push_back(use_entry_age ? rec.R.value_or(kNegInf) : kNegInf);
    }
    cd.design.conservativeResize(kept, Eigen::NoChange);
    return cd;
}

void cox_score_and_info(const CoxData& cd, const Eigen::VectorXd& beta, Eigen::VectorXd& score,
                        Eigen::MatrixXd& info, double& loglik) {
    const std::size_t n = cd.exit.size();
    const Eigen::Index p = cd.design.cols();
    score.setZero(p);
    info.setZero(p, p);
    loglik = 0.0;
    Eigen::VectorXd lp = cd.design * beta;

    // distinct event times with tied weighted stats
    std::map<double, std::pair<double, Eigen::VectorXd>> events;  // t -> (sum w, sum w z)
    std::map<double, double> event_lp;                            // t -> sum w lp
    for (std::size_t i = 0; i < n; ++i) {
        if (!cd.event[i]) continue;
        auto [it, inserted] = events.try_emplace(cd.exit[i], 0.0, Eigen::VectorXd::Zero(p));
        it->second.first += cd.weight[i];
        it->second.second += cd.weight[i] * cd.design.row(i).transpose();
        event_lp[cd.exit[i]] += cd.weight[i] * lp(i);
    }

    // Sweep event times in decreasing order; subjects join the risk-set
    // accumulators when t drops to their exit and leave below their entry.
    std::vector<std::size_t> by_exit(n), by_entry(n);
    for (std::size_t i = 0; i < n; ++i) by_exit[i] = by_entry[i] = i;
    std::sort(by_exit.begin(), by_exit.end(),
              [&](std::size_t a, std::size_t b) { return cd.exit[a] > cd.exit[b]; });
    std::sort(by_entry.begin(), by_entry.end(),
              [&](std::size_t a, std::size_t b) { return cd.entry[a] > cd.entry[b]; });

    double s0 = 0.0;
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);
    std::size_t padd = 0, prem = 0;
    auto apply = [&](std::size_t j, double sign) {
        const double r = sign * cd.weight[j] * std::exp(lp(j));
        s0 += r;
        s1 += r * cd.design.row(j).transpose();
        s2.selfadjointView<Eigen::Lower>().rankUpdate(cd.design.row(j).transpose(), r);
    };

    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        const double t = it->first;
        while (padd < n && cd.exit[by_exit[padd]] >= t) apply(by_exit[padd++], 1.0);
        while (prem < n && cd.entry[by_entry[prem]] > t) apply(by_entry[prem++], -1.0);
        if (!(s0 > 0.0)) throw std::runtime_error("cox: empty risk set at an event time");
        Eigen::MatrixXd s2full = s2.selfadjointView<Eigen::Lower>();
        const Eigen::VectorXd zbar = s1 / s0;
        const double wsum = it->second.first;
        loglik += event_lp[t] - wsum * std::log(s0);
        score += it->second.second - wsum * zbar;
        info += wsum * (s2full / s0 - zbar * zbar.transpose());
    }
}

CoxFit cox_fit(const Dataset& data, const CoxSpec& spec) {
    CoxData cd = encode_cox(data, spec);
    const Eigen::Index p = cd.design.cols();
    CoxFit fit;
    fit.v_mean = cd.v_mean;
    fit.v_sd = cd.v_sd;
    fit.v_knots = cd.v_knots;
    fit.beta.setZero(p);

    Eigen::VectorXd score(p);
    Eigen::MatrixXd info(p, p);
    double ll = 0.0;
    cox_score_and_info(cd, fit.beta, score, info, ll);
    for (int it = 0; it < 50; ++it) {
        fit.iterations = it;
        if (score.cwiseAbs().maxCoeff() < 1e-8) break;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            throw std::runtime_error("cox: singular information matrix");
        }
        Eigen::VectorXd step = ldlt.solve(score);
        double scale = 1.0;
        Eigen::VectorXd beta_new;
        double ll_new = 0.0;
        Eigen::VectorXd score_new(p);
        Eigen::MatrixXd info_new(p, p);
        bool ok = false;
        for (int half = 0; half < 30; ++half) {
            beta_new = fit.beta + scale * step;
            cox_score_and_info(cd, beta_new, score_new, info_new, ll_new);
            if (std::isfinite(ll_new) && ll_new >= ll - 1e-12) {
                ok = true;
                break;
            }
            scale *= 0.5;
        }
        if (!ok) throw std::runtime_error("cox: step halving failed");
        fit.beta = beta_new;
        score = score_new;
        info = info_new;
        ll = ll_new;
        if (fit.beta.cwiseAbs().maxCoeff() > 15.0) {
            throw std::runtime_error(
                "cox: coefficient diverging, monotone partial likelihood suspected");
        }
    }
    if (score.cwiseAbs().maxCoeff() >= 1e-8) {
        throw std::runtime_error("cox: Newton-Raphson failed to converge");
    }
    fit.log_partial_lik = ll;
    fit.info = info;

    // Breslow baseline with direct per-event-time denominators.
    Eigen::VectorXd lp = cd.design * fit.beta;
    std::map<double, double> counts;
    for (std::size_t i = 0; i < cd.exit.size(); ++i) {
        if (cd.event[i]) counts[cd.exit[i]] += cd.weight[i];
    }
    std::vector<double> times, jumps;
    for (const auto& [t, cnt] : counts) {
        double s0 = 0.0;
        for (std::size_t j = 0; j < cd.exit.size(); ++j) {
            if (cd.entry[j] <= t && t <= cd.exit[j]) s0 += cd.weight[j] * std::exp(lp(j));
        }
        times.push_back(t);
        jumps.push_back(cnt / s0);
    }
    fit.baseline = StepHazard(std::move(times), std::move(jumps));
    return fit;
}

void write_cox_csv(const std::string& path, const CoxFit& fit,
                   const std::vector<std::string>& term_names) {
    if (static_cast<Eigen::Index>(term_names.size()) != fit.beta.size()) {
        throw std::invalid_argument("write_cox_csv: term name count mismatch");
    }
    Eigen::MatrixXd cov = fit.info.ldlt().solve(
        Eigen::MatrixXd::Identity(fit.info.rows(), fit.info.cols()));
    CsvWriter out(path, {"term", "estimate", "se"});
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
        out.row({term_names[j], format_double(fit.beta(j)), format_double(std::sqrt(cov(j, j)))});
    }
}

}  // namespace fid
