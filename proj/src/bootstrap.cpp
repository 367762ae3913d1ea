#include "frailtyid/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "frailtyid/csv.hpp"
#include "frailtyid/parallel.hpp"

namespace fid {

namespace {

// Spread measures computed around the first draw so that identical
// replicates give exactly zero.
double sample_sd(const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    if (n < 2) return 0.0;
    const double shift = x(0);
    double sum = 0.0, sumsq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = x(i) - shift;
        sum += d;
        sumsq += d * d;
    }
    const double var = (sumsq - sum * sum / double(n)) / double(n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

double mad_scaled(Eigen::VectorXd x) {
    const Eigen::Index n = x.size();
    if (n < 2) return 0.0;
    std::vector<double> v(x.data(), x.data() + n);
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    double med = v[n / 2];
    if (n % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
        med = 0.5 * (med + v[n / 2 - 1]);
    }
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - med);
    std::nth_element(dev.begin(), dev.begin() + n / 2, dev.end());
    double dmed = dev[n / 2];
    if (n % 2 == 0) {
        std::nth_element(dev.begin(), dev.begin() + n / 2 - 1, dev.end());
        dmed = 0.5 * (dmed + dev[n / 2 - 1]);
    }
    return 1.4826 * dmed;
}

}  // namespace

BootstrapResult bootstrap_fit(const Dataset& data, const StudyDesign& design,
                              const FitConfig& fit_config, const BootstrapConfig& boot_config,
                              const FitResult& base) {
    if (boot_config.n_reps < 2) throw std::invalid_argument("bootstrap: n_reps must be >= 2");
    const std::size_t n = data.size();
    const Eigen::Index dim = base.params.size();
    const std::size_t nt = boot_config.hazard_times.size();

    BootstrapResult res;
    res.param_names = parameter_names(data);

    struct Rep {
        bool ok = false;
        Eigen::VectorXd params;
        Eigen::VectorXd h12, h13, h23;
        std::string error;
    };
    std::vector<Rep> reps(boot_config.n_reps);

    auto body = [&](std::size_t b) {
        Rep& rep = reps[b];
        Rng rng(boot_config.seed + b + 1);
        std::vector<double> eta(n);
        for (std::size_t i = 0; i < n; ++i) {
            eta[i] = boot_config.weight_draw ? boot_config.weight_draw(rng)
                                             : rng.exponential(1.0);
        }
        try {
            FitResult fr = fit_weighted(data, design, fit_config, eta, &base.params,
                                        &base.hazards);
            if (!fr.converged) throw std::runtime_error("replicate did not converge");
            rep.params = fr.params.flatten();
            rep.h12.resize(nt);
            rep.h13.resize(nt);
            rep.h23.resize(nt);
            for (std::size_t t = 0; t < nt; ++t) {
                rep.h12(t) = fr.hazards.h12.value(boot_config.hazard_times[t]);
                rep.h13(t) = fr.hazards.h13.value(boot_config.hazard_times[t]);
                rep.h23(t) = fr.hazards.h23.value(boot_config.hazard_times[t]);
            }
            rep.ok = true;
        } catch (const std::exception& e) {
            rep.error = e.what();
        }
    };
    parallel_for(reps.size(), boot_config.threads, body);

    std::size_t n_ok = 0;
    for (const auto& r : reps) {
        if (r.ok) {
            ++n_ok;
        } else {
            ++res.n_failed;
            res.failures.push_back(r.error);
        }
    }
    if (5 * res.n_failed > boot_config.n_reps) {
        throw std::runtime_error("bootstrap: more than 20% of replicates failed (" +
                                 std::to_string(res.n_failed) + " of " +
                                 std::to_string(boot_config.n_reps) + ")");
    }

    res.draws.resize(n_ok, dim);
    res.hazard_draws12.resize(n_ok, nt);
    res.hazard_draws13.resize(n_ok, nt);
    res.hazard_draws23.resize(n_ok, nt);
    std::size_t row = 0;
    for (const auto& r : reps) {
        if (!r.ok) continue;
        res.draws.row(row) = r.params.transpose();
        res.hazard_draws12.row(row) = r.h12.transpose();
        res.hazard_draws13.row(row) = r.h13.transpose();
        res.hazard_draws23.row(row) = r.h23.transpose();
        ++row;
    }

    res.se.resize(dim);
    res.mad.resize(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        res.se(j) = sample_sd(res.draws.col(j));
        res.mad(j) = mad_scaled(res.draws.col(j));
    }
    res.hazard_se12.resize(nt);
    res.hazard_se13.resize(nt);
    res.hazard_se23.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        res.hazard_se12(t) = sample_sd(res.hazard_draws12.col(t));
        res.hazard_se13(t) = sample_sd(res.hazard_draws13.col(t));
        res.hazard_se23(t) = sample_sd(res.hazard_draws23.col(t));
    }
    return res;
}

void BootstrapResult::write_draws_csv(const std::string& path) const {
    CsvWriter out(path, {"replicate", "param", "value"});
    for (Eigen::Index b = 0; b < draws.rows(); ++b) {
        for (Eigen::Index j = 0; j < draws.cols(); ++j) {
            out.row({std::to_string(b + 1), param_names[j], format_double(draws(b, j))});
        }
    }
}

}  // namespace fid
