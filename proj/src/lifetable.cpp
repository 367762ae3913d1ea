#include "frailtyid/lifetable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "frailtyid/csv.hpp"

namespace fid {

namespace {

Eigen::ArrayXd make_grid(double c_L, int kappa) {
    if (!(c_L > 0.0) || kappa < 1) throw std::invalid_argument("lifetable: bad grid spec");
    Eigen::ArrayXd g(kappa);
    for (int j = 0; j < kappa; ++j) g(j) = c_L * double(j + 1) / double(kappa);
    return g;
}

}  // namespace

LifeTable LifeTable::from_csv(const std::string& path, double c_L, int kappa) {
    CsvReader in(path);
    in.require_header({"age", "hazard"});
    std::vector<double> age, haz;
    std::vector<std::string> cells;
    while (in.next(cells)) {
        const std::string ctx = path + ":" + std::to_string(in.line_number());
        age.push_back(parse_double(cells[0], ctx));
        haz.push_back(parse_double(cells[1], ctx));
        if (haz.back() < 0.0) throw std::runtime_error(ctx + ": negative hazard");
        if (age.size() > 1 && age[age.size() - 2] >= age.back()) {
            throw std::runtime_error(ctx + ": ages must be strictly increasing");
        }
    }
    if (age.empty()) throw std::runtime_error(path + ": empty life table");
    LifeTable lt;
    lt.grid = make_grid(c_L, kappa);
    lt.marginal_hazard.resize(kappa);
    for (int j = 0; j < kappa; ++j) {
        const double t = lt.grid(j);
        // linear interpolation, flat extrapolation at the ends
        auto it = std::lower_bound(age.begin(), age.end(), t);
        if (it == age.begin()) {
            lt.marginal_hazard(j) = haz.front();
        } else if (it == age.end()) {
            lt.marginal_hazard(j) = haz.back();
        } else {
            const std::size_t hi = static_cast<std::size_t>(it - age.begin());
            const double frac = (t - age[hi - 1]) / (age[hi] - age[hi - 1]);
            lt.marginal_hazard(j) = haz[hi - 1] * (1.0 - frac) + haz[hi] * frac;
        }
    }
    return lt;
}

LifeTable LifeTable::from_function(const std::function<double(double)>& fn, double c_L,
                                   int kappa) {
    LifeTable lt;
    lt.grid = make_grid(c_L, kappa);
    lt.marginal_hazard.resize(kappa);
    for (int j = 0; j < kappa; ++j) {
        lt.marginal_hazard(j) = fn(lt.grid(j));
        if (lt.marginal_hazard(j) < 0.0) throw std::invalid_argument("lifetable: negative hazard");
    }
    return lt;
}

void LifeTable::write_csv(const std::string& path) const {
    CsvWriter out(path, {"age", "hazard"});
    for (int j = 0; j < kappa(); ++j) out.row_doubles({grid(j), marginal_hazard(j)});
}

StepHazard calibrate_h013(const LifeTable& table, const Eigen::VectorXd& gamma13,
                          const Eigen::MatrixXd& Z13, std::span<const double> weights) {
    const Eigen::Index n = Z13.rows();
    if (n == 0) throw std::invalid_argument("calibrate_h013: empty covariate sample");
    if ((table.marginal_hazard < 0.0).any()) {
        throw std::invalid_argument("calibrate_h013: negative table hazard");
    }
    Eigen::ArrayXd e = (Z13 * gamma13).array().exp();
    Eigen::ArrayXd w = Eigen::ArrayXd::Ones(n);
    if (!weights.empty()) {
        if (static_cast<Eigen::Index>(weights.size()) != n) {
            throw std::invalid_argument("calibrate_h013: weight size mismatch");
        }
        for (Eigen::Index i = 0; i < n; ++i) w(i) = weights[i];
    }
    const int kappa = table.kappa();
    const double step = table.c_L() / double(kappa);
    std::vector<double> times(kappa), jumps(kappa);
    double H = 0.0;
    Eigen::ArrayXd surv(n);
    for (int j = 0; j < kappa; ++j) {
        surv = (-H * e).exp();
        const double num = (w * surv).sum();
        const double den = (w * e * surv).sum();
        const double h = table.marginal_hazard(j) * num / den;
        times[j] = table.grid(j);
        jumps[j] = step * h;
        H += step * h;
    }
    return StepHazard(std::move(times), std::move(jumps));
}

}  // namespace fid
