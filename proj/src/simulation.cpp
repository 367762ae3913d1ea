#include "frailtyid/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "frailtyid/bootstrap.hpp"
#include "frailtyid/cox.hpp"
#include "frailtyid/csv.hpp"
#include "frailtyid/parallel.hpp"
#include "frailtyid/published.hpp"
#include "frailtyid/rng.hpp"

namespace fid {

// ---- piecewise-constant baselines -----------------------------------------

double PiecewiseHazard::rate_at(double t) const {
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    if (it == knots.begin()) return 0.0;
    return rates[static_cast<std::size_t>(it - knots.begin()) - 1];
}

double PiecewiseHazard::cum(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double lo = knots[i];
        if (t <= lo) break;
        const double hi = (i + 1 < knots.size()) ? std::min(knots[i + 1], t) : t;
        acc += rates[i] * (hi - lo);
    }
    return acc;
}

double PiecewiseHazard::inverse_cum(double H) const {
    if (H <= 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double lo = knots[i];
        const bool last = i + 1 == knots.size();
        const double len = last ? std::numeric_limits<double>::infinity() : knots[i + 1] - lo;
        const double seg = rates[i] * len;
        if (H - acc <= seg || (last && rates[i] > 0.0)) {
            if (rates[i] <= 0.0) {
                acc += 0.0;
                continue;  // flat segment, move on
            }
            return lo + (H - acc) / rates[i];
        }
        acc += seg;
    }
    return std::numeric_limits<double>::infinity();
}

std::string PiecewiseHazard::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i) os << ' ';
        os << format_double(knots[i]) << ':' << format_double(rates[i]);
    }
    return os.str();
}

PiecewiseHazard PiecewiseHazard::parse(const std::string& text) {
    PiecewiseHazard h;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
            throw std::runtime_error("bad piecewise hazard token '" + tok + "'");
        }
        h.knots.push_back(parse_double(tok.substr(0, colon), "piecewise hazard"));
        h.rates.push_back(parse_double(tok.substr(colon + 1), "piecewise hazard"));
        if (h.rates.back() < 0.0) throw std::runtime_error("negative piecewise hazard rate");
        if (h.knots.size() > 1 && h.knots[h.knots.size() - 2] >= h.knots.back()) {
            throw std::runtime_error("piecewise hazard knots must increase");
        }
    }
    if (h.knots.empty() || h.knots.front() != 0.0) {
        throw std::runtime_error("piecewise hazard must start at knot 0");
    }
    return h;
}

// ---- scenario config -------------------------------------------------------

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::runtime_error("scenario field '" + field + "': " + why);
    };
    if (n == 0) fail("n", "must be positive");
    if (theta_true < 0.0) fail("theta", "must be nonnegative");
    const Eigen::Index p = gamma12.size();
    if (p == 0) fail("gamma12", "missing");
    if (gamma13.size() != p) fail("gamma13", "dimension differs from gamma12");
    if (gamma23.size() != p) fail("gamma23", "dimension differs from gamma12");
    if (h012.knots.empty()) fail("h012", "missing");
    if (h013.knots.empty()) fail("h013", "missing");
    if (h023.knots.empty()) fail("h023", "missing");
    if (censor_rate <= 0.0) fail("censor_rate", "must be positive");
    if (admin_censor_time <= 0.0) fail("admin_censor", "must be positive");
    if (delayed_entry) {
        if (!(c_L < c_U)) fail("c_U", "required and must exceed c_L under delayed entry");
        if (!(c_U < admin_censor_time)) fail("c_U", "must be below the administrative horizon");
        if (c_L < 0.0) fail("c_L", "must be nonnegative");
    }
    if (oversample < 1.0) fail("oversample", "must be >= 1");
}

namespace {

Eigen::VectorXd parse_vector(const std::string& text) {
    std::istringstream is(text);
    std::vector<double> vals;
    std::string tok;
    while (is >> tok) vals.push_back(parse_double(tok, "vector"));
    Eigen::VectorXd v(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
    return v;
}

std::string vector_to_string(const Eigen::VectorXd& v) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << format_double(v(i));
    }
    return os.str();
}

}  // namespace

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    ScenarioConfig sc;
    std::string line;
    std::size_t lineno = 0;
    bool have_cu = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'key = value'");
        }
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
        val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
        try {
            if (key == "n") {
                sc.n = static_cast<std::size_t>(parse_double(val, key));
            } else if (key == "theta") {
                sc.theta_true = parse_double(val, key);
            } else if (key == "gamma12") {
                sc.gamma12 = parse_vector(val);
            } else if (key == "gamma13") {
                sc.gamma13 = parse_vector(val);
            } else if (key == "gamma23") {
                sc.gamma23 = parse_vector(val);
            } else if (key == "h012") {
                sc.h012 = PiecewiseHazard::parse(val);
            } else if (key == "h013") {
                sc.h013 = PiecewiseHazard::parse(val);
            } else if (key == "h023") {
                sc.h023 = PiecewiseHazard::parse(val);
            } else if (key == "censor_rate") {
                sc.censor_rate = parse_double(val, key);
            } else if (key == "admin_censor") {
                sc.admin_censor_time = parse_double(val, key);
            } else if (key == "delayed_entry") {
                sc.delayed_entry = (val == "true" || val == "1");
            } else if (key == "c_l") {
                sc.c_L = parse_double(val, key);
            } else if (key == "c_u") {
                sc.c_U = parse_double(val, key);
                have_cu = true;
            } else if (key == "seed") {
                sc.seed = static_cast<std::uint64_t>(parse_double(val, key));
            } else if (key == "oversample") {
                sc.oversample = parse_double(val, key);
            } else {
                throw std::runtime_error("unknown key '" + key + "'");
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (sc.delayed_entry && !have_cu) {
        throw std::runtime_error(path + ": scenario field 'c_u': required with delayed_entry");
    }
    sc.validate();
    return sc;
}

void ScenarioConfig::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "n = " << n << "\n";
    out << "theta = " << format_double(theta_true) << "\n";
    out << "gamma12 = " << vector_to_string(gamma12) << "\n";
    out << "gamma13 = " << vector_to_string(gamma13) << "\n";
    out << "gamma23 = " << vector_to_string(gamma23) << "\n";
    out << "h012 = " << h012.to_string() << "\n";
    out << "h013 = " << h013.to_string() << "\n";
    out << "h023 = " << h023.to_string() << "\n";
    out << "censor_rate = " << format_double(censor_rate) << "\n";
    out << "admin_censor = " << format_double(admin_censor_time) << "\n";
    out << "delayed_entry = " << (delayed_entry ? "true" : "false") << "\n";
    out << "c_l = " << format_double(c_L) << "\n";
    out << "c_u = " << format_double(c_U) << "\n";
    out << "seed = " << seed << "\n";
    out << "oversample = " << format_double(oversample) << "\n";
}

// ---- event-time sampling ---------------------------------------------------

namespace {

// Merged segment boundaries of the two healthy-state baselines.
std::vector<double> merged_knots(const PiecewiseHazard& x, const PiecewiseHazard& y) {
    std::vector<double> k;
    std::merge(x.knots.begin(), x.knots.end(), y.knots.begin(), y.knots.end(),
               std::back_inserter(k));
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

// Solves A_1k(T) = target for the healthy-state transitions; the conditional
// cumulative hazard Q(s) = a H_012(s) + b H_013(s) is piecewise linear with
// slope lambda = a r12 + b r13 per segment, making each segment's integral
// elementary.
double solve_1k(const ScenarioConfig& sc, double target, double a, double b, bool is12,
                double theta) {
    const bool indep = theta < kThetaIndependence;
    const std::vector<double> kn = merged_knots(sc.h012, sc.h013);
    double Q0 = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < kn.size(); ++i) {
        const double s0 = kn[i];
        const bool last = i + 1 == kn.size();
        const double len = last ? std::numeric_limits<double>::infinity() : kn[i + 1] - s0;
        const double r12 = sc.h012.rate_at(s0);
        const double r13 = sc.h013.rate_at(s0);
        const double rk = is12 ? r12 : r13;
        const double kappa = is12 ? a : b;
        const double lambda = a * r12 + b * r13;
        double seg;  // increment of A_1k over the full segment
        if (rk <= 0.0) {
            seg = 0.0;
        } else if (indep || lambda <= 0.0) {
            seg = kappa * rk * len;
        } else {
            seg = kappa * rk / (theta * lambda) * std::exp(theta * Q0) *
                  (std::isinf(len) ? std::numeric_limits<double>::infinity()
                                   : std::expm1(theta * lambda * len));
        }
        const double rem = target - acc;
        if (rem <= seg && rk > 0.0) {
            if (indep) return s0 + rem / (kappa * rk);
            return s0 + std::log1p(rem * theta * lambda * std::exp(-theta * Q0) / (kappa * rk)) /
                            (theta * lambda);
        }
        acc += seg;
        if (!last) Q0 += lambda * len;
    }
    return std::numeric_limits<double>::infinity();
}

double a23_closed(const ScenarioConfig& sc, double t, double c, double theta) {
    const double H = sc.h023.cum(t);
    if (theta < kThetaIndependence) return c * H;
    const double rho = theta / (1.0 + theta);
    return std::expm1(rho * c * H) / theta;
}

double solve_23(const ScenarioConfig& sc, double target, double c, double theta) {
    double Htarget;
    if (theta < kThetaIndependence) {
        Htarget = target / c;
    } else {
        const double rho = theta / (1.0 + theta);
        Htarget = std::log1p(theta * target) / (rho * c);
    }
    return sc.h023.inverse_cum(Htarget);
}

}  // namespace

double sample_event_time(Transition tr, double omega, const Eigen::VectorXd& Z,
                         const ScenarioConfig& scenario, std::optional<double> lower_bound,
                         double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("sample_event_time: u must be in (0,1)");
    if (!(omega > 0.0)) throw std::domain_error("sample_event_time: omega must be positive");
    const double theta = scenario.theta_true;
    const double y = -std::log(u) / omega;
    switch (tr) {
        case Transition::Illness:
        case Transition::DeathHealthy: {
            const double a = std::exp(scenario.gamma12.dot(Z));
            const double b = std::exp(scenario.gamma13.dot(Z));
            return solve_1k(scenario, y, a, b, tr == Transition::Illness, theta);
        }
        case Transition::DeathAfterIllness: {
            const double c = std::exp(scenario.gamma23.dot(Z));
            const double base = lower_bound ? a23_closed(scenario, *lower_bound, c, theta) : 0.0;
            const double t = solve_23(scenario, base + y, c, theta);
            return lower_bound ? std::max(t, *lower_bound) : t;
        }
    }
    throw std::logic_error("sample_event_time: bad transition");
}

// ---- cohort generation -----------------------------------------------------

Cohort generate_cohort(const ScenarioConfig& sc) {
    sc.validate();
    Rng rng(sc.seed);
    const Eigen::Index p = sc.n_covariates();
    const bool indep = sc.theta_true < kThetaIndependence;

    Cohort out;
    out.truth.reserve(sc.n);
    std::vector<SubjectRecord> recs;
    recs.reserve(sc.n);

    const std::size_t pool =
        sc.delayed_entry ? static_cast<std::size_t>(std::ceil(sc.oversample * double(sc.n)))
                         : sc.n;
    std::size_t accepted = 0;
    for (std::size_t cand = 0; cand < pool && accepted < sc.n; ++cand) {
        LatentRecord lat;
        lat.omega = indep ? 1.0 : rng.gamma(1.0 / sc.theta_true, sc.theta_true);
        Eigen::VectorXd Z(p);
        for (Eigen::Index j = 0; j < p; ++j) Z(j) = rng.uniform();
        lat.T1 = sample_event_time(Transition::Illness, lat.omega, Z, sc, std::nullopt,
                                   rng.uniform());
        lat.T2_latent = sample_event_time(Transition::DeathHealthy, lat.omega, Z, sc, std::nullopt,
                                          rng.uniform());
        const bool diseased = lat.T1 < lat.T2_latent;
        lat.T2_final = diseased ? sample_event_time(Transition::DeathAfterIllness, lat.omega, Z,
                                                    sc, lat.T1, rng.uniform())
                                : lat.T2_latent;
        lat.R = sc.delayed_entry ? rng.uniform(sc.c_L, sc.c_U) : 0.0;
        if (sc.delayed_entry && lat.T2_final <= lat.R) continue;  // dead before recruitment
        ++accepted;
        // censoring clock runs from recruitment; administrative horizon in age
        lat.C = std::min(lat.R + rng.exponential(sc.censor_rate), sc.admin_censor_time);

        SubjectRecord r;
        r.Z = Z;
        if (sc.delayed_entry) r.R = lat.R;
        if (lat.T1 < std::min(lat.T2_latent, lat.C)) {
            r.delta1 = true;
            r.V = lat.T1;
            r.W = std::min(lat.T2_final, lat.C);
            r.delta3 = lat.T2_final <= lat.C;
        } else if (lat.T2_latent < std::min(lat.T1, lat.C)) {
            r.delta2 = true;
            r.V = lat.T2_latent;
            r.W = 0.0;
        } else {
            r.V = lat.C;
            r.W = 0.0;
        }
        recs.push_back(std::move(r));
        out.truth.push_back(lat);
    }
    if (accepted < sc.n) {
        throw std::runtime_error(
            "generate_cohort: acceptance pool exhausted (" + std::to_string(accepted) + " of " +
            std::to_string(sc.n) + " accepted); raise the oversample factor");
    }
    out.data = Dataset(std::move(recs));
    return out;
}

void write_truth_csv(const std::string& path, const std::vector<LatentRecord>& truth) {
    CsvWriter out(path, {"T1", "T2", "omega"});
    for (const auto& l : truth) out.row_doubles({l.T1, l.T2_latent, l.omega});
}

// ---- scenario-implied life table -------------------------------------------

namespace {

// Gauss-Legendre nodes/weights on [0, 1] by Newton iteration on P_n.
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = 0.5 * (x + 1.0);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace

LifeTable true_lifetable(const ScenarioConfig& sc, int kappa) {
    std::vector<int> active;
    for (Eigen::Index j = 0; j < sc.gamma13.size(); ++j) {
        if (sc.gamma13(j) != 0.0) active.push_back(int(j));
    }
    const int dims = int(active.size());
    const int n_nodes = dims <= 2 ? 32 : 12;
    std::vector<double> nodes, weights;
    gauss_legendre_01(n_nodes, nodes, weights);

    // enumerate the tensor grid of exp(g) values and weights once
    std::vector<double> eg, wt;
    const std::size_t total = dims == 0 ? 1 : std::size_t(std::pow(n_nodes, dims));
    eg.reserve(total);
    wt.reserve(total);
    std::vector<int> idx(std::max(dims, 1), 0);
    for (std::size_t c = 0; c < total; ++c) {
        double g = 0.0, w = 1.0;
        std::size_t rem = c;
        for (int d = 0; d < dims; ++d) {
            const int i = int(rem % n_nodes);
            rem /= n_nodes;
            g += sc.gamma13(active[d]) * nodes[i];
            w *= weights[i];
        }
        eg.push_back(std::exp(g));
        wt.push_back(w);
    }

    return LifeTable::from_function(
        [&](double t) {
            const double H = sc.h013.cum(t);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < eg.size(); ++i) {
                const double s = wt[i] * std::exp(-H * eg[i]);
                num += s * eg[i];
                den += s;
            }
            return sc.h013.rate_at(t) * num / den;
        },
        sc.c_L, kappa);
}

// ---- replicate studies ------------------------------------------------------

namespace {

void summarize(SummaryCell& cell) {
    const auto& d = cell.draws;
    cell.n = int(d.size());
    if (d.empty()) return;
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= double(d.size());
    cell.mean = mean;
    if (d.size() > 1) {
        double ss = 0.0;
        for (double x : d) ss += (x - mean) * (x - mean);
        cell.esd = std::sqrt(ss / double(d.size() - 1));
    }
}

struct RepOutcome {
    bool ok_proposed = false;
    bool ok_cox = false;
    std::map<std::string, double> proposed;
    std::map<std::string, double> proposed_se;
    std::map<std::string, double> cox;
    std::string error;
};

}  // namespace

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("kendall_tau: bad input");
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = (x[i] - x[j]) * (y[i] - y[j]);
            if (s > 0.0) {
                ++concordant;
            } else if (s < 0.0) {
                ++discordant;
            }
        }
    }
    const double total = 0.5 * double(n) * double(n - 1);
    return double(concordant - discordant) / total;
}

StudyResult replicate_study(const ScenarioConfig& scenario, const StudyOptions& opts) {
    scenario.validate();
    StudyResult result;
    std::vector<RepOutcome> reps(opts.n_reps);

    LifeTable lt;
    const bool use_lt = scenario.delayed_entry && opts.use_lifetable;
    if (use_lt) lt = true_lifetable(scenario);

    StudyDesign design;
    design.delayed_entry = scenario.delayed_entry;
    design.c_L = scenario.c_L;
    design.c_U = scenario.c_U;
    design.tau = scenario.admin_censor_time;

    auto run_rep = [&](std::size_t rep) {
        RepOutcome& out = reps[rep];
        ScenarioConfig sc = scenario;
        sc.seed = scenario.seed + rep;
        Cohort cohort;
        try {
            cohort = generate_cohort(sc);
        } catch (const std::exception& e) {
            out.error = std::string("generation: ") + e.what();
            return;
        }

        if (opts.run_proposed) {
            try {
                FitConfig fc = opts.fit_config;
                fc.lifetable = use_lt ? &lt : nullptr;
                FitResult fr;
                if (opts.subsample.has_value()) {
                    SubsampleConfig ss = *opts.subsample;
                    ss.seed = sc.seed + 777;
                    fr = fit_with_subsample(cohort.data, design, fc, ss);
                } else {
                    fr = fit(cohort.data, design, fc);
                }
                const Eigen::VectorXd flat = fr.params.flatten();
                const auto names = parameter_names(cohort.data);
                for (Eigen::Index j = 0; j < flat.size(); ++j) out.proposed[names[j]] = flat(j);
                for (double t : opts.hazard_times) {
                    out.proposed["H012@" + format_double(t)] = fr.hazards.h12.value(t);
                    out.proposed["H013@" + format_double(t)] = fr.hazards.h13.value(t);
                    out.proposed["H023@" + format_double(t)] = fr.hazards.h23.value(t);
                }
                if (opts.bootstrap_reps > 0) {
                    BootstrapConfig bc;
                    bc.n_reps = opts.bootstrap_reps;
                    bc.seed = sc.seed + 424242;
                    bc.hazard_times = opts.hazard_times;
                    BootstrapResult br = bootstrap_fit(cohort.data, design, fc, bc, fr);
                    for (Eigen::Index j = 0; j < flat.size(); ++j) {
                        out.proposed_se[names[j]] = br.se(j);
                    }
                    for (std::size_t ti = 0; ti < opts.hazard_times.size(); ++ti) {
                        const std::string t = format_double(opts.hazard_times[ti]);
                        out.proposed_se["H012@" + t] = br.hazard_se12(ti);
                        out.proposed_se["H013@" + t] = br.hazard_se13(ti);
                        out.proposed_se["H023@" + t] = br.hazard_se23(ti);
                    }
                }
                out.ok_proposed = true;
            } catch (const std::exception& e) {
                out.error = std::string("proposed: ") + e.what();
            }
        }

        if (opts.run_cox) {
            try {
                CoxSpec s12{Transition::Illness, CoxExtra::None,
                            scenario.delayed_entry ? CoxTruncation::EntryAge : CoxTruncation::None};
                CoxSpec s13{Transition::DeathHealthy, CoxExtra::None,
                            scenario.delayed_entry ? CoxTruncation::EntryAge : CoxTruncation::None};
                CoxSpec s23{Transition::DeathAfterIllness, CoxExtra::None,
                            CoxTruncation::EntryAndDiagnosis};
                CoxFit f12 = cox_fit(cohort.data, s12);
                CoxFit f13 = cox_fit(cohort.data, s13);
                CoxFit f23 = cox_fit(cohort.data, s23);
                for (Eigen::Index j = 0; j < f12.beta.size(); ++j) {
                    out.cox["g12_" + std::to_string(j + 1)] = f12.beta(j);
                }
                for (Eigen::Index j = 0; j < f13.beta.size(); ++j) {
                    out.cox["g13_" + std::to_string(j + 1)] = f13.beta(j);
                }
                for (Eigen::Index j = 0; j < f23.beta.size(); ++j) {
                    out.cox["g23_" + std::to_string(j + 1)] = f23.beta(j);
                }
                for (double t : opts.hazard_times) {
                    out.cox["H012@" + format_double(t)] = f12.baseline.value(t);
                    out.cox["H013@" + format_double(t)] = f13.baseline.value(t);
                    out.cox["H023@" + format_double(t)] = f23.baseline.value(t);
                }
                out.ok_cox = true;
            } catch (const std::exception& e) {
                out.error += std::string(" cox: ") + e.what();
            }
        }
    };

    parallel_for(std::size_t(opts.n_reps), opts.threads, run_rep);

    // truth values for coverage
    std::map<std::string, double> truth;
    {
        Eigen::VectorXd flat(scenario.gamma12.size() + scenario.gamma13.size() +
                             scenario.gamma23.size() + 1);
        flat << scenario.gamma12, scenario.gamma13, scenario.gamma23, scenario.theta_true;
        std::vector<std::string> names;
        for (Eigen::Index j = 0; j < scenario.gamma12.size(); ++j)
            names.push_back("g12_" + std::to_string(j + 1));
        for (Eigen::Index j = 0; j < scenario.gamma13.size(); ++j)
            names.push_back("g13_" + std::to_string(j + 1));
        for (Eigen::Index j = 0; j < scenario.gamma23.size(); ++j)
            names.push_back("g23_" + std::to_string(j + 1));
        names.push_back("theta");
        for (Eigen::Index j = 0; j < flat.size(); ++j) truth[names[j]] = flat(j);
        for (double t : opts.hazard_times) {
            truth["H012@" + format_double(t)] = scenario.h012.cum(t);
            truth["H013@" + format_double(t)] = scenario.h013.cum(t);
            truth["H023@" + format_double(t)] = scenario.h023.cum(t);
        }
    }

    std::map<std::string, int> covered, cover_n;
    std::map<std::string, std::vector<double>> ses;
    for (const auto& rep : reps) {
        if (!rep.error.empty()) result.failure_messages.push_back(rep.error);
        if (rep.ok_proposed) {
            for (const auto& [k, v] : rep.proposed) result.proposed[k].draws.push_back(v);
            for (const auto& [k, se] : rep.proposed_se) {
                ses[k].push_back(se);
                const double est = rep.proposed.at(k);
                const double tr = truth.count(k) ? truth.at(k) : 0.0;
                cover_n[k] += 1;
                if (std::abs(est - tr) <= 1.959963984540054 * se) covered[k] += 1;
            }
        } else if (opts.run_proposed) {
            ++result.failures_proposed;
        }
        if (rep.ok_cox) {
            for (const auto& [k, v] : rep.cox) result.cox[k].draws.push_back(v);
        } else if (opts.run_cox) {
            ++result.failures_cox;
        }
    }
    for (auto& [k, cell] : result.proposed) {
        summarize(cell);
        if (ses.count(k)) {
            double m = 0.0;
            for (double s : ses[k]) m += s;
            cell.boot_se = m / double(ses[k].size());
            cell.coverage = double(covered[k]) / double(cover_n[k]);
        }
    }
    for (auto& [k, cell] : result.cox) summarize(cell);
    return result;
}

void write_study_csv(const std::string& path, const StudyResult& r, const ScenarioConfig& sc,
                     const std::string& table_id) {
    CsvWriter out(path, {"estimator", "quantity", "mean", "esd", "boot_se", "coverage", "n_ok",
                         "published_mean", "published_esd"});
    auto emit = [&](const std::string& est, const std::map<std::string, SummaryCell>& cells) {
        for (const auto& [q, cell] : cells) {
            std::vector<std::string> row(9);
            row[0] = est;
            row[1] = q;
            row[2] = format_double(cell.mean);
            row[3] = format_double(cell.esd);
            row[4] = cell.boot_se > 0.0 ? format_double(cell.boot_se) : "";
            row[5] = cell.coverage >= 0.0 ? format_double(cell.coverage) : "";
            row[6] = std::to_string(cell.n);
            auto pm = published_mean(table_id, sc.theta_true, est, q);
            auto pe = published_esd(table_id, sc.theta_true, est, q);
            row[7] = pm ? format_double(*pm) : "";
            row[8] = pe ? format_double(*pe) : "";
            out.row(row);
        }
    };
    emit("proposed", r.proposed);
    emit("cox", r.cox);
}

}  // namespace fid
