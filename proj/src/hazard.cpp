#include "frailtyid/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "frailtyid/csv.hpp"

namespace fid {

StepHazard::StepHazard(std::vector<double> times, std::vector<double> jumps)
    : times_(std::move(times)), jumps_(std::move(jumps)) {
    if (times_.size() != jumps_.size()) throw std::invalid_argument("StepHazard: size mismatch");
    double prev = 0.0;
    double acc = 0.0;
    cum_.reserve(times_.size());
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] > prev)) {
            throw std::invalid_argument("StepHazard: jump times must be strictly increasing and positive");
        }
        if (!(jumps_[i] >= 0.0)) throw std::invalid_argument("StepHazard: negative jump");
        prev = times_[i];
        acc += jumps_[i];
        cum_.push_back(acc);
    }
}

double StepHazard::value(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepHazard::value_before(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepHazard::jump_at(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it != times_.end() && *it == t) {
        return jumps_[static_cast<std::size_t>(it - times_.begin())];
    }
    return 0.0;
}

void StepHazard::write_csv(const std::string& path) const {
    CsvWriter out(path, {"time", "jump", "cumulative"});
    for (std::size_t i = 0; i < times_.size(); ++i) {
        out.row_doubles({times_[i], jumps_[i], cum_[i]});
    }
}

StepHazard StepHazard::read_csv(const std::string& path) {
    CsvReader in(path);
    in.require_header({"time", "jump", "cumulative"});
    std::vector<double> t, j;
    std::vector<std::string> cells;
    while (in.next(cells)) {
        const std::string ctx = path + ":" + std::to_string(in.line_number());
        t.push_back(parse_double(cells[0], ctx));
        j.push_back(parse_double(cells[1], ctx));
    }
    return StepHazard(std::move(t), std::move(j));
}

// ---------------------------------------------------------------------------

AGrid AGrid::build(const HazardTriple& h) {
    AGrid g;
    // pooled 12/13 grid
    g.u.reserve(h.h12.n_jumps() + h.h13.n_jumps());
    std::merge(h.h12.times().begin(), h.h12.times().end(), h.h13.times().begin(),
               h.h13.times().end(), std::back_inserter(g.u));
    g.u.erase(std::unique(g.u.begin(), g.u.end()), g.u.end());
    const auto m = static_cast<Eigen::Index>(g.u.size());
    g.dH12.setZero(m);
    g.dH13.setZero(m);
    g.H12L.setZero(m);
    g.H13L.setZero(m);
    double acc12 = 0.0, acc13 = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        g.H12L(j) = acc12;
        g.H13L(j) = acc13;
        g.dH12(j) = h.h12.jump_at(g.u[static_cast<std::size_t>(j)]);
        g.dH13(j) = h.h13.jump_at(g.u[static_cast<std::size_t>(j)]);
        acc12 += g.dH12(j);
        acc13 += g.dH13(j);
    }
    // 23 grid
    g.v = h.h23.times();
    const auto m23 = static_cast<Eigen::Index>(g.v.size());
    g.dH23.setZero(m23);
    g.H23L.setZero(m23);
    double acc23 = 0.0;
    for (Eigen::Index j = 0; j < m23; ++j) {
        g.H23L(j) = acc23;
        g.dH23(j) = h.h23.jumps()[static_cast<std::size_t>(j)];
        acc23 += g.dH23(j);
    }
    return g;
}

void AGrid::a12_a13(double t, double theta, double a, double b, Eigen::ArrayXd& ws, double& A12,
                    double& A13) const {
    const auto k = static_cast<Eigen::Index>(
        std::upper_bound(u.begin(), u.end(), t) - u.begin());
    if (k == 0) {
        A12 = A13 = 0.0;
        return;
    }
    if (theta < kThetaIndependence) {
        A12 = a * dH12.head(k).sum();
        A13 = b * dH13.head(k).sum();
        return;
    }
    if (ws.size() < k) ws.resize(u.size());
    ws.head(k) = (theta * a * H12L.head(k) + theta * b * H13L.head(k)).exp();
    A12 = a * (ws.head(k) * dH12.head(k)).sum();
    A13 = b * (ws.head(k) * dH13.head(k)).sum();
}

void AGrid::h012_h013_at(double t, double& h12, double& h13) const {
    const auto k = static_cast<Eigen::Index>(
        std::upper_bound(u.begin(), u.end(), t) - u.begin());
    if (k == 0) {
        h12 = h13 = 0.0;
    } else {
        h12 = H12L(k - 1) + dH12(k - 1);
        h13 = H13L(k - 1) + dH13(k - 1);
    }
}

double AGrid::h023_at(double t) const {
    const auto k = static_cast<Eigen::Index>(
        std::upper_bound(v.begin(), v.end(), t) - v.begin());
    return k == 0 ? 0.0 : H23L(k - 1) + dH23(k - 1);
}

double AGrid::a23(double t, double theta, double c, Eigen::ArrayXd& ws) const {
    const auto k = static_cast<Eigen::Index>(
        std::upper_bound(v.begin(), v.end(), t) - v.begin());
    if (k == 0) return 0.0;
    if (theta < kThetaIndependence) return c * dH23.head(k).sum();
    const double rho = theta / (1.0 + theta);
    if (ws.size() < k) ws.resize(v.size());
    ws.head(k) = (rho * c * H23L.head(k)).exp();
    return c / (1.0 + theta) * (ws.head(k) * dH23.head(k)).sum();
}

namespace {

Eigen::VectorXd subset_lp(const Eigen::VectorXd& z, const std::vector<int>& idx) {
    if (idx.empty()) return z;
    Eigen::VectorXd out(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) out(j) = z(idx[j]);
    return out;
}

}  // namespace

double cumulative_A(Transition tr, const HazardTriple& h, const ParameterVector& params,
                    const Eigen::VectorXd& Z, double t, const CovariateMap& map) {
    if (!(t >= 0.0)) throw std::domain_error("cumulative_A: t must be >= 0");
    AGrid g = AGrid::build(h);
    Eigen::ArrayXd ws;
    const double a = std::exp(params.gamma12.dot(subset_lp(Z, map.idx12)));
    const double b = std::exp(params.gamma13.dot(subset_lp(Z, map.idx13)));
    switch (tr) {
        case Transition::Illness:
        case Transition::DeathHealthy: {
            double A12 = 0.0, A13 = 0.0;
            g.a12_a13(t, params.theta, a, b, ws, A12, A13);
            return tr == Transition::Illness ? A12 : A13;
        }
        case Transition::DeathAfterIllness: {
            const double c = std::exp(params.gamma23.dot(subset_lp(Z, map.idx23)));
            return g.a23(t, params.theta, c, ws);
        }
    }
    throw std::logic_error("cumulative_A: bad transition");
}

// ---------------------------------------------------------------------------
// Breslow sweep machinery.

namespace {

struct EventTable {
    std::vector<double> times;    // distinct, ascending
    std::vector<double> counts;   // weighted tied counts
};

template <typename Select>
EventTable gather_events(const Dataset& data, std::span<const double> weights, Select select) {
    std::map<double, double> acc;
    const auto& recs = data.records();
    for (std::size_t i = 0; i < recs.size(); ++i) {
        double t;
        if (select(recs[i], t)) acc[t] += weights[i];
    }
    EventTable out;
    out.times.reserve(acc.size());
    out.counts.reserve(acc.size());
    for (const auto& [t, c] : acc) {
        out.times.push_back(t);
        out.counts.push_back(c);
    }
    return out;
}

// Left values H(t-) on the pooled grid for an arbitrary time (event times that
// are not grid times only arise when the incoming hazards are empty or were
// produced elsewhere).
void left_values_1dot(const AGrid& g, double t, Eigen::Index grid_j, double& h12m, double& h13m) {
    if (grid_j >= 0) {
        h12m = g.H12L(grid_j);
        h13m = g.H13L(grid_j);
        return;
    }
    const auto k = static_cast<Eigen::Index>(
        std::lower_bound(g.u.begin(), g.u.end(), t) - g.u.begin());
    if (k == 0) {
        h12m = h13m = 0.0;
    } else {
        h12m = g.H12L(k - 1) + g.dH12(k - 1);
        h13m = g.H13L(k - 1) + g.dH13(k - 1);
    }
}

double left_value_23(const AGrid& g, double t, Eigen::Index grid_j) {
    if (grid_j >= 0) return g.H23L(grid_j);
    const auto k = static_cast<Eigen::Index>(
        std::lower_bound(g.v.begin(), g.v.end(), t) - g.v.begin());
    return k == 0 ? 0.0 : g.H23L(k - 1) + g.dH23(k - 1);
}

// Merged timeline entry: a point can carry a grid index (for accumulating the
// A integrals), event counts for one or both transitions, or all of these.
struct SweepPoint {
    double t;
    Eigen::Index grid_j = -1;
    int ev_a = -1;  // index into first event table
    int ev_b = -1;  // index into second event table
};

std::vector<SweepPoint> merge_points(const std::vector<double>& grid, const EventTable& ea,
                                     const EventTable& eb) {
    std::vector<double> all;
    all.reserve(grid.size() + ea.times.size() + eb.times.size());
    all.insert(all.end(), grid.begin(), grid.end());
    all.insert(all.end(), ea.times.begin(), ea.times.end());
    all.insert(all.end(), eb.times.begin(), eb.times.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<SweepPoint> pts;
    pts.reserve(all.size());
    for (double t : all) {
        SweepPoint p;
        p.t = t;
        auto gi = std::lower_bound(grid.begin(), grid.end(), t);
        if (gi != grid.end() && *gi == t) p.grid_j = gi - grid.begin();
        auto ai = std::lower_bound(ea.times.begin(), ea.times.end(), t);
        if (ai != ea.times.end() && *ai == t) p.ev_a = int(ai - ea.times.begin());
        auto bi = std::lower_bound(eb.times.begin(), eb.times.end(), t);
        if (bi != eb.times.end() && *bi == t) p.ev_b = int(bi - eb.times.begin());
        pts.push_back(p);
    }
    return pts;
}

void check_denominator(double d, double t, const char* trans) {
    if (!(d > 1e-12)) {
        throw std::runtime_error(std::string("breslow: zero denominator for transition ") + trans +
                                 " at time t=" + format_double(t));
    }
}

struct Pass1kResult {
    StepHazard h12;
    StepHazard h13;
};

// One sweep producing the 1->2 and 1->3 updates together. Subjects
// accumulate A_{1.}(t) across grid points while their V has not passed;
// denominators are taken exclusive of any mass at the event time itself.
Pass1kResult pass_1k(const Dataset& data, const ParameterVector& params, const AGrid& grid,
                     std::span<const double> weights, bool delayed) {
    const auto& recs = data.records();
    const std::size_t n = recs.size();
    const double theta = params.theta;
    const bool indep = theta < kThetaIndependence;

    Eigen::ArrayXd a = (data.Z12() * params.gamma12).array().exp();
    Eigen::ArrayXd b = (data.Z13() * params.gamma13).array().exp();

    EventTable e12 = gather_events(data, weights, [&](const SubjectRecord& r, double& t) {
        t = r.V;
        return r.delta1 && !(delayed && r.prevalent());
    });
    EventTable e13 = gather_events(data, weights, [&](const SubjectRecord& r, double& t) {
        t = r.V;
        return r.delta2 && !(delayed && r.prevalent());
    });
    std::vector<SweepPoint> pts = merge_points(grid.u, e12, e13);

    std::vector<double> accA(n, 0.0);
    std::vector<char> in(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        in[i] = !(delayed && recs[i].prevalent());
    }

    std::vector<double> jumps12(e12.times.size(), 0.0);
    std::vector<double> jumps13(e13.times.size(), 0.0);

    for (const auto& p : pts) {
        const bool want_d = p.ev_a >= 0 || p.ev_b >= 0;
        const bool advance = p.grid_j >= 0;
        if (!want_d && !advance) continue;
        double d12 = 0.0, d13 = 0.0;
        const double dh12 = advance ? grid.dH12(p.grid_j) : 0.0;
        const double dh13 = advance ? grid.dH13(p.grid_j) : 0.0;
        double h12m = 0.0, h13m = 0.0;
        if (!indep) left_values_1dot(grid, p.t, p.grid_j, h12m, h13m);
        for (std::size_t i = 0; i < n; ++i) {
            if (!in[i]) continue;
            if (recs[i].V < p.t) {
                in[i] = 0;
                continue;
            }
            double x = 1.0;
            if (!indep) x = std::exp(theta * (a(i) * h12m + b(i) * h13m));
            if (want_d && (!delayed || *recs[i].R <= p.t)) {
                const double eo = indep ? 1.0 : (1.0 / (1.0 + theta * accA[i]));
                const double base = weights[i] * x * eo;
                d12 += base * a(i);
                d13 += base * b(i);
            }
            if (advance) accA[i] += (a(i) * dh12 + b(i) * dh13) * x;
        }
        if (p.ev_a >= 0) {
            check_denominator(d12, p.t, "12");
            jumps12[p.ev_a] = e12.counts[p.ev_a] / d12;
        }
        if (p.ev_b >= 0) {
            check_denominator(d13, p.t, "13");
            jumps13[p.ev_b] = e13.counts[p.ev_b] / d13;
        }
    }
    return {StepHazard(e12.times, jumps12), StepHazard(e13.times, jumps13)};
}

// The 2->3 sweep. Only diseased subjects participate; each carries
// A_{i.}(t-) = A_{1.}(V_i) + A_23(t-) - A_23(V_i), with the last difference
// accumulated over grid points strictly inside (V_i, t).
StepHazard pass_23(const Dataset& data, const ParameterVector& params, const AGrid& grid,
                   std::span<const double> weights, bool delayed) {
    const auto& recs = data.records();
    const std::size_t n = recs.size();
    const double theta = params.theta;
    const bool indep = theta < kThetaIndependence;
    const double rho = indep ? 0.0 : theta / (1.0 + theta);

    Eigen::ArrayXd a = (data.Z12() * params.gamma12).array().exp();
    Eigen::ArrayXd b = (data.Z13() * params.gamma13).array().exp();
    Eigen::ArrayXd c = (data.Z23() * params.gamma23).array().exp();

    EventTable e23 = gather_events(data, weights, [](const SubjectRecord& r, double& t) {
        t = r.W;
        return r.delta3;
    });
    EventTable none;
    std::vector<SweepPoint> pts = merge_points(grid.v, e23, none);

    // A_{1.}(V_i), inclusive, for diseased subjects.
    std::vector<double> a1dotV(n, 0.0);
    Eigen::ArrayXd ws;
    std::vector<char> part(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = recs[i];
        if (!(r.delta1 && !r.delta2)) continue;
        part[i] = 1;
        double A12 = 0.0, A13 = 0.0;
        grid.a12_a13(r.V, theta, a(i), b(i), ws, A12, A13);
        a1dotV[i] = A12 + A13;
    }

    std::vector<double> accDiff(n, 0.0);
    std::vector<double> jumps(e23.times.size(), 0.0);

    for (const auto& p : pts) {
        const bool want_d = p.ev_a >= 0;
        const bool advance = p.grid_j >= 0;
        if (!want_d && !advance) continue;
        double d = 0.0;
        const double dh = advance ? grid.dH23(p.grid_j) : 0.0;
        const double h23m = indep ? 0.0 : left_value_23(grid, p.t, p.grid_j);
        for (std::size_t i = 0; i < n; ++i) {
            if (!part[i]) continue;
            const auto& r = recs[i];
            if (r.W < p.t) {
                part[i] = 0;
                continue;
            }
            if (r.V > p.t) continue;
            double x = indep ? 1.0 : std::exp(rho * c(i) * h23m);
            if (want_d && r.V <= p.t) {
                const bool entered = !delayed || *recs[i].R < p.t;
                if (entered) {
                    const double adot = a1dotV[i] + accDiff[i];
                    const double eo = indep ? 1.0 : ((1.0 + theta) / (1.0 + theta * adot));
                    const double alpha = indep ? c(i) : (c(i) * x / (1.0 + theta));
                    d += weights[i] * alpha * eo;
                }
            }
            // mass exactly at V_i belongs to A_23(V_i) and must not enter the
            // accumulated difference
            if (advance && p.t > r.V) accDiff[i] += c(i) * dh * x;
        }
        if (p.ev_a >= 0) {
            check_denominator(d, p.t, "23");
            jumps[p.ev_a] = e23.counts[p.ev_a] / d;
        }
    }
    return StepHazard(e23.times, jumps);
}

}  // namespace

StepHazard breslow_update_1k(const Dataset& data, int k, const ParameterVector& params,
                             const HazardTriple& current, std::span<const double> weights,
                             bool delayed_entry) {
    if (k != 2 && k != 3) throw std::invalid_argument("breslow_update_1k: k must be 2 or 3");
    AGrid grid = AGrid::build(current);
    Pass1kResult r = pass_1k(data, params, grid, weights, delayed_entry);
    return k == 2 ? std::move(r.h12) : std::move(r.h13);
}

StepHazard breslow_update_23(const Dataset& data, const ParameterVector& params,
                             const HazardTriple& current, std::span<const double> weights,
                             bool delayed_entry) {
    AGrid grid = AGrid::build(current);
    return pass_23(data, params, grid, weights, delayed_entry);
}

HazardTriple breslow_update_all(const Dataset& data, const ParameterVector& params,
                                const HazardTriple& current, std::span<const double> weights,
                                bool delayed_entry, const StepHazard* lifetable_segment) {
    AGrid grid = AGrid::build(current);
    Pass1kResult r = pass_1k(data, params, grid, weights, delayed_entry);
    HazardTriple out;
    out.h12 = std::move(r.h12);
    out.h13 = std::move(r.h13);
    if (lifetable_segment != nullptr && lifetable_segment->n_jumps() > 0) {
        out.h13 = splice_hazard(*lifetable_segment, out.h13, lifetable_segment->tau());
    }
    out.h23 = pass_23(data, params, grid, weights, delayed_entry);
    return out;
}

StepHazard splice_hazard(const StepHazard& head, const StepHazard& tail, double c_L) {
    if (head.tau() > c_L) throw std::invalid_argument("splice_hazard: head extends past c_L");
    std::map<double, double> acc;
    for (std::size_t i = 0; i < head.n_jumps(); ++i) acc[head.times()[i]] += head.jumps()[i];
    for (std::size_t i = 0; i < tail.n_jumps(); ++i) {
        if (tail.times()[i] >= c_L) acc[tail.times()[i]] += tail.jumps()[i];
    }
    std::vector<double> t, j;
    t.reserve(acc.size());
    j.reserve(acc.size());
    for (const auto& [time, jump] : acc) {
        t.push_back(time);
        j.push_back(jump);
    }
    return StepHazard(std::move(t), std::move(j));
}

}  // namespace fid
