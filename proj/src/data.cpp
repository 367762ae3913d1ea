#include "frailtyid/data.hpp"

#include <algorithm>
#include <stdexcept>

#include "frailtyid/csv.hpp"

namespace fid {

Eigen::VectorXd ParameterVector::flatten() const {
    Eigen::VectorXd v(size());
    v << gamma12, gamma13, gamma23, theta;
    return v;
}

ParameterVector ParameterVector::unflatten(const Eigen::VectorXd& v, Eigen::Index p12,
                                           Eigen::Index p13, Eigen::Index p23) {
    if (v.size() != p12 + p13 + p23 + 1) throw std::logic_error("unflatten: size mismatch");
    ParameterVector out;
    out.gamma12 = v.segment(0, p12);
    out.gamma13 = v.segment(p12, p13);
    out.gamma23 = v.segment(p12 + p13, p23);
    out.theta = v(p12 + p13 + p23);
    return out;
}

namespace {

Eigen::MatrixXd subset_columns(const std::vector<SubjectRecord>& recs, const std::vector<int>& idx,
                               Eigen::Index p) {
    std::vector<int> cols = idx;
    if (cols.empty()) {
        cols.resize(p);
        for (Eigen::Index j = 0; j < p; ++j) cols[j] = int(j);
    }
    Eigen::MatrixXd out(recs.size(), cols.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j] < 0 || cols[j] >= p) throw std::invalid_argument("covariate index out of range");
            out(i, j) = recs[i].Z(cols[j]);
        }
    }
    return out;
}

}  // namespace

Dataset::Dataset(std::vector<SubjectRecord> records, CovariateMap map)
    : records_(std::move(records)), map_(std::move(map)) {
    rebuild_design();
}

void Dataset::rebuild_design() {
    p_ = records_.empty() ? 0 : records_.front().Z.size();
    has_entry_ = !records_.empty() && records_.front().R.has_value();
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (records_[i].Z.size() != p_) {
            throw std::invalid_argument("row " + std::to_string(i + 1) +
                                        ": covariate dimension differs from first row");
        }
        if (records_[i].R.has_value() != has_entry_) {
            throw std::invalid_argument("row " + std::to_string(i + 1) +
                                        ": recruitment age present in some rows but not all");
        }
    }
    z12_ = subset_columns(records_, map_.idx12, p_);
    z13_ = subset_columns(records_, map_.idx13, p_);
    z23_ = subset_columns(records_, map_.idx23, p_);
}

std::vector<double> Dataset::weights() const {
    std::vector<double> w(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) w[i] = records_[i].weight;
    return w;
}

void Dataset::validate(const StudyDesign& design) const {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        const std::string row = "row " + std::to_string(i + 1);
        auto fail = [&](const std::string& msg) { throw std::invalid_argument(row + ": " + msg); };
        if (!(r.V > 0.0)) fail("V must be positive");
        if (r.delta1 && r.delta2) fail("delta1 and delta2 cannot both be set");
        if (r.delta3 && !r.delta1) fail("delta3 requires delta1");
        if (r.delta3 && r.delta2) fail("delta2 excludes delta3");
        if (r.delta1) {
            if (r.W < r.V) fail("delta1 requires W >= V");
            if (r.delta3 && !(r.W > r.V)) fail("delta3 requires W > V");
        }
        if (!(r.weight > 0.0)) fail("weight must be positive");
        if (design.delayed_entry) {
            if (!r.R.has_value()) fail("delayed entry requires a recruitment age");
            if (*r.R < design.c_L || *r.R > design.c_U) fail("R outside [c_L, c_U]");
            if (*r.R > r.V && !r.delta1) fail("prevalent record requires delta1");
            // Disease onset below c_L among incident cases contradicts the
            // rare-before-c_L modeling assumption.
            if (r.delta1 && *r.R <= r.V && r.V < design.c_L) fail("incident V below c_L");
        }
    }
}

Dataset read_cohort_csv(const std::string& path, CovariateMap map) {
    CsvReader in(path);
    const auto& h = in.header();
    if (h.size() < 6 || h[0] != "V" || h[1] != "delta1" || h[2] != "delta2" || h[3] != "W" ||
        h[4] != "delta3") {
        throw std::runtime_error(path + ": cohort header must start V,delta1,delta2,W,delta3");
    }
    bool with_R = h.back() == "R";
    std::size_t p = h.size() - 5 - (with_R ? 1 : 0);
    for (std::size_t j = 0; j < p; ++j) {
        if (h[5 + j] != "Z" + std::to_string(j + 1)) {
            throw std::runtime_error(path + ": unknown column '" + h[5 + j] + "'");
        }
    }
    std::vector<SubjectRecord> recs;
    std::vector<std::string> cells;
    while (in.next(cells)) {
        const std::string ctx = path + ":" + std::to_string(in.line_number());
        SubjectRecord r;
        r.V = parse_double(cells[0], ctx);
        r.delta1 = parse_double(cells[1], ctx) != 0.0;
        r.delta2 = parse_double(cells[2], ctx) != 0.0;
        r.W = parse_double(cells[3], ctx);
        r.delta3 = parse_double(cells[4], ctx) != 0.0;
        r.Z.resize(p);
        for (std::size_t j = 0; j < p; ++j) r.Z(j) = parse_double(cells[5 + j], ctx);
        if (with_R) r.R = parse_double(cells.back(), ctx);
        recs.push_back(std::move(r));
    }
    return Dataset(std::move(recs), std::move(map));
}

void write_cohort_csv(const std::string& path, const Dataset& data) {
    std::vector<std::string> header = {"V", "delta1", "delta2", "W", "delta3"};
    for (Eigen::Index j = 0; j < data.n_covariates(); ++j) {
        header.push_back("Z" + std::to_string(j + 1));
    }
    if (data.has_entry()) header.push_back("R");
    CsvWriter out(path, header);
    for (const auto& r : data.records()) {
        std::vector<double> cells = {r.V, r.delta1 ? 1.0 : 0.0, r.delta2 ? 1.0 : 0.0, r.W,
                                     r.delta3 ? 1.0 : 0.0};
        for (Eigen::Index j = 0; j < r.Z.size(); ++j) cells.push_back(r.Z(j));
        if (data.has_entry()) cells.push_back(r.R.value());
        out.row_doubles(cells);
    }
}

}  // namespace fid
