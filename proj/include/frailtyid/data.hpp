#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fid {

// One observation:
//   V      age at disease diagnosis, death free of disease, or censoring
//   W      age at death/censoring after disease (0 and unused when !delta1)
//   delta1 disease observed, delta2 death free of disease, delta3 death after
//          disease
//   R      recruitment age (delayed entry only)
//   weight subsample/bootstrap weight, 1 by default
struct SubjectRecord {
    double V = 0.0;
    bool delta1 = false;
    bool delta2 = false;
    double W = 0.0;
    bool delta3 = false;
    Eigen::VectorXd Z;
    std::optional<double> R;
    double weight = 1.0;

    bool prevalent() const { return R.has_value() && *R > V; }
    int delta_sum() const { return int(delta1) + int(delta2) + int(delta3); }
};

struct StudyDesign {
    bool delayed_entry = false;
    double c_L = 0.0;
    double c_U = 0.0;
    double tau = std::numeric_limits<double>::infinity();
};

// mu = (gamma12, gamma13, gamma23, theta). The gamma blocks may have
// different lengths when transitions use different covariate subsets.
struct ParameterVector {
    Eigen::VectorXd gamma12;
    Eigen::VectorXd gamma13;
    Eigen::VectorXd gamma23;
    double theta = 0.0;

    Eigen::VectorXd flatten() const;
    static ParameterVector unflatten(const Eigen::VectorXd& v, Eigen::Index p12, Eigen::Index p13,
                                     Eigen::Index p23);
    Eigen::Index size() const { return gamma12.size() + gamma13.size() + gamma23.size() + 1; }
};

// Column subsets of Z used by each transition; empty means all columns.
struct CovariateMap {
    std::vector<int> idx12;
    std::vector<int> idx13;
    std::vector<int> idx23;
};

class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<SubjectRecord> records, CovariateMap map = {});

    const std::vector<SubjectRecord>& records() const { return records_; }
    std::vector<SubjectRecord>& records() { return records_; }
    std::size_t size() const { return records_.size(); }
    Eigen::Index n_covariates() const { return p_; }
    const CovariateMap& covariate_map() const { return map_; }

    // Design matrices per transition (subset columns resolved).
    const Eigen::MatrixXd& Z12() const { return z12_; }
    const Eigen::MatrixXd& Z13() const { return z13_; }
    const Eigen::MatrixXd& Z23() const { return z23_; }

    std::vector<double> weights() const;
    bool has_entry() const { return has_entry_; }

    // Throws std::invalid_argument naming the first offending row when a
    // SubjectRecord invariant is violated.
    void validate(const StudyDesign& design) const;

    void rebuild_design();

private:
    std::vector<SubjectRecord> records_;
    CovariateMap map_;
    Eigen::Index p_ = 0;
    Eigen::MatrixXd z12_, z13_, z23_;
    bool has_entry_ = false;
};

// Cohort CSV: header V,delta1,delta2,W,delta3,Z1,...,Zp[,R]. The R column is
// present exactly when the cohort carries recruitment ages. Unknown columns
// are rejected.
Dataset read_cohort_csv(const std::string& path, CovariateMap map = {});
void write_cohort_csv(const std::string& path, const Dataset& data);

}  // namespace fid
