#pragma once

#include <optional>
#include <string>

namespace fid {

// Published reference values for the benchmark tables (T2/T3: delayed entry;
// S4/S5: simple cohort), keyed by table id, generating theta, estimator
// ("proposed"/"cox") and quantity name. Used for the side-by-side column of
// benchmark reports.
std::optional<double> published_mean(const std::string& table, double theta,
                                     const std::string& estimator, const std::string& quantity);
std::optional<double> published_esd(const std::string& table, double theta,
                                    const std::string& estimator, const std::string& quantity);

}  // namespace fid
