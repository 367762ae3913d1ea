#include "frailtyid/published.hpp"

#include <map>

namespace fid {

namespace {

// key: table|theta|estimator|quantity
using Table = std::map<std::string, double>;

std::string key(const std::string& table, double theta, const std::string& est,
                const std::string& q) {
    const int th = int(theta + 0.5);
    return table + "|" + std::to_string(th) + "|" + est + "|" + q;
}

// Reference means. Provenance: simulation tables of the source study;
// T2 rows = regression/dependence parameters with delayed entry, T3 rows =
// baseline cumulative hazards with delayed entry, S4/S5 their simple-cohort
// counterparts. Quantities not displayed there are absent here.
const Table& means() {
    static const Table t = {
        // T2, theta=0, Cox row
        {"T2|0|cox|g12_1", 2.007}, {"T2|0|cox|g12_2", 0.200}, {"T2|0|cox|g12_3", 0.042},
        {"T2|0|cox|g13_1", 0.058}, {"T2|0|cox|g13_2", 0.991},
        {"T2|0|cox|g23_1", 1.004}, {"T2|0|cox|g23_4", 0.505},
        // T2, theta=0, proposed row
        {"T2|0|proposed|theta", 0.037},
        {"T2|0|proposed|g12_1", 1.995}, {"T2|0|proposed|g12_2", 0.200},
        {"T2|0|proposed|g12_3", 0.040},
        {"T2|0|proposed|g13_1", 0.056}, {"T2|0|proposed|g13_2", 0.993},
        {"T2|0|proposed|g23_1", 1.016}, {"T2|0|proposed|g23_4", 0.491},
        // T2, theta=1, Cox row
        {"T2|1|cox|g12_1", 2.000}, {"T2|1|cox|g12_2", 0.198}, {"T2|1|cox|g12_3", 0.046},
        {"T2|1|cox|g13_1", 0.045}, {"T2|1|cox|g13_2", 0.993},
        {"T2|1|cox|g23_1", 0.696}, {"T2|1|cox|g23_4", 0.537},
        // T2, theta=1, proposed row (g13_2 as printed in the source)
        {"T2|1|proposed|theta", 1.054},
        {"T2|1|proposed|g12_1", 2.005}, {"T2|1|proposed|g12_2", 0.187},
        {"T2|1|proposed|g12_3", 0.034},
        {"T2|1|proposed|g13_1", 0.041}, {"T2|1|proposed|g13_2", 0.016},
        {"T2|1|proposed|g23_1", 1.026}, {"T2|1|proposed|g23_4", 0.524},
        // T2, theta=2, Cox row
        {"T2|2|cox|g12_1", 1.997}, {"T2|2|cox|g12_2", 0.214}, {"T2|2|cox|g12_3", 0.045},
        {"T2|2|cox|g13_1", 0.055}, {"T2|2|cox|g13_2", 1.002},
        {"T2|2|cox|g23_1", 0.585}, {"T2|2|cox|g23_4", 0.520},
        // T2, theta=2, proposed row
        {"T2|2|proposed|theta", 2.059},
        {"T2|2|proposed|g12_1", 1.994}, {"T2|2|proposed|g12_2", 0.203},
        {"T2|2|proposed|g12_3", 0.040},
        {"T2|2|proposed|g13_1", 0.052}, {"T2|2|proposed|g13_2", 0.993},
        {"T2|2|proposed|g23_1", 1.020}, {"T2|2|proposed|g23_4", 0.519},

        // T3 rows: H at t=0.1..0.6
        {"T3|0|cox|H012@0.1", 0.051}, {"T3|0|cox|H012@0.2", 0.151}, {"T3|0|cox|H012@0.3", 0.250},
        {"T3|0|cox|H012@0.4", 0.350}, {"T3|0|cox|H012@0.5", 0.451}, {"T3|0|cox|H012@0.6", 0.549},
        {"T3|0|proposed|H012@0.1", 0.050}, {"T3|0|proposed|H012@0.2", 0.151},
        {"T3|0|proposed|H012@0.3", 0.252}, {"T3|0|proposed|H012@0.4", 0.353},
        {"T3|0|proposed|H012@0.5", 0.455}, {"T3|0|proposed|H012@0.6", 0.559},
        {"T3|0|cox|H013@0.1", 0.051}, {"T3|0|cox|H013@0.2", 0.201}, {"T3|0|cox|H013@0.3", 0.401},
        {"T3|0|cox|H013@0.4", 0.602}, {"T3|0|cox|H013@0.5", 0.803}, {"T3|0|cox|H013@0.6", 1.003},
        {"T3|0|proposed|H013@0.1", 0.078}, {"T3|0|proposed|H013@0.2", 0.228},
        {"T3|0|proposed|H013@0.3", 0.429}, {"T3|0|proposed|H013@0.4", 0.630},
        {"T3|0|proposed|H013@0.5", 0.828}, {"T3|0|proposed|H013@0.6", 1.027},
        {"T3|0|cox|H023@0.2", 0.081}, {"T3|0|cox|H023@0.3", 0.181}, {"T3|0|cox|H023@0.4", 0.281},
        {"T3|0|cox|H023@0.5", 0.381}, {"T3|0|cox|H023@0.6", 0.482},
        {"T3|0|proposed|H023@0.2", 0.081}, {"T3|0|proposed|H023@0.3", 0.183},
        {"T3|0|proposed|H023@0.4", 0.285}, {"T3|0|proposed|H023@0.5", 0.389},
        {"T3|0|proposed|H023@0.6", 0.490},
        {"T3|1|cox|H012@0.1", 0.051}, {"T3|1|cox|H012@0.2", 0.151}, {"T3|1|cox|H012@0.3", 0.253},
        {"T3|1|cox|H012@0.4", 0.353}, {"T3|1|cox|H012@0.5", 0.452}, {"T3|1|cox|H012@0.6", 0.553},
        {"T3|1|proposed|H012@0.1", 0.050}, {"T3|1|proposed|H012@0.2", 0.152},
        {"T3|1|proposed|H012@0.3", 0.252}, {"T3|1|proposed|H012@0.4", 0.354},
        {"T3|1|proposed|H012@0.5", 0.455}, {"T3|1|proposed|H012@0.6", 0.560},
        {"T3|1|cox|H013@0.1", 0.050}, {"T3|1|cox|H013@0.2", 0.203}, {"T3|1|cox|H013@0.3", 0.404},
        {"T3|1|cox|H013@0.4", 0.606}, {"T3|1|cox|H013@0.5", 0.807}, {"T3|1|cox|H013@0.6", 1.009},
        {"T3|1|proposed|H013@0.1", 0.080}, {"T3|1|proposed|H013@0.2", 0.233},
        {"T3|1|proposed|H013@0.3", 0.435}, {"T3|1|proposed|H013@0.4", 0.639},
        {"T3|1|proposed|H013@0.5", 0.844}, {"T3|1|proposed|H013@0.6", 1.040},
        {"T3|1|cox|H023@0.2", 0.071}, {"T3|1|cox|H023@0.3", 0.147}, {"T3|1|cox|H023@0.4", 0.218},
        {"T3|1|cox|H023@0.5", 0.284}, {"T3|1|cox|H023@0.6", 0.350},
        {"T3|1|proposed|H023@0.2", 0.079}, {"T3|1|proposed|H023@0.3", 0.178},
        {"T3|1|proposed|H023@0.4", 0.277}, {"T3|1|proposed|H023@0.5", 0.377},
        {"T3|1|proposed|H023@0.6", 0.477},
        {"T3|2|cox|H012@0.1", 0.050}, {"T3|2|cox|H012@0.2", 0.150}, {"T3|2|cox|H012@0.3", 0.250},
        {"T3|2|cox|H012@0.4", 0.350}, {"T3|2|cox|H012@0.5", 0.449}, {"T3|2|cox|H012@0.6", 0.549},
        {"T3|2|proposed|H012@0.1", 0.051}, {"T3|2|proposed|H012@0.2", 0.152},
        {"T3|2|proposed|H012@0.3", 0.252}, {"T3|2|proposed|H012@0.4", 0.353},
        {"T3|2|proposed|H012@0.5", 0.454}, {"T3|2|proposed|H012@0.6", 0.556},
        {"T3|2|cox|H013@0.1", 0.049}, {"T3|2|cox|H013@0.2", 0.200}, {"T3|2|cox|H013@0.3", 0.400},
        {"T3|2|cox|H013@0.4", 0.601}, {"T3|2|cox|H013@0.5", 0.801}, {"T3|2|cox|H013@0.6", 0.999},
        {"T3|2|proposed|H013@0.1", 0.077}, {"T3|2|proposed|H013@0.2", 0.229},
        {"T3|2|proposed|H013@0.3", 0.431}, {"T3|2|proposed|H013@0.4", 0.633},
        {"T3|2|proposed|H013@0.5", 0.836}, {"T3|2|proposed|H013@0.6", 1.038},
        {"T3|2|cox|H023@0.2", 0.058}, {"T3|2|cox|H023@0.3", 0.116}, {"T3|2|cox|H023@0.4", 0.168},
        {"T3|2|cox|H023@0.5", 0.217}, {"T3|2|cox|H023@0.6", 0.264},
        {"T3|2|proposed|H023@0.2", 0.081}, {"T3|2|proposed|H023@0.3", 0.181},
        {"T3|2|proposed|H023@0.4", 0.281}, {"T3|2|proposed|H023@0.5", 0.380},
        {"T3|2|proposed|H023@0.6", 0.480},

        // S4 rows (no delayed entry)
        {"S4|0|cox|g12_1", 2.008}, {"S4|0|cox|g12_2", 0.196}, {"S4|0|cox|g12_3", 0.041},
        {"S4|0|cox|g13_1", 0.049}, {"S4|0|cox|g13_2", 1.003},
        {"S4|0|cox|g23_1", 0.986}, {"S4|0|cox|g23_4", 0.498},
        {"S4|0|proposed|theta", 0.050},
        {"S4|0|proposed|g12_1", 1.987}, {"S4|0|proposed|g12_2", 0.194},
        {"S4|0|proposed|g12_3", 0.038},
        {"S4|0|proposed|g13_1", 0.043}, {"S4|0|proposed|g13_2", 0.993},
        {"S4|0|proposed|g23_1", 1.042}, {"S4|0|proposed|g23_4", 0.495},
        {"S4|1|cox|g12_1", 2.007}, {"S4|1|cox|g12_2", 0.187}, {"S4|1|cox|g12_3", 0.055},
        {"S4|1|cox|g13_1", 0.042}, {"S4|1|cox|g13_2", 0.996},
        {"S4|1|cox|g23_1", 0.747}, {"S4|1|cox|g23_4", 0.495},
        {"S4|1|proposed|theta", 1.073},
        {"S4|1|proposed|g12_1", 1.981}, {"S4|1|proposed|g12_2", 0.189},
        {"S4|1|proposed|g12_3", 0.041},
        {"S4|1|proposed|g13_1", 0.057}, {"S4|1|proposed|g13_2", 0.972},
        {"S4|1|proposed|g23_1", 1.033}, {"S4|1|proposed|g23_4", 0.504},
        {"S4|2|cox|g12_1", 1.995}, {"S4|2|cox|g12_2", 0.203}, {"S4|2|cox|g12_3", 0.057},
        {"S4|2|cox|g13_1", 0.046}, {"S4|2|cox|g13_2", 1.002},
        {"S4|2|cox|g23_1", 0.628}, {"S4|2|cox|g23_4", 0.522},
        {"S4|2|proposed|theta", 2.087},
        {"S4|2|proposed|g12_1", 1.969}, {"S4|2|proposed|g12_2", 0.180},
        {"S4|2|proposed|g12_3", 0.034},
        {"S4|2|proposed|g13_1", 0.041}, {"S4|2|proposed|g13_2", 0.991},
        {"S4|2|proposed|g23_1", 1.037}, {"S4|2|proposed|g23_4", 0.503},

        // S5 rows (no delayed entry)
        {"S5|0|cox|H012@0.1", 0.050}, {"S5|0|cox|H012@0.2", 0.151}, {"S5|0|cox|H012@0.3", 0.252},
        {"S5|0|cox|H012@0.4", 0.353}, {"S5|0|cox|H012@0.5", 0.453}, {"S5|0|cox|H012@0.6", 0.551},
        {"S5|0|proposed|H012@0.1", 0.051}, {"S5|0|proposed|H012@0.2", 0.153},
        {"S5|0|proposed|H012@0.3", 0.256}, {"S5|0|proposed|H012@0.4", 0.358},
        {"S5|0|proposed|H012@0.5", 0.457}, {"S5|0|proposed|H012@0.6", 0.558},
        {"S5|0|cox|H013@0.1", 0.075}, {"S5|0|cox|H013@0.2", 0.225}, {"S5|0|cox|H013@0.3", 0.426},
        {"S5|0|cox|H013@0.4", 0.626}, {"S5|0|cox|H013@0.5", 0.822}, {"S5|0|cox|H013@0.6", 1.021},
        {"S5|0|proposed|H013@0.1", 0.075}, {"S5|0|proposed|H013@0.2", 0.227},
        {"S5|0|proposed|H013@0.3", 0.429}, {"S5|0|proposed|H013@0.4", 0.633},
        {"S5|0|proposed|H013@0.5", 0.835}, {"S5|0|proposed|H013@0.6", 1.042},
        {"S5|0|cox|H023@0.2", 0.082}, {"S5|0|cox|H023@0.3", 0.183}, {"S5|0|cox|H023@0.4", 0.285},
        {"S5|0|cox|H023@0.5", 0.385}, {"S5|0|cox|H023@0.6", 0.486},
        {"S5|0|proposed|H023@0.2", 0.080}, {"S5|0|proposed|H023@0.3", 0.181},
        {"S5|0|proposed|H023@0.4", 0.282}, {"S5|0|proposed|H023@0.5", 0.384},
        {"S5|0|proposed|H023@0.6", 0.488},
        {"S5|1|cox|H012@0.1", 0.050}, {"S5|1|cox|H012@0.2", 0.150}, {"S5|1|cox|H012@0.3", 0.251},
        {"S5|1|cox|H012@0.4", 0.351}, {"S5|1|cox|H012@0.5", 0.452}, {"S5|1|cox|H012@0.6", 0.558},
        {"S5|1|proposed|H012@0.1", 0.052}, {"S5|1|proposed|H012@0.2", 0.154},
        {"S5|1|proposed|H012@0.3", 0.256}, {"S5|1|proposed|H012@0.4", 0.361},
        {"S5|1|proposed|H012@0.5", 0.461}, {"S5|1|proposed|H012@0.6", 0.567},
        {"S5|1|cox|H013@0.1", 0.076}, {"S5|1|cox|H013@0.2", 0.227}, {"S5|1|cox|H013@0.3", 0.430},
        {"S5|1|cox|H013@0.4", 0.632}, {"S5|1|cox|H013@0.5", 0.837}, {"S5|1|cox|H013@0.6", 1.033},
        {"S5|1|proposed|H013@0.1", 0.076}, {"S5|1|proposed|H013@0.2", 0.228},
        {"S5|1|proposed|H013@0.3", 0.431}, {"S5|1|proposed|H013@0.4", 0.633},
        {"S5|1|proposed|H013@0.5", 0.836}, {"S5|1|proposed|H013@0.6", 1.038},
        {"S5|1|cox|H023@0.2", 0.070}, {"S5|1|cox|H023@0.3", 0.145}, {"S5|1|cox|H023@0.4", 0.217},
        {"S5|1|cox|H023@0.5", 0.283}, {"S5|1|cox|H023@0.6", 0.347},
        {"S5|1|proposed|H023@0.2", 0.080}, {"S5|1|proposed|H023@0.3", 0.180},
        {"S5|1|proposed|H023@0.4", 0.282}, {"S5|1|proposed|H023@0.5", 0.382},
        {"S5|1|proposed|H023@0.6", 0.484},
        {"S5|2|cox|H012@0.1", 0.050}, {"S5|2|cox|H012@0.2", 0.151}, {"S5|2|cox|H012@0.3", 0.249},
        {"S5|2|cox|H012@0.4", 0.348}, {"S5|2|cox|H012@0.5", 0.447}, {"S5|2|cox|H012@0.6", 0.546},
        {"S5|2|proposed|H012@0.1", 0.052}, {"S5|2|proposed|H012@0.2", 0.156},
        {"S5|2|proposed|H012@0.3", 0.261}, {"S5|2|proposed|H012@0.4", 0.364},
        {"S5|2|proposed|H012@0.5", 0.469}, {"S5|2|proposed|H012@0.6", 0.572},
        {"S5|2|cox|H013@0.1", 0.075}, {"S5|2|cox|H013@0.2", 0.225}, {"S5|2|cox|H013@0.3", 0.427},
        {"S5|2|cox|H013@0.4", 0.630}, {"S5|2|cox|H013@0.5", 0.825}, {"S5|2|cox|H013@0.6", 1.029},
        {"S5|2|proposed|H013@0.1", 0.076}, {"S5|2|proposed|H013@0.2", 0.228},
        {"S5|2|proposed|H013@0.3", 0.432}, {"S5|2|proposed|H013@0.4", 0.638},
        {"S5|2|proposed|H013@0.5", 0.842}, {"S5|2|proposed|H013@0.6", 1.038},
        {"S5|2|cox|H023@0.2", 0.056}, {"S5|2|cox|H023@0.3", 0.113}, {"S5|2|cox|H023@0.4", 0.164},
        {"S5|2|cox|H023@0.5", 0.211}, {"S5|2|cox|H023@0.6", 0.257},
        {"S5|2|proposed|H023@0.2", 0.080}, {"S5|2|proposed|H023@0.3", 0.181},
        {"S5|2|proposed|H023@0.4", 0.280}, {"S5|2|proposed|H023@0.5", 0.382},
        {"S5|2|proposed|H023@0.6", 0.484},
    };
    return t;
}

const Table& esds() {
    static const Table t = {
        // T2 empirical SD rows
        {"T2|0|cox|g12_1", 0.103}, {"T2|0|cox|g12_2", 0.084}, {"T2|0|cox|g12_3", 0.078},
        {"T2|0|cox|g13_1", 0.089}, {"T2|0|cox|g13_2", 0.093},
        {"T2|0|cox|g23_1", 0.110}, {"T2|0|cox|g23_4", 0.105},
        {"T2|0|proposed|theta", 0.058},
        {"T2|0|proposed|g12_1", 0.090}, {"T2|0|proposed|g12_2", 0.091},
        {"T2|0|proposed|g12_3", 0.093},
        {"T2|0|proposed|g13_1", 0.094}, {"T2|0|proposed|g13_2", 0.091},
        {"T2|0|proposed|g23_1", 0.126}, {"T2|0|proposed|g23_4", 0.109},
        {"T2|1|cox|g12_1", 0.093}, {"T2|1|cox|g12_2", 0.097}, {"T2|1|cox|g12_3", 0.089},
        {"T2|1|cox|g13_1", 0.101}, {"T2|1|cox|g13_2", 0.097},
        {"T2|1|cox|g23_1", 0.140}, {"T2|1|cox|g23_4", 0.116},
        {"T2|1|proposed|theta", 0.139},
        {"T2|1|proposed|g12_1", 0.095}, {"T2|1|proposed|g12_2", 0.093},
        {"T2|1|proposed|g12_3", 0.075},
        {"T2|1|proposed|g13_1", 0.128}, {"T2|1|proposed|g13_2", 0.111},
        {"T2|1|proposed|g23_1", 0.115}, {"T2|1|proposed|g23_4", 0.111},
        {"T2|2|cox|g12_1", 0.105}, {"T2|2|cox|g12_2", 0.093}, {"T2|2|cox|g12_3", 0.084},
        {"T2|2|cox|g13_1", 0.099}, {"T2|2|cox|g13_2", 0.099},
        {"T2|2|cox|g23_1", 0.162}, {"T2|2|cox|g23_4", 0.151},
        {"T2|2|proposed|theta", 0.165},
        {"T2|2|proposed|g12_1", 0.097}, {"T2|2|proposed|g12_2", 0.089},
        {"T2|2|proposed|g12_3", 0.075},
        {"T2|2|proposed|g13_1", 0.098}, {"T2|2|proposed|g13_2", 0.093},
        {"T2|2|proposed|g23_1", 0.171}, {"T2|2|proposed|g23_4", 0.133},
        // S4 empirical SD rows
        {"S4|0|cox|g12_1", 0.085}, {"S4|0|cox|g12_2", 0.076}, {"S4|0|cox|g12_3", 0.076},
        {"S4|0|cox|g13_1", 0.095}, {"S4|0|cox|g13_2", 0.088},
        {"S4|0|cox|g23_1", 0.145}, {"S4|0|cox|g23_4", 0.131},
        {"S4|0|proposed|theta", 0.078},
        {"S4|0|proposed|g12_1", 0.098}, {"S4|0|proposed|g12_2", 0.089},
        {"S4|0|proposed|g12_3", 0.079},
        {"S4|0|proposed|g13_1", 0.094}, {"S4|0|proposed|g13_2", 0.089},
        {"S4|0|proposed|g23_1", 0.140}, {"S4|0|proposed|g23_4", 0.124},
        {"S4|1|cox|g12_1", 0.084}, {"S4|1|cox|g12_2", 0.090}, {"S4|1|cox|g12_3", 0.088},
        {"S4|1|cox|g13_1", 0.093}, {"S4|1|cox|g13_2", 0.085},
        {"S4|1|cox|g23_1", 0.149}, {"S4|1|cox|g23_4", 0.153},
        {"S4|1|proposed|theta", 0.131},
        {"S4|1|proposed|g12_1", 0.090}, {"S4|1|proposed|g12_2", 0.079},
        {"S4|1|proposed|g12_3", 0.083},
        {"S4|1|proposed|g13_1", 0.091}, {"S4|1|proposed|g13_2", 0.087},
        {"S4|1|proposed|g23_1", 0.153}, {"S4|1|proposed|g23_4", 0.146},
        {"S4|2|cox|g12_1", 0.078}, {"S4|2|cox|g12_2", 0.080}, {"S4|2|cox|g12_3", 0.073},
        {"S4|2|cox|g13_1", 0.099}, {"S4|2|cox|g13_2", 0.095},
        {"S4|2|cox|g23_1", 0.172}, {"S4|2|cox|g23_4", 0.151},
        {"S4|2|proposed|theta", 0.188},
        {"S4|2|proposed|g12_1", 0.092}, {"S4|2|proposed|g12_2", 0.075},
        {"S4|2|proposed|g12_3", 0.072},
        {"S4|2|proposed|g13_1", 0.087}, {"S4|2|proposed|g13_2", 0.086},
        {"S4|2|proposed|g23_1", 0.181}, {"S4|2|proposed|g23_4", 0.150},
    };
    return t;
}

}  // namespace

std::optional<double> published_mean(const std::string& table, double theta,
                                     const std::string& estimator, const std::string& quantity) {
    const auto& t = means();
    auto it = t.find(key(table, theta, estimator, quantity));
    if (it == t.end()) return std::nullopt;
    return it->second;
}

std::optional<double> published_esd(const std::string& table, double theta,
                                    const std::string& estimator, const std::string& quantity) {
    const auto& t = esds();
    auto it = t.find(key(table, theta, estimator, quantity));
    if (it == t.end()) return std::nullopt;
    return it->second;
}

}  // namespace fid
