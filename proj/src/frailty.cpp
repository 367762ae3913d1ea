#include "frailtyid/frailty.hpp"

#include <cmath>

namespace fid {

namespace {

void check_theta_s(double theta, double s) {
    if (!(theta >= 0.0)) throw std::domain_error("frailty: theta must be >= 0");
    if (!(s >= 0.0)) throw std::domain_error("frailty: s must be >= 0");
}

void check_unit(double u, const char* who) {
    if (!(u > 0.0) || u > 1.0) {
        throw std::domain_error(std::string(who) + ": argument must lie in (0, 1], got " +
                                std::to_string(u));
    }
}

}  // namespace

double log_laplace_deriv(double theta, double s, int q) {
    check_theta_s(theta, s);
    if (q < 0) throw std::domain_error("frailty: derivative order must be >= 0");
    if (theta < kThetaIndependence) return -s;
    double lg = 0.0;
    for (int j = 1; j < q; ++j) lg += std::log1p(j * theta);
    return lg - (1.0 / theta + q) * std::log1p(theta * s);
}

double laplace_deriv(double theta, double s, int q) {
    double mag = std::exp(log_laplace_deriv(theta, s, q));
    return (q % 2 == 0) ? mag : -mag;
}

double psi(double theta, double u) {
    check_unit(u, "psi");
    if (theta < kThetaIndependence) return -std::log(u);
    return std::expm1(-theta * std::log(u)) / theta;
}

double psi_deriv(double theta, double u) {
    check_unit(u, "psi_deriv");
    return -std::pow(u, -theta - 1.0);
}

double xi(double theta, double u) {
    check_unit(u, "xi");
    if (theta < kThetaIndependence) return -std::log(u);
    return std::expm1(-theta / (1.0 + theta) * std::log(u)) / theta;
}

double xi_deriv(double theta, double u) {
    check_unit(u, "xi_deriv");
    return -std::pow(u, -theta / (1.0 + theta) - 1.0) / (1.0 + theta);
}

double alpha_star_1k(double theta, double linpred_1k, double h1dot) {
    if (theta < kThetaIndependence) return std::exp(linpred_1k);
    return std::exp(linpred_1k + theta * h1dot);
}

double alpha_star_23(double theta, double linpred_23, double h23) {
    if (theta < kThetaIndependence) return std::exp(linpred_23);
    return std::exp(linpred_23 + h23 * theta / (1.0 + theta)) / (1.0 + theta);
}

double posterior_expectation_F1(double theta, int n1dot, double a1dot) {
    if (theta < kThetaIndependence) return 1.0;
    return (1.0 + theta * n1dot) / (1.0 + theta * a1dot);
}

double posterior_expectation_F2(double theta, int n23, double adot) {
    if (theta < kThetaIndependence) return 1.0;
    return (1.0 + theta * (1.0 + n23)) / (1.0 + theta * adot);
}

}  // namespace fid
