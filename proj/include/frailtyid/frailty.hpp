#pragma once

#include <stdexcept>
#include <string>

namespace fid {

// Below this value theta is treated as exact independence and the
// exponential-limit branches are used (1/theta overflows otherwise).
inline constexpr double kThetaIndependence = 1e-10;

enum class Transition { Illness, DeathHealthy, DeathAfterIllness };

inline const char* transition_name(Transition t) {
    switch (t) {
        case Transition::Illness: return "12";
        case Transition::DeathHealthy: return "13";
        case Transition::DeathAfterIllness: return "23";
    }
    return "?";
}

// ---- Gamma frailty closed forms (mean 1, variance theta) ----------------
//
// phi(s) = (1 + theta s)^(-1/theta), the Laplace transform of the frailty.
// All q-th derivatives follow the product formula; no numerical
// differentiation is used anywhere in the likelihood.

// phi^(q)(s), signed.
double laplace_deriv(double theta, double s, int q);

// log of (-1)^q phi^(q)(s), always finite for s >= 0.
double log_laplace_deriv(double theta, double s, int q);

// psi = phi^{-1} on (0,1]:  (u^-theta - 1)/theta,  -log u at theta = 0.
double psi(double theta, double u);
double psi_deriv(double theta, double u);

// xi = (-phi^(1))^{-1} on (0,1].
double xi(double theta, double u);
double xi_deriv(double theta, double u);

// alpha*_{1k}(t|Z) = exp(linpred) exp(theta H_{1.}(t|Z)).
double alpha_star_1k(double theta, double linpred_1k, double h1dot);

// alpha*_{23}(t|Z) = exp(linpred) exp(H_{23}(t|Z) theta/(1+theta)) / (1+theta).
double alpha_star_23(double theta, double linpred_23, double h23);

// E(omega | F^(1)_t) = (1/theta + N_{1.}(t)) / (1/theta + A_{1.}(t|Z)).
double posterior_expectation_F1(double theta, int n1dot, double a1dot);

// E(omega | F^(2)_t) = (1/theta + 1 + N_{23}(t)) / (1/theta + A_{.}(t|Z)),
// for subjects already diseased.
double posterior_expectation_F2(double theta, int n23, double adot);

// ---- Frailty family interface -------------------------------------------
//
// Everything the estimation machinery needs from a frailty law. Only the
// gamma family ships; the interface keeps the door open for others.
class FrailtyFamily {
public:
    virtual ~FrailtyFamily() = default;
    virtual double theta() const = 0;
    virtual double log_laplace_deriv(double s, int q) const = 0;
    virtual double psi(double u) const = 0;
    virtual double psi_deriv(double u) const = 0;
    virtual double xi(double u) const = 0;
    virtual double xi_deriv(double u) const = 0;
    virtual double posterior_f1(int n1dot, double a1dot) const = 0;
    virtual double posterior_f2(int n23, double adot) const = 0;
};

class GammaFrailty final : public FrailtyFamily {
public:
    explicit GammaFrailty(double theta) : theta_(theta) {
        if (!(theta >= 0.0)) throw std::domain_error("GammaFrailty: theta must be >= 0");
    }
    double theta() const override { return theta_; }
    double log_laplace_deriv(double s, int q) const override {
        return fid::log_laplace_deriv(theta_, s, q);
    }
    double psi(double u) const override { return fid::psi(theta_, u); }
    double psi_deriv(double u) const override { return fid::psi_deriv(theta_, u); }
    double xi(double u) const override { return fid::xi(theta_, u); }
    double xi_deriv(double u) const override { return fid::xi_deriv(theta_, u); }
    double posterior_f1(int n1dot, double a1dot) const override {
        return posterior_expectation_F1(theta_, n1dot, a1dot);
    }
    double posterior_f2(int n23, double adot) const override {
        return posterior_expectation_F2(theta_, n23, adot);
    }

private:
    double theta_;
};

}  // namespace fid
