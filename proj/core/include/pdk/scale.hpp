#pragma once

#include <utility>
#include <vector>

#include "pdk/model.hpp"

namespace pdk {

// Exponential-sum representation of the scale function for one transform rate
// p > 0:  W(x) = sum_i coeffs[i] * exp(roots[i]*x) on x >= 0, where roots are
// all real solutions of psi(theta) = p (ascending; the last one is the unique
// positive root Phi(p)) and coeffs[i] = 1/psi'(roots[i]).
struct ScaleBasis {
    double rate_p = 0.0;
    std::vector<double> roots;
    std::vector<double> coeffs;
    double w0 = 0.0;        // W(0+): 1/c when sigma=0, 0 otherwise
    double w0_prime = 0.0;  // W'(0+): (p+kappa)/c^2 when sigma=0, 2/sigma^2 otherwise

    double phi() const { return roots.back(); }

    // W and derivatives up to order 3; x < 0 returns 0 for order 0 (the
    // function lives on [0, inf)); order >= 1 at x = 0 is the right limit.
    double W(double x, int order = 0) const;

    // Antiderivatives with the conventions below 0: Wbar = Wbarbar = 0,
    // Z = 1, Zbar = x.
    double Wbar(double x) const;     // int_0^x W
    double Wbarbar(double x) const;  // int_0^x Wbar
    double Z(double x) const;        // 1 + p*Wbar(x)
    double Zbar(double x) const;     // x + p*Wbarbar(x)

    // Overflow-safe W(x)/W(y) for large arguments.
    double W_ratio(double x, double y) const;
};

// Unique positive root of psi(theta) = p.
double phi(const LevyModel& m, double p);

// Builds the full basis: all roots of psi(theta) = p located by bracketed
// bisection+Newton between the poles of psi, plus coefficient and invariant
// checks. Throws numerical_error on near-degenerate root pairs.
ScaleBasis build_basis(const LevyModel& m, double p);

// Two bases a problem needs everywhere: rates q and q+r.
struct SpecBases {
    ProblemSpec spec;
    ScaleBasis q_basis;
    ScaleBasis qr_basis;
    double phi_q() const { return q_basis.phi(); }
    double phi_qr() const { return qr_basis.phi(); }
};
SpecBases build_spec_bases(const ProblemSpec& s);

// Z^{(q)}(x, Phi(q+r)) and its x-derivative, closed form on the q-basis:
//   value = r * sum_i a_i e^{theta_i x} / (Phi(q+r) - theta_i)   for x >= 0,
//   value = e^{Phi(q+r) x}                                       for x < 0,
//   derivative = Phi(q+r)*value - r*W^{(q)}(x).
std::pair<double, double> Z_phi(const ScaleBasis& q_basis, double phi_qr, double r, double x);
std::pair<double, double> Z_phi(const SpecBases& bases, double x);
std::pair<double, double> Z_phi(const ProblemSpec& s, double x);

// Discounted two-sided exit functionals from x in [0, b]:
//   first  = E[e^{-q tau_b^+}; up-crossing of b before passage below 0]
//          = W(x)/W(b)
//   second = E[e^{-q tau_0^-}; passage below 0 before up-crossing of b]
//          = Z(x) - Z(b) W(x)/W(b)
std::pair<double, double> two_sided_exit(const ScaleBasis& q_basis, double x, double b);
std::pair<double, double> two_sided_exit(const ProblemSpec& s, double x, double b);

} // namespace pdk
