#pragma once

#include "pdk/scale.hpp"

namespace pdk {

struct BarrierSolution {
    double b_star = 0.0;
    double b_bar = 0.0;
    double phi_q = 0.0;
    double phi_qr = 0.0;
    double h_at_zero = 0.0;
    bool positive_criterion = false;
    double smooth_fit_residual = 0.0;  // |r W'(b*) - Phi(q+r) Z'(b*, Phi(q+r))|, 0 when b* = 0
    bool b_bar_capped = false;         // W'' sign change not found before the search cap
};

// Smooth-fit gap, exponentially damped:
//   h(b) = e^{-Phi(q+r) b} [ r W'(b) - Phi(q+r) Z'(b, Phi(q+r)) ]
//        = -r sum_i a_i theta_i^2 e^{(theta_i - Phi(q+r)) b} / (Phi(q+r) - theta_i).
// Strictly decreasing on (0, b_bar), increasing to 0 on (b_bar, inf).
double h(const SpecBases& bases, double b);
double h(const ProblemSpec& s, double b);

// Limit h(0+) = r (W'(0+) + Phi(q+r) W(0+)) - Phi(q+r)^2.
double h_at_zero(const SpecBases& bases);
double h_at_zero(const ProblemSpec& s);

// b* > 0 iff h(0+) > 0.
bool positive_barrier_criterion(const SpecBases& bases);
bool positive_barrier_criterion(const ProblemSpec& s);

// Unique root of W'' on (0, inf), or 0 when W''(0+) >= 0. This is the optimal
// barrier of the continuous-payment (r -> inf) problem.
double bar_b(const ScaleBasis& q_basis);
double bar_b(const ProblemSpec& s);

// Full solve: classification, b_bar, and the root of h on (0, b_bar) when the
// positivity criterion holds.
BarrierSolution solve_barrier(const SpecBases& bases);
BarrierSolution solve_barrier(const ProblemSpec& s);

} // namespace pdk
