#pragma once

#include <pdk/expsum.hpp>
#include <pdk/scale.hpp>

namespace pdk {

// Expected discounted dividends for the periodic barrier strategy at level b.
//
// The function is assembled once into exponential-sum segments:
//   x < 0   : 0
//   0<=x<=b : multiple of the q-scale function
//   x > b   : decaying exponentials in (x-b) plus an affine tail
// so evaluation and differentiation are closed-form. The growing exponential
// mode cancels identically above the barrier; construction verifies the
// cancellation and drops the mode, which keeps the tail evaluable for
// arbitrarily large x.
class ValueFunction {
public:
    ValueFunction(const SpecBases& bases, double b);
    ValueFunction(const ProblemSpec& spec, double b);

    double barrier() const { return b_; }
    const SpecBases& bases() const { return bases_; }

    double value(double x) const { return pw_.eval(x); }
    double operator()(double x) const { return pw_.eval(x); }

    // order in {1,2,3}; at x == b this is the right-hand limit.
    double derivative(double x, int order = 1) const;
    // One-sided limits at the barrier (valid for any x, but meant for x = b).
    double derivative_below(double x, int order = 1) const;
    double derivative_above(double x, int order = 1) const;

    // Jump of v'' across the barrier in closed form:
    // r * W^{(q+r)}(0) * (r * W^{(q)'}(b) / D - 1), zero exactly when b is the
    // optimizer with smooth fit.
    double second_derivative_jump() const;

    // Slope as x -> infinity (r / (q + r)).
    double tail_slope() const;

    const PiecewiseExpAffine& piecewise() const { return pw_; }

private:
    SpecBases bases_;
    double b_ = 0.0;
    double below_scale_ = 0.0; // r / D with D = Phi(q+r) * dZ/dx(b, Phi(q+r))
    PiecewiseExpAffine pw_;
};

// Value of the classical (continuous-observation) reflection strategy at its
// optimal barrier: W^{(q)}(x)/W^{(q)'}(bbar) below bbar, affine with unit
// slope above. Serves as the r -> infinity envelope.
class ClassicalValue {
public:
    explicit ClassicalValue(const ProblemSpec& spec);
    ClassicalValue(const ScaleBasis& q_basis, double b_bar);

    double barrier() const { return b_bar_; }
    double operator()(double x) const;

private:
    ScaleBasis basis_;
    double b_bar_ = 0.0;
    double slope_at_bar_ = 0.0;
};

double classical_value(const ProblemSpec& spec, double x);

} // namespace pdk
