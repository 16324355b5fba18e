#pragma once

#include <pdk/expsum.hpp>
#include <pdk/model.hpp>

#include <functional>

namespace pdk {

// (L - q) f at x for piecewise exponential-affine f, fully closed form.
// Each jump integral is a finite sum of exponentials evaluated with combined
// exponents, so nothing overflows even when segments carry steep rates.
double generator_apply(const LevyModel& model, double q, const PiecewiseExpAffine& f, double x);

// Generic callable with optional analytic derivatives; missing derivatives
// fall back to central differences. Only needs f on (-inf, x], and f must be
// bounded below 0 in the integrable sense (identically 0 there is typical).
struct GenericFn {
    std::function<double(double)> f;
    std::function<double(double)> d1; // optional
    std::function<double(double)> d2; // optional
};

// Quadrature-based application; jump integrals use composite Simpson panels
// sized so that shrinking tol shrinks the residual accordingly.
double generator_apply(const LevyModel& model, double q, const GenericFn& f, double x,
                       double quad_tol = 1e-8);

} // namespace pdk
