#pragma once

#include <functional>

namespace pdk {

// Adaptive Simpson on [a,b] to absolute tolerance tol. Used as a cross-check
// oracle against the closed-form exponential-sum machinery, never in hot paths.
double adaptive_simpson(const std::function<double(double)>& f,
                        double a, double b, double tol, int max_depth = 40);

// Composite Simpson with a fixed even panel count. Deterministic cost/accuracy
// profile: error ~ panels^-4 for smooth integrands.
double composite_simpson(const std::function<double(double)>& f,
                         double a, double b, int panels);

// Panel count used by tolerance-driven fixed-panel integration. Chosen so that
// halving tol multiplies the panel count by >= 2^(1/3), hence the Simpson error
// by <= 2^(-4/3) < 1/2.
int panels_for_tolerance(double tol);

} // namespace pdk
