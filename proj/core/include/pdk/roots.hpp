#pragma once

#include <functional>

namespace pdk {

struct RootOptions {
    double xtol_abs = 0.0;
    double xtol_rel = 1e-15;
    int max_iter = 200;
};

// Root of f inside [lo, hi] where f(lo) and f(hi) have opposite signs.
// Safeguarded Newton: Newton steps are taken when they stay inside the current
// bracket, otherwise bisection; the bracket never loses its sign change.
// Converges to essentially machine precision for smooth f.
// Throws pdk::numerical_error if the initial bracket has no sign change or the
// iteration budget is exhausted before the tolerance is met.
double find_root(const std::function<double(double)>& f,
                 const std::function<double(double)>& df,  // may be nullptr
                 double lo, double hi,
                 const RootOptions& opt = {});

} // namespace pdk
