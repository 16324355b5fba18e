#include "pdk/roots.hpp"

#include <cmath>
#include <algorithm>

#include "pdk/errors.hpp"

namespace pdk {

double find_root(const std::function<double(double)>& f,
                 const std::function<double(double)>& df,
                 double lo, double hi,
                 const RootOptions& opt) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw numerical_error("find_root: no sign change on bracket");

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < opt.max_iter; ++it) {
        double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) { lo = x; flo = fx; }
        else                           { hi = x; fhi = fx; }

        const double width = hi - lo;
        const double tol = std::max(opt.xtol_abs, opt.xtol_rel * std::max(std::abs(lo), std::abs(hi)));
        if (width <= tol) return 0.5 * (lo + hi);

        double next = 0.5 * (lo + hi);
        if (df) {
            const double d = df(x);
            if (d != 0.0 && std::isfinite(d)) {
                const double cand = x - fx / d;
                if (cand > lo && cand < hi) next = cand;
            }
        }
        x = next;
    }
    return 0.5 * (lo + hi);
}

} // namespace pdk
