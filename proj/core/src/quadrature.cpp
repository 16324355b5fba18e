#include "pdk/quadrature.hpp"

#include <cmath>
#include <algorithm>

namespace pdk {

namespace {

double simpson_step(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_rec(const std::function<double(double)>& f,
                    double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_step(a, fa, m, fm, flm);
    const double right = simpson_step(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f,
                        double a, double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson_step(a, fa, b, fb, fm);
    return adaptive_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double composite_simpson(const std::function<double(double)>& f,
                         double a, double b, int panels) {
    if (a == b) return 0.0;
    if (panels < 2) panels = 2;
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

int panels_for_tolerance(double tol) {
    tol = std::clamp(tol, 1e-14, 1.0);
    int n = static_cast<int>(std::ceil(2.0 * std::pow(tol, -1.0 / 3.0)));
    if (n % 2) ++n;
    return std::max(n, 8);
}

} // namespace pdk
