#include <pdk/generator.hpp>

#include <pdk/errors.hpp>
#include <pdk/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdk {

namespace {

// Antiderivative (in s) of lambda * f(y) * e^{-lambda (x - y)} for one
// exponential-affine segment, with every exponent combined before exp() so
// steep segment rates cannot overflow. Evaluating at -inf gives 0.
double jump_antideriv(const ExpAffine& seg, double lambda, double x, double s) {
    if (std::isinf(s) && s < 0.0) return 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < seg.a.size(); ++k) {
        double denom = seg.beta[k] + lambda;
        if (std::abs(denom) < 1e-12 * (1.0 + lambda))
            throw numerical_error("jump rate coincides with a segment rate");
        double expo = seg.beta[k] * (s - seg.shift) - lambda * (x - s);
        total += lambda * seg.a[k] * std::exp(expo) / denom;
    }
    if (seg.c0 != 0.0 || seg.c1 != 0.0)
        total += std::exp(-lambda * (x - s)) * (seg.c0 + seg.c1 * s - seg.c1 / lambda);
    return total;
}

double jump_integral(const PiecewiseExpAffine& f, double lambda, double x) {
    const double inf = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t k = 0; k < f.segments.size(); ++k) {
        double lo = (k == 0) ? -inf : f.breaks[k - 1];
        double hi = (k == f.breaks.size()) ? inf : f.breaks[k];
        hi = std::min(hi, x);
        if (hi <= lo) continue;
        const ExpAffine& seg = f.segments[k];
        if (seg.a.empty() && seg.c0 == 0.0 && seg.c1 == 0.0) continue;
        total += jump_antideriv(seg, lambda, x, hi) - jump_antideriv(seg, lambda, x, lo);
    }
    return total;
}

} // namespace

double generator_apply(const LevyModel& model, double q, const PiecewiseExpAffine& f, double x) {
    double out = model.c * f.eval(x, 1);
    if (model.sigma > 0.0) out += 0.5 * model.sigma * model.sigma * f.eval(x, 2);
    double fx = f.eval(x);
    out -= q * fx;
    for (const auto& jt : model.jumps)
        out += jt.rate * (jump_integral(f, jt.lambda, x) - fx);
    return out;
}

double generator_apply(const LevyModel& model, double q, const GenericFn& fn, double x,
                       double quad_tol) {
    const double scale = std::max(1.0, std::abs(x));
    double d1 = 0.0, d2 = 0.0;
    if (fn.d1) {
        d1 = fn.d1(x);
    } else {
        double h = 6e-6 * scale;
        d1 = (fn.f(x + h) - fn.f(x - h)) / (2.0 * h);
    }
    if (model.sigma > 0.0) {
        if (fn.d2) {
            d2 = fn.d2(x);
        } else {
            double h = 1.2e-4 * scale;
            d2 = (fn.f(x + h) - 2.0 * fn.f(x) + fn.f(x - h)) / (h * h);
        }
    }

    const double fx = fn.f(x);
    double out = model.c * d1 + 0.5 * model.sigma * model.sigma * d2 - q * fx;

    const int n = panels_for_tolerance(quad_tol);
    for (const auto& jt : model.jumps) {
        const double lambda = jt.lambda;
        // Integrate u in [0, U]; beyond U the e^{-lambda u} weight is below
        // ~1e-22 relative, negligible for any polynomially bounded f.
        const double U = std::max(x, 0.0) + 50.0 / lambda;
        auto integrand = [&](double u) { return fn.f(x - u) * std::exp(-lambda * u); };
        double I;
        if (x > 0.0 && x < U) {
            // Split where the argument crosses 0, the usual kink location.
            // The right piece starts a hair past the crossing: f may jump at
            // 0 (bounded-variation scale functions do), and sampling u = x
            // exactly would pick up the wrong one-sided limit.
            const double xr = x + 1e-12 * (1.0 + x);
            I = composite_simpson(integrand, 0.0, x, n) + composite_simpson(integrand, xr, U, n);
        } else {
            I = composite_simpson(integrand, 0.0, U, n);
        }
        out += jt.rate * (lambda * I - fx);
    }
    return out;
}

} // namespace pdk
