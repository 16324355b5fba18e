#include "pdk/barrier.hpp"

#include <cmath>

#include "pdk/errors.hpp"
#include "pdk/roots.hpp"

namespace pdk {

double h(const SpecBases& bases, double b) {
    const double ph = bases.phi_qr();
    const ScaleBasis& qb = bases.q_basis;
    double s = 0.0;
    for (std::size_t i = 0; i < qb.roots.size(); ++i) {
        const double t = qb.roots[i];
        s += qb.coeffs[i] * t * t * std::exp((t - ph) * b) / (ph - t);
    }
    return -bases.spec.r * s;
}

double h(const ProblemSpec& s, double b) { return h(build_spec_bases(s), b); }

double h_at_zero(const SpecBases& bases) {
    const double ph = bases.phi_qr();
    const ScaleBasis& qb = bases.q_basis;
    return bases.spec.r * (qb.w0_prime + ph * qb.w0) - ph * ph;
}

double h_at_zero(const ProblemSpec& s) { return h_at_zero(build_spec_bases(s)); }

bool positive_barrier_criterion(const SpecBases& bases) { return h_at_zero(bases) > 0.0; }

bool positive_barrier_criterion(const ProblemSpec& s) {
    return positive_barrier_criterion(build_spec_bases(s));
}

namespace {

// r W^{(q)'}(b) - Phi(q+r) Z^{(q)'}(b, Phi(q+r)), i.e. h(b) without the
// e^{-Phi(q+r) b} damping.  Same roots and sign as h, but its terms grow at
// most like e^{Phi(q) b}, so it stays representable even when Phi(q+r) b is
// far past the range of double exponents.
double gap(const SpecBases& bases, double b) {
    const double ph = bases.phi_qr();
    const ScaleBasis& qb = bases.q_basis;
    double s = 0.0;
    for (std::size_t i = 0; i < qb.roots.size(); ++i) {
        const double t = qb.roots[i];
        s += qb.coeffs[i] * t * t * std::exp(t * b) / (ph - t);
    }
    return -bases.spec.r * s;
}

double gap_deriv(const SpecBases& bases, double b) {
    const double ph = bases.phi_qr();
    const ScaleBasis& qb = bases.q_basis;
    double s = 0.0;
    for (std::size_t i = 0; i < qb.roots.size(); ++i) {
        const double t = qb.roots[i];
        s += qb.coeffs[i] * t * t * t * std::exp(t * b) / (ph - t);
    }
    return -bases.spec.r * s;
}

// e^{-Phi(p) x} W''(x): same sign as W'', bounded for large x.
double damped_w2(const ScaleBasis& b, double x) {
    const double ph = b.roots.back();
    double s = 0.0;
    for (std::size_t i = 0; i < b.roots.size(); ++i) {
        const double t = b.roots[i];
        s += b.coeffs[i] * t * t * std::exp((t - ph) * x);
    }
    return s;
}

} // namespace

double bar_b(const ScaleBasis& q_basis) {
    if (damped_w2(q_basis, 1e-9) >= 0.0) return 0.0;
    const double cap = 1e3 * (1.0 / q_basis.phi() + 1.0);
    double lo = 1e-9, hi = 1e-6;
    while (damped_w2(q_basis, hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap) return cap;  // flagged by the caller
    }
    auto f = [&](double x) { return damped_w2(q_basis, x); };
    return find_root(f, nullptr, lo, hi);
}

double bar_b(const ProblemSpec& s) { return bar_b(build_basis(s.model, s.q)); }

BarrierSolution solve_barrier(const SpecBases& bases) {
    BarrierSolution out;
    out.phi_q = bases.phi_q();
    out.phi_qr = bases.phi_qr();
    out.h_at_zero = h_at_zero(bases);
    out.positive_criterion = out.h_at_zero > 0.0;

    out.b_bar = bar_b(bases.q_basis);
    const double cap = 1e3 * (1.0 / bases.phi_q() + 1.0);
    out.b_bar_capped = out.b_bar >= cap;

    if (!out.positive_criterion) {
        out.b_star = 0.0;
        out.smooth_fit_residual = 0.0;
        return out;
    }
    if (!(out.b_bar > 0.0))
        throw numerical_error("solve_barrier: positive criterion with b_bar = 0");

    // h decreases from h(0+) > 0 on (0, b_bar) and h(b_bar) < 0, so the root
    // is bracketed and unique there.  Solve on the undamped gap: for large r
    // the damping factor alone underflows h to zero across the bracket.
    auto f = [&](double b) { return gap(bases, b); };
    auto df = [&](double b) { return gap_deriv(bases, b); };
    if (!(f(out.b_bar) < 0.0))
        throw numerical_error("solve_barrier: h(b_bar) not negative");
    out.b_star = find_root(f, df, 1e-12, out.b_bar, RootOptions{1e-13, 1e-15, 300});

    out.smooth_fit_residual = std::abs(gap(bases, out.b_star));
    return out;
}

BarrierSolution solve_barrier(const ProblemSpec& s) {
    return solve_barrier(build_spec_bases(s));
}

} // namespace pdk
