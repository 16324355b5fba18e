#include <pdk/verify.hpp>

#include <pdk/barrier.hpp>
#include <pdk/generator.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pdk {

namespace {

PiecewiseExpAffine one_segment(std::vector<double> a, std::vector<double> beta, double c0,
                               double c1, double below_c0, double below_c1) {
    PiecewiseExpAffine pw;
    pw.breaks = {0.0};
    ExpAffine below;
    below.c0 = below_c0;
    below.c1 = below_c1;
    ExpAffine above;
    above.a = std::move(a);
    above.beta = std::move(beta);
    above.c0 = c0;
    above.c1 = c1;
    pw.segments = {below, above};
    return pw;
}

} // namespace

PiecewiseExpAffine piecewise_W(const ScaleBasis& basis) {
    return one_segment(basis.coeffs, basis.roots, 0.0, 0.0, 0.0, 0.0);
}

PiecewiseExpAffine piecewise_Z(const ScaleBasis& basis) {
    std::vector<double> a(basis.roots.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = basis.rate_p * basis.coeffs[i] / basis.roots[i];
        s += a[i];
    }
    return one_segment(std::move(a), basis.roots, 1.0 - s, 0.0, 1.0, 0.0);
}

PiecewiseExpAffine piecewise_Wbar(const ScaleBasis& basis) {
    std::vector<double> a(basis.roots.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = basis.coeffs[i] / basis.roots[i];
        s += a[i];
    }
    return one_segment(std::move(a), basis.roots, -s, 0.0, 0.0, 0.0);
}

PiecewiseExpAffine piecewise_Wbarbar(const ScaleBasis& basis) {
    std::vector<double> a(basis.roots.size());
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double th = basis.roots[i];
        a[i] = basis.coeffs[i] / (th * th);
        s1 += basis.coeffs[i] / th;
        s2 += a[i];
    }
    return one_segment(std::move(a), basis.roots, -s2, -s1, 0.0, 0.0);
}

IdentitySuiteReport generator_identity_suite(const SpecBases& bases, std::vector<double> grid,
                                             double tol) {
    if (grid.empty()) grid = {0.25, 0.5, 1.0, 2.0, 5.0, 10.0};
    const LevyModel& m = bases.spec.model;
    const double q = bases.spec.q;
    const double r = bases.spec.r;

    PiecewiseExpAffine wq = piecewise_W(bases.q_basis);
    PiecewiseExpAffine zq = piecewise_Z(bases.q_basis);
    PiecewiseExpAffine wqr = piecewise_W(bases.qr_basis);
    PiecewiseExpAffine wbar = piecewise_Wbar(bases.qr_basis);
    PiecewiseExpAffine wbb = piecewise_Wbarbar(bases.qr_basis);

    struct Case {
        const char* name;
        const PiecewiseExpAffine* f;
        std::function<double(double, double)> rhs; // (y, f(y)) -> rhs
    };
    const Case cases[] = {
        {"W_q", &wq, [](double, double) { return 0.0; }},
        {"Z_q", &zq, [](double, double) { return 0.0; }},
        {"W_qr", &wqr, [r](double, double fy) { return r * fy; }},
        {"Wbar_qr", &wbar, [r](double, double fy) { return 1.0 + r * fy; }},
        {"Wbarbar_qr", &wbb, [r](double y, double fy) { return y + r * fy; }},
    };

    IdentitySuiteReport rep;
    rep.grid = grid;
    rep.tol = tol;
    for (const Case& cs : cases) {
        IdentityResult res;
        res.name = cs.name;
        for (double y : grid) {
            double fy = cs.f->eval(y);
            double rhs = cs.rhs(y, fy);
            double gen = generator_apply(m, q, *cs.f, y);
            double scaled = std::abs(gen - rhs) / (1.0 + std::max(std::abs(fy), std::abs(rhs)));
            res.max_scaled_residual = std::max(res.max_scaled_residual, scaled);
        }
        rep.max_residual = std::max(rep.max_residual, res.max_scaled_residual);
        rep.results.push_back(std::move(res));
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

MaxTerm best_payout_gain(const ValueFunction& v, double x) {
    const double vx = v(x);
    auto m = [&](double l) { return l + v(x - l) - vx; };

    MaxTerm best{0.0, 0.0}; // l = 0 always admissible, gain 0
    if (!(x > 0.0)) return best;
    const int N = 512;
    int best_i = 0;
    for (int i = 0; i <= N; ++i) {
        double l = x * static_cast<double>(i) / N;
        double val = m(l);
        if (val > best.value) {
            best.value = val;
            best.argmax = l;
            best_i = i;
        }
    }
    // Golden-section refinement around the best coarse cell.
    double lo = x * static_cast<double>(std::max(0, best_i - 1)) / N;
    double hi = x * static_cast<double>(std::min(N, best_i + 1)) / N;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = m(c), fd = m(d);
    for (int it = 0; it < 80 && (b - a) > 1e-13 * (1.0 + x); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = m(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = m(d);
        }
    }
    double mid = 0.5 * (a + b), fmid = m(mid);
    if (fmid > best.value) best = {fmid, mid};
    return best;
}

std::vector<double> default_verify_grid(double upper, int n, double lo) {
    std::vector<double> g(n);
    double ratio = std::log(upper / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(ratio * i);
    return g;
}

VerificationReport hjb_check(const ProblemSpec& spec, double b, const VerifyOptions& opt) {
    return hjb_check(build_spec_bases(spec), b, opt);
}

VerificationReport hjb_check(const SpecBases& bases, double b, const VerifyOptions& opt) {
    BarrierSolution sol = solve_barrier(bases);
    ValueFunction v(bases, b);
    const double r = bases.spec.r;
    const double q = bases.spec.q;

    VerificationReport rep;
    rep.b = b;
    rep.b_star = sol.b_star;
    rep.b_bar = sol.b_bar;
    rep.smoothness_jump = v.second_derivative_jump();

    std::vector<double> grid = opt.grid;
    if (grid.empty()) {
        double upper = 4.0 * std::max({sol.b_bar, b, 1.0});
        grid = default_verify_grid(upper, opt.grid_points);
    }

    bool ok = true;
    for (double x : grid) {
        PointCheck pc;
        pc.x = x;
        double gen = generator_apply(bases.spec.model, q, v.piecewise(), x);
        double vx = v(x);

        // Residual of the equation the barrier strategy itself satisfies:
        // below b the generator kills v; above b it is balanced by the
        // penalty of holding x - b above the barrier.
        double rhs = (x > b) ? -r * ((x - b) + v(b) - vx) : 0.0;
        pc.generator_residual =
            std::abs(gen - rhs) / (1.0 + std::max(std::abs(vx), std::abs(rhs)));

        MaxTerm mt = best_payout_gain(v, x);
        pc.max_term = mt.value;
        pc.argmax = mt.argmax;
        pc.hjb_slack = gen + r * mt.value;
        double expected_l = (x > b) ? (x - b) : 0.0;
        pc.argmax_error = std::abs(mt.argmax - expected_l);
        pc.slope = v.derivative(x, 1);

        if (pc.generator_residual > opt.gen_tol) ok = false;
        if (pc.hjb_slack > opt.slack_tol) ok = false;
        if (pc.argmax_error > opt.argmax_tol) ok = false;
        if (x <= b && mt.value > opt.below_gain_tol) ok = false;

        char buf[160];
        if (x < b && pc.slope < 1.0 - opt.slope_tol) {
            std::snprintf(buf, sizeof buf, "v'(%.6g) = %.12g below 1 before the barrier", x,
                          pc.slope);
            rep.slope_violations.emplace_back(buf);
        }
        if (x > b && pc.slope > 1.0 + opt.slope_tol) {
            std::snprintf(buf, sizeof buf, "v'(%.6g) = %.12g above 1 past the barrier", x,
                          pc.slope);
            rep.slope_violations.emplace_back(buf);
        }
        if (x > b && pc.slope < -opt.slope_tol) {
            std::snprintf(buf, sizeof buf, "v'(%.6g) = %.12g negative past the barrier", x,
                          pc.slope);
            rep.slope_violations.emplace_back(buf);
        }

        rep.max_generator_residual = std::max(rep.max_generator_residual, pc.generator_residual);
        rep.max_hjb_slack = std::max(rep.max_hjb_slack, pc.hjb_slack);
        rep.max_argmax_error = std::max(rep.max_argmax_error, pc.argmax_error);
        rep.points.push_back(pc);
    }
    if (!rep.slope_violations.empty()) ok = false;
    rep.pass = ok;
    return rep;
}

} // namespace pdk
