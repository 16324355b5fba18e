// Acceptance gate: ten end-to-end criteria, one verdict line each.
// Exit code 0 iff all criteria pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdk/barrier.hpp"
#include "pdk/presets.hpp"
#include "pdk/quadrature.hpp"
#include "pdk/scale.hpp"
#include "pdk/simulate.hpp"
#include "pdk/sweep.hpp"
#include "pdk/value.hpp"
#include "pdk/verify.hpp"

using namespace pdk;

namespace {

struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw check_failure(msg);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Classification of the six standard cases.

void criterion_classification() {
    for (const auto& name : {"case1", "case1p"}) {
        const BarrierSolution sol = solve_barrier(preset(name));
        require(sol.b_star > 0.0, std::string(name) + ": expected an interior barrier");
        require(sol.positive_criterion, std::string(name) + ": criterion flag");
    }
    for (const auto& name : {"case2", "case2p", "case3", "case3p"}) {
        const BarrierSolution sol = solve_barrier(preset(name));
        require(sol.b_star == 0.0, std::string(name) + ": expected a boundary barrier");
        require(!sol.positive_criterion, std::string(name) + ": criterion flag");
    }
    for (const auto& name : {"case3", "case3p"}) {
        const SpecBases bases = build_spec_bases(preset(name));
        require(solve_barrier(bases).b_bar == 0.0, std::string(name) + ": expected b_bar = 0");
        double prev = -1e300;
        for (int i = 1; i <= 40; ++i) {
            const double b = 20.0 * i / 40.0;
            const double hb = h(bases, b);
            require(hb < 0.0, std::string(name) + ": h(" + fmt(b) + ") not negative");
            require(hb > prev, std::string(name) + ": h not increasing at b=" + fmt(b));
            prev = hb;
        }
        require(prev > -1e-3, std::string(name) + ": h(20) should be nearly 0, got " + fmt(prev));
    }
}

// ---------------------------------------------------------------------------
// 2. Closed-form oracle for the drift + exp(1)-jump model (sigma = 0): with a
// single unit-rate jump, psi(theta) = p reduces to the quadratic
// c theta^2 + (c - kappa - p) theta - p = 0, so every solver output can be
// cross-checked from scratch in a few lines.

struct QuadOracle {
    double th_neg, th_pos, a_neg, a_pos;
};

QuadOracle quad_basis(double c, double p) {
    const double A = c, B = c - 1.0 - p, C = -p;
    const double disc = std::sqrt(B * B - 4 * A * C);
    const double th_pos = (-B + disc) / (2 * A);
    const double th_neg = (-B - disc) / (2 * A);
    auto psi_d = [&](double th) { return c - 1.0 / ((1.0 + th) * (1.0 + th)); };
    return {th_neg, th_pos, 1.0 / psi_d(th_neg), 1.0 / psi_d(th_pos)};
}

void criterion_oracle_match() {
    const double c = 1.5, q = 0.05, r = 0.5;
    const QuadOracle oq = quad_basis(c, q);
    const QuadOracle oqr = quad_basis(c, q + r);

    // Concavity switch of W = a1 e^{t1 x} + a2 e^{t2 x}.
    const double b_bar_o = std::log(-oq.a_neg * oq.th_neg * oq.th_neg /
                                    (oq.a_pos * oq.th_pos * oq.th_pos)) /
                           (oq.th_pos - oq.th_neg);

    // Root of the damped smooth-fit gap, bisected on (0, b_bar).
    auto h_o = [&](double b) {
        double s = 0.0;
        const double th[2] = {oq.th_neg, oq.th_pos};
        const double a[2] = {oq.a_neg, oq.a_pos};
        for (int i = 0; i < 2; ++i)
            s += a[i] * th[i] * th[i] * std::exp((th[i] - oqr.th_pos) * b) /
                 (oqr.th_pos - th[i]);
        return -r * s;
    };
    double lo = 1e-12, hi = b_bar_o;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h_o(mid) > 0.0 ? lo : hi) = mid;
    }
    const double b_star_o = 0.5 * (lo + hi);

    const BarrierSolution sol = solve_barrier(preset("case1p"));
    require(std::abs(sol.phi_q - oq.th_pos) < 1e-4,
            "phi(q): " + fmt(sol.phi_q) + " vs oracle " + fmt(oq.th_pos));
    require(std::abs(sol.phi_qr - oqr.th_pos) < 1e-4,
            "phi(q+r): " + fmt(sol.phi_qr) + " vs oracle " + fmt(oqr.th_pos));
    require(std::abs(sol.b_bar - b_bar_o) < 1e-4,
            "b_bar: " + fmt(sol.b_bar) + " vs oracle " + fmt(b_bar_o));
    require(std::abs(sol.b_star - b_star_o) < 1e-4,
            "b_star: " + fmt(sol.b_star) + " vs oracle " + fmt(b_star_o));

    // Smooth fit, relative to the terms being balanced.
    const SpecBases bases = build_spec_bases(preset("case1p"));
    const double scale = r * bases.q_basis.W(sol.b_star, 1);
    require(sol.smooth_fit_residual <= 1e-8 * scale,
            "smooth-fit residual " + fmt(sol.smooth_fit_residual));
}

// ---------------------------------------------------------------------------
// 3. Scale-function identity suite.

void criterion_scale_identities() {
    for (const auto& name : preset_names()) {
        const ProblemSpec s = preset(name);
        for (double p : {s.q, s.q + s.r}) {
            const ScaleBasis basis = build_basis(s.model, p);
            const double ph = basis.phi();

            // Transform check at five points spread over (phi+0.1, phi+5].
            for (int j = 0; j < 5; ++j) {
                const double theta = ph + 0.1 + j * 4.9 / 4.0;
                const double ref = 1.0 / (laplace_exponent(s.model, theta) - p);
                const double gap = theta - ph;
                double X = std::log(std::max(10.0, basis.coeffs.back() /
                                                       (1e-12 * ref * gap))) /
                           gap;
                X = std::max(X, 10.0);
                // Combine the exponents before exp(): evaluating W(x) on its
                // own overflows long before the e^{-theta x} damping brings
                // the product back down.
                auto damped = [&](double x) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < basis.roots.size(); ++i)
                        acc += basis.coeffs[i] * std::exp((basis.roots[i] - theta) * x);
                    return acc;
                };
                const double I = adaptive_simpson(damped, 0.0, X, 1e-9 * ref);
                require(std::abs(I / ref - 1.0) <= 1e-6,
                        std::string(name) + " transform mismatch " + fmt(I / ref - 1.0) +
                            " at theta=" + fmt(theta));
            }

            // Boundary values.
            const double w0_ref = (s.model.sigma > 0.0) ? 0.0 : 1.0 / s.model.c;
            const double w0p_ref = (s.model.sigma > 0.0)
                                       ? 2.0 / (s.model.sigma * s.model.sigma)
                                       : (p + s.model.total_jump_rate()) / (s.model.c * s.model.c);
            require(std::abs(basis.W(0.0) - w0_ref) <= 1e-10,
                    std::string(name) + " W(0) boundary");
            require(std::abs(basis.W(0.0, 1) - w0p_ref) <= 1e-10 * std::max(1.0, w0p_ref),
                    std::string(name) + " W'(0+) boundary");

            // Mixture structure: only the top root carries positive weight.
            for (std::size_t i = 0; i + 1 < basis.roots.size(); ++i)
                require(basis.coeffs[i] < 0.0, std::string(name) + " coefficient sign");
        }

        // Rate-shift convolution at four points.
        const ScaleBasis bq = build_basis(s.model, s.q);
        const ScaleBasis bqr = build_basis(s.model, s.q + s.r);
        for (double x : {0.5, 1.0, 2.0, 5.0}) {
            auto f = [&](double u) { return bqr.W(u) * bq.W(x - u); };
            // Absolute tolerance scaled to the integrand so steep presets
            // do not drive the recursion to unreachable precision.
            const double mag = 1.0 + x * std::max({f(0.0), f(0.5 * x), f(x)});
            const double conv = adaptive_simpson(f, 0.0, x, 1e-12 * mag);
            const double lhs = bqr.W(x) - bq.W(x);
            const double rhs = s.r * conv;
            require(std::abs(lhs - rhs) / (1.0 + std::abs(lhs)) <= 1e-8,
                    std::string(name) + " convolution at x=" + fmt(x) + ": " +
                        fmt(lhs - rhs));
        }
    }
}

// ---------------------------------------------------------------------------
// 4. Generator identity suite.

void criterion_generator_identities() {
    for (const auto& name : preset_names()) {
        const IdentitySuiteReport rep = generator_identity_suite(build_spec_bases(preset(name)));
        require(rep.results.size() == 5, std::string(name) + ": five identities expected");
        for (const auto& res : rep.results)
            require(res.max_scaled_residual <= 1e-7,
                    std::string(name) + " " + res.name + " residual " +
                        fmt(res.max_scaled_residual));
    }
}

// ---------------------------------------------------------------------------
// 5. Variational-inequality certification, plus a power check on a barrier
// that is known to be wrong.

void criterion_hjb() {
    for (const auto& name : preset_names()) {
        const SpecBases bases = build_spec_bases(preset(name));
        const double bs = solve_barrier(bases).b_star;
        const VerificationReport rep = hjb_check(bases, bs);
        require(rep.max_generator_residual <= 1e-6,
                std::string(name) + " generator residual " + fmt(rep.max_generator_residual));
        require(rep.max_hjb_slack <= 1e-6,
                std::string(name) + " slack " + fmt(rep.max_hjb_slack));
        require(rep.max_argmax_error <= 1e-4,
                std::string(name) + " payout location error " + fmt(rep.max_argmax_error));
        require(rep.slope_violations.empty(),
                std::string(name) + " slope: " +
                    (rep.slope_violations.empty() ? "" : rep.slope_violations.front()));
        require(rep.pass, std::string(name) + " verification verdict");
    }

    const VerificationReport forced = hjb_check(preset("case1p"), 1.0);
    require(!forced.pass, "forced barrier should not certify");
    require(forced.max_hjb_slack > 1e-3,
            "forced barrier slack only " + fmt(forced.max_hjb_slack));
}

// ---------------------------------------------------------------------------
// 6. Smoothness order at the optimum.

void criterion_smoothness() {
    {
        const ProblemSpec s = preset("case1p");
        const double bs = solve_barrier(s).b_star;
        const ValueFunction v(s, bs);
        require(std::abs(v.second_derivative_jump()) <= 1e-8,
                "curvature jump " + fmt(v.second_derivative_jump()));
        const double direct = v.derivative_above(bs, 2) - v.derivative_below(bs, 2);
        require(std::abs(direct) <= 1e-8, "assembled curvature jump " + fmt(direct));
    }
    {
        const ProblemSpec s = preset("case1");
        const double bs = solve_barrier(s).b_star;
        const ValueFunction v(s, bs);
        const double eps = 1e-5;
        const double below = (3.0 * v.derivative_below(bs, 2) -
                              4.0 * v.derivative(bs - eps, 2) + v.derivative(bs - 2 * eps, 2)) /
                             (2.0 * eps);
        const double above = (-3.0 * v.derivative_above(bs, 2) +
                              4.0 * v.derivative(bs + eps, 2) - v.derivative(bs + 2 * eps, 2)) /
                             (2.0 * eps);
        const double rel = std::abs(below - above) /
                           std::max({1e-30, std::abs(below), std::abs(above)});
        require(rel <= 1e-5, "one-sided third derivatives " + fmt(below) + " vs " +
                                 fmt(above) + " (rel " + fmt(rel) + ")");
    }
}

// ---------------------------------------------------------------------------
// 7. Monte Carlo cross-validation.

void criterion_monte_carlo(std::string& note) {
    const double t_begin = now_seconds();
    {
        const ProblemSpec s = preset("case1p");
        const double bs = solve_barrier(s).b_star;
        const ValueFunction v_opt(s, bs);
        const ValueFunction v_one(s, 1.0);
        SimConfig cfg;
        cfg.n_paths = 200000;
        cfg.seed = 20240817;
        for (double b : {bs, 1.0}) {
            const ValueFunction& v = (b == bs) ? v_opt : v_one;
            for (double x0 : {0.5, 2.0, 6.0}) {
                const DividendEstimate est = simulate_value(s, b, x0, cfg);
                const double z = (est.mean - v(x0)) / est.std_error;
                require(std::abs(z) <= 3.0, "z=" + fmt(z) + " at b=" + fmt(b) +
                                                ", x0=" + fmt(x0));
            }
        }
        const double elapsed = now_seconds() - t_begin;
        require(elapsed < 30.0, "exact-path runs took " + fmt(elapsed) + " s");
    }
    {
        const ProblemSpec s = preset("case1");
        const double bs = solve_barrier(s).b_star;
        const ValueFunction v(s, bs);
        SimConfig cfg;
        cfg.n_paths = 4000;
        cfg.dt = 1e-3;
        cfg.horizon_t = 240.0;
        cfg.seed = 911;
        const DividendEstimate est = simulate_value(s, bs, 2.0, cfg);
        require(est.truncation_bound / v(2.0) < 1e-3,
                "truncation bound " + fmt(est.truncation_bound));
        const double z = (est.mean - v(2.0)) / est.std_error;
        require(std::abs(z) <= 3.0, "diffusion z=" + fmt(z));
        note = "worst-case budget " + fmt(now_seconds() - t_begin) + " s";
    }
}

// ---------------------------------------------------------------------------
// 8. The solved barrier dominates every other barrier in its own family.

void criterion_dominance() {
    for (const auto& name : preset_names()) {
        const SpecBases bases = build_spec_bases(preset(name));
        const BarrierSolution sol = solve_barrier(bases);
        const ValueFunction v_star(bases, sol.b_star);
        const double upper = 2.0 * std::max(sol.b_bar, 1.0) + 2.0;
        for (double b : figure2_b_list(sol)) {
            if (std::isinf(b)) continue;  // never paying is worth exactly 0
            const ValueFunction v_b(bases, b);
            for (int i = 0; i <= 200; ++i) {
                const double x = upper * i / 200.0;
                require(v_star(x) >= v_b(x) - 1e-8,
                        std::string(name) + ": barrier " + fmt(b) + " beats optimum at x=" +
                            fmt(x) + " by " + fmt(v_b(x) - v_star(x)));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 9. Parameter sensitivity panels.

void criterion_sensitivity() {
    const ProblemSpec base = preset("case1");
    const auto x_grid = default_sensitivity_x_grid();
    const std::size_t nx = x_grid.size();

    struct Panel {
        SweepParam param;
        std::vector<double> grid;
        int direction;  // +1: value rises with the parameter, -1: falls
        bool bstar_nonmonotone;
    };
    const Panel panels[] = {
        {SweepParam::c, figure_grid_c(), +1, false},
        {SweepParam::kappa, figure_grid_kappa(), -1, true},
        {SweepParam::lambda, figure_grid_lambda(), +1, true},
    };

    for (const auto& panel : panels) {
        const auto rows = sensitivity(base, panel.param, panel.grid, x_grid);
        const char* pname = sweep_param_name(panel.param);
        require(rows.size() == panel.grid.size() * nx, std::string(pname) + " row count");
        for (const auto& row : rows)
            require(!row.skipped, std::string(pname) + "=" + fmt(row.value) +
                                      " skipped: " + row.reason);

        for (std::size_t ix = 0; ix < nx; ++ix) {
            for (std::size_t iv = 1; iv < panel.grid.size(); ++iv) {
                const double prev = rows[(iv - 1) * nx + ix].v;
                const double cur = rows[iv * nx + ix].v;
                const double step = panel.direction * (cur - prev);
                require(step >= -1e-9, std::string(pname) + " value not monotone at x=" +
                                           fmt(x_grid[ix]) + ", value " +
                                           fmt(panel.grid[iv]));
            }
        }

        if (panel.bstar_nonmonotone) {
            bool rose = false, fell = false;
            for (std::size_t iv = 1; iv < panel.grid.size(); ++iv) {
                const double d = rows[iv * nx].b_star - rows[(iv - 1) * nx].b_star;
                if (d > 1e-6) rose = true;
                if (d < -1e-6) fell = true;
            }
            require(rose && fell, std::string(pname) +
                                      ": barrier should rise and fall along the grid");
        }
    }

    // Decision-rate panel with the classical envelope appended.
    const auto rows = sensitivity(base, SweepParam::r, figure_grid_r(), x_grid);
    const std::size_t nr = figure_grid_r().size();
    require(rows.size() == (nr + 1) * nx, "r row count");
    for (std::size_t i = 0; i < nr * nx; ++i)
        require(!rows[i].skipped, "r sweep skipped a value");
    for (std::size_t i = nr * nx; i < rows.size(); ++i)
        require(rows[i].param == "classical", "classical envelope rows missing");

    for (std::size_t ix = 0; ix < nx; ++ix) {
        const double v_classical = rows[nr * nx + ix].v;
        double prev_v = -1e300, prev_b = -1.0;
        for (std::size_t iv = 0; iv < nr; ++iv) {
            const auto& row = rows[iv * nx + ix];
            require(row.v >= prev_v - 1e-9, "value not increasing in the decision rate");
            require(row.v <= v_classical + 1e-8,
                    "periodic value exceeds the classical envelope at x=" + fmt(x_grid[ix]));
            prev_v = row.v;
            if (ix == 0) {
                require(row.b_star >= prev_b - 1e-9, "barrier not monotone in the rate");
                require(row.b_star <= row.b_bar + 1e-10, "barrier exceeds b_bar");
                prev_b = row.b_star;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 10. Byte-identical CLI output across thread counts.

std::string run_cli(const std::string& args) {
    const char* bin = std::getenv("PDK_BIN");
    require(bin != nullptr, "PDK_BIN not set");
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    require(p != nullptr, "popen failed");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    const int status = pclose(p);
    require(status == 0, "CLI exited with status " + fmt(status));
    return out;
}

void criterion_determinism() {
    const std::string common =
        "simulate --preset case1p --b 2.0 --x0 1.5 --paths 2000 --seed 7 --horizon 100";
    const std::string ref = run_cli(common + " --threads 1");
    require(!ref.empty(), "empty CLI output");
    for (int threads : {2, 5}) {
        const std::string out = run_cli(common + " --threads " + std::to_string(threads));
        require(out == ref, "output differs at --threads " + std::to_string(threads));
    }
}

// ---------------------------------------------------------------------------

struct Criterion {
    const char* title;
    double budget_s;  // 0: no hard budget
    std::function<void(std::string&)> body;
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {"case classification and boundary criterion", 1.0,
         [](std::string&) { criterion_classification(); }},
        {"closed-form oracle match on the quadratic case", 0.0,
         [](std::string&) { criterion_oracle_match(); }},
        {"scale-function transform, convolution, boundary", 5.0,
         [](std::string&) { criterion_scale_identities(); }},
        {"generator identity suite on all presets", 10.0,
         [](std::string&) { criterion_generator_identities(); }},
        {"variational-inequality certification", 0.0,
         [](std::string&) { criterion_hjb(); }},
        {"smoothness order at the optimal barrier", 0.0,
         [](std::string&) { criterion_smoothness(); }},
        {"monte carlo cross-validation", 0.0, criterion_monte_carlo},
        {"barrier dominance panels", 0.0,
         [](std::string&) { criterion_dominance(); }},
        {"parameter sensitivity panels", 60.0,
         [](std::string&) { criterion_sensitivity(); }},
        {"thread-count determinism of the CLI", 0.0,
         [](std::string&) { criterion_determinism(); }},
    };

    int failed = 0, idx = 0;
    for (const auto& cr : criteria) {
        ++idx;
        const double t0 = now_seconds();
        std::string note;
        std::string verdict = "PASS";
        try {
            cr.body(note);
            const double elapsed = now_seconds() - t0;
            if (cr.budget_s > 0.0 && elapsed > cr.budget_s) {
                verdict = "FAIL";
                note = "budget " + fmt(cr.budget_s) + " s exceeded (" + fmt(elapsed) + " s)";
            }
        } catch (const std::exception& e) {
            verdict = "FAIL";
            note = e.what();
        }
        if (verdict == "FAIL") ++failed;
        const double elapsed = now_seconds() - t0;
        std::ostringstream line;
        line << "[" << (idx < 10 ? " " : "") << idx << "/10] " << verdict << "  "
             << cr.title;
        std::string s = line.str();
        if (s.size() < 60) s.append(60 - s.size(), ' ');
        char timing[32];
        std::snprintf(timing, sizeof timing, "%7.2f s", elapsed);
        std::cout << s << timing;
        if (!note.empty()) std::cout << "  [" << note << "]";
        std::cout << std::endl;
    }

    std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
