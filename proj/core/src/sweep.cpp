#include <pdk/sweep.hpp>

#include <pdk/value.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace pdk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double h_or_limit(const SpecBases& bases, double b) {
    return b > 0.0 ? h(bases, b) : h_at_zero(bases);
}

void merge_marker(std::vector<HCurveRow>& rows, const SpecBases& bases, double at, bool star,
                  bool bar) {
    for (auto& row : rows) {
        if (std::abs(row.b - at) <= 1e-12 * (1.0 + std::abs(at))) {
            row.is_bstar = row.is_bstar || star;
            row.is_bbar = row.is_bbar || bar;
            return;
        }
    }
    HCurveRow row{at, h_or_limit(bases, at), star, bar};
    auto pos = std::upper_bound(rows.begin(), rows.end(), at,
                                [](double v, const HCurveRow& r) { return v < r.b; });
    rows.insert(pos, row);
}

} // namespace

std::vector<HCurveRow> h_curve(const SpecBases& bases, const std::vector<double>& b_grid) {
    std::vector<HCurveRow> rows;
    rows.reserve(b_grid.size() + 2);
    for (double b : b_grid) {
        if (!(b >= 0.0)) throw std::invalid_argument("barrier grid entries must be nonnegative");
        rows.push_back({b, h_or_limit(bases, b), false, false});
    }
    std::sort(rows.begin(), rows.end(),
              [](const HCurveRow& a, const HCurveRow& b) { return a.b < b.b; });
    BarrierSolution sol = solve_barrier(bases);
    merge_marker(rows, bases, sol.b_star, true, false);
    merge_marker(rows, bases, sol.b_bar, false, true);
    return rows;
}

std::vector<DominanceRow> dominance_panel(const SpecBases& bases,
                                          const std::vector<double>& b_list,
                                          const std::vector<double>& x_grid) {
    std::vector<DominanceRow> rows;
    rows.reserve(b_list.size() * x_grid.size());
    for (double b : b_list) {
        if (std::isinf(b)) {
            for (double x : x_grid) rows.push_back({x, b, 0.0});
            continue;
        }
        ValueFunction v(bases, b);
        for (double x : x_grid) rows.push_back({x, b, v(x)});
    }
    return rows;
}

const char* sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::c: return "c";
        case SweepParam::kappa: return "kappa";
        case SweepParam::lambda: return "lambda";
        case SweepParam::r: return "r";
    }
    return "?";
}

SweepParam sweep_param_from_name(const std::string& name) {
    if (name == "c") return SweepParam::c;
    if (name == "kappa") return SweepParam::kappa;
    if (name == "lambda") return SweepParam::lambda;
    if (name == "r") return SweepParam::r;
    throw std::invalid_argument("unknown sweep parameter '" + name +
                                "' (expected c, kappa, lambda, or r)");
}

std::vector<SensitivityRow> sensitivity(const ProblemSpec& base, SweepParam param,
                                        const std::vector<double>& values,
                                        const std::vector<double>& x_grid, int threads) {
    const std::string pname = sweep_param_name(param);
    std::vector<std::vector<SensitivityRow>> blocks(values.size());

    auto run_one = [&](std::size_t vi) {
        double value = values[vi];
        std::vector<SensitivityRow>& out = blocks[vi];
        ProblemSpec spec = base;
        try {
            switch (param) {
                case SweepParam::c: spec.model.c = value; break;
                case SweepParam::kappa:
                    if (spec.model.jumps.empty())
                        throw std::invalid_argument("model has no jump term to vary");
                    spec.model.jumps[0].rate = value;
                    break;
                case SweepParam::lambda:
                    if (spec.model.jumps.empty())
                        throw std::invalid_argument("model has no jump term to vary");
                    spec.model.jumps[0].lambda = value;
                    break;
                case SweepParam::r: spec.r = value; break;
            }
            SpecBases bases = build_spec_bases(spec);
            BarrierSolution sol = solve_barrier(bases);
            ValueFunction v(bases, sol.b_star);
            for (double x : x_grid)
                out.push_back({pname, value, sol.b_star, sol.b_bar, x, v(x), false, ""});
        } catch (const std::exception& e) {
            out.clear();
            out.push_back({pname, value, 0.0, 0.0, 0.0, 0.0, true, e.what()});
        }
    };

    int k = std::max(1, threads);
    if (k == 1 || values.size() < 2) {
        for (std::size_t vi = 0; vi < values.size(); ++vi) run_one(vi);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (values.size() + k - 1) / k;
        for (int w = 0; w < k; ++w) {
            std::size_t lo = w * chunk;
            std::size_t hi = std::min(values.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&run_one, lo, hi] {
                for (std::size_t vi = lo; vi < hi; ++vi) run_one(vi);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<SensitivityRow> rows;
    for (auto& blk : blocks)
        for (auto& row : blk) rows.push_back(std::move(row));

    if (param == SweepParam::r) {
        ClassicalValue cv(base);
        for (double x : x_grid)
            rows.push_back({"classical", kInf, cv.barrier(), cv.barrier(), x, cv(x), false, ""});
    }
    return rows;
}

std::vector<double> figure_grid_c() {
    std::vector<double> g;
    for (int i = 0; i <= 40; ++i) g.push_back(1.0 + 0.1 * i);
    return g;
}

std::vector<double> figure_grid_kappa() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(0.001 * i);
    for (int i = 1; i <= 9; ++i) g.push_back(0.01 * i);
    for (int i = 1; i <= 30; ++i) g.push_back(0.1 * i);
    return g;
}

std::vector<double> figure_grid_lambda() {
    std::vector<double> g;
    for (int i = 1; i <= 29; ++i) g.push_back(0.1 * i);
    for (int i = 3; i <= 9; ++i) g.push_back(static_cast<double>(i));
    for (int i = 15; i <= 95; i += 5) g.push_back(static_cast<double>(i));
    g.push_back(100.0);
    return g;
}

std::vector<double> figure_grid_r() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(0.001 * i);
    for (int i = 1; i <= 9; ++i) g.push_back(0.01 * i);
    for (int i = 1; i <= 9; ++i) g.push_back(0.1 * i);
    for (int i = 1; i <= 100; ++i) g.push_back(static_cast<double>(i));
    return g;
}

std::vector<double> default_sensitivity_x_grid() {
    std::vector<double> g(121);
    for (int i = 0; i <= 120; ++i) g[i] = 12.0 * i / 120.0;
    return g;
}

std::vector<double> figure2_b_list(const BarrierSolution& sol) {
    std::vector<double> b;
    if (sol.b_star > 0.0) {
        b = {0.0,
             0.25 * sol.b_star,
             0.5 * sol.b_star,
             0.75 * sol.b_star,
             sol.b_star,
             0.5 * (sol.b_star + sol.b_bar),
             sol.b_bar,
             sol.b_bar + 0.5 * (sol.b_bar - sol.b_star)};
    } else if (sol.b_bar > 0.0) {
        b = {0.0, 0.5 * sol.b_bar, sol.b_bar, 1.5 * sol.b_bar};
    } else {
        b = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(),
                        [](double x, double y) { return std::abs(x - y) < 1e-12; }),
            b.end());
    b.push_back(kInf);
    return b;
}

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << buf;
}

} // namespace

void write_h_curve_csv(std::ostream& os, const std::vector<HCurveRow>& rows) {
    os << "b,h,is_bstar,is_bbar\n";
    for (const auto& r : rows) {
        put(os, r.b);
        os << ',';
        put(os, r.h);
        os << ',' << (r.is_bstar ? 1 : 0) << ',' << (r.is_bbar ? 1 : 0) << '\n';
    }
}

void write_dominance_csv(std::ostream& os, const std::vector<DominanceRow>& rows) {
    os << "x,b,v\n";
    for (const auto& r : rows) {
        put(os, r.x);
        os << ',';
        put(os, r.b);
        os << ',';
        put(os, r.v);
        os << '\n';
    }
}

void write_sensitivity_csv(std::ostream& os, const std::vector<SensitivityRow>& rows) {
    os << "param,value,b_star,b_bar,x,v\n";
    for (const auto& r : rows) {
        os << r.param << ',';
        put(os, r.value);
        if (r.skipped) {
            os << ",,,,\n";
            continue;
        }
        os << ',';
        put(os, r.b_star);
        os << ',';
        put(os, r.b_bar);
        os << ',';
        put(os, r.x);
        os << ',';
        put(os, r.v);
        os << '\n';
    }
}

} // namespace pdk
