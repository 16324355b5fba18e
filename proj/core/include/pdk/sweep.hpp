#pragma once

#include <pdk/barrier.hpp>
#include <pdk/scale.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace pdk {

struct HCurveRow {
    double b = 0.0;
    double h = 0.0;
    bool is_bstar = false;
    bool is_bbar = false;
};

// Barrier criterion along a b-grid, with marker rows for the root and for
// the concavity switchpoint merged in at their sorted positions. b = 0 rows
// report the right-hand limit of the criterion.
std::vector<HCurveRow> h_curve(const SpecBases& bases, const std::vector<double>& b_grid);

struct DominanceRow {
    double x = 0.0;
    double b = 0.0;
    double v = 0.0;
};

// Value of the barrier-b strategy on an x-grid for each b in b_list, rows
// grouped by b. b = +inf means never paying, value identically 0.
std::vector<DominanceRow> dominance_panel(const SpecBases& bases, const std::vector<double>& b_list,
                                          const std::vector<double>& x_grid);

enum class SweepParam { c, kappa, lambda, r };

const char* sweep_param_name(SweepParam p);
SweepParam sweep_param_from_name(const std::string& name);

struct SensitivityRow {
    std::string param;
    double value = 0.0;
    double b_star = 0.0;
    double b_bar = 0.0;
    double x = 0.0;
    double v = 0.0;
    bool skipped = false;
    std::string reason;
};

// Re-solves the model along a parameter grid and tabulates the optimal value
// on the x-grid. Values that make the model invalid come back as skipped rows
// carrying the validation message. kappa and lambda act on the first jump
// term. An r sweep appends the classical-strategy envelope as rows with
// param "classical" and value +inf.
std::vector<SensitivityRow> sensitivity(const ProblemSpec& base, SweepParam param,
                                        const std::vector<double>& values,
                                        const std::vector<double>& x_grid, int threads = 1);

// Canonical parameter grids for the six standard panels.
std::vector<double> figure_grid_c();      // 1.0 to 5.0 by 0.1
std::vector<double> figure_grid_kappa();  // three decades up to 3.0
std::vector<double> figure_grid_lambda(); // 0.1 to 100, coarsening
std::vector<double> figure_grid_r();      // 0.001 to 100, decade blocks
std::vector<double> default_sensitivity_x_grid(); // 0 to 12, step 0.1

// Barrier levels for the strategy-comparison panel, spread around the solved
// levels (or probing above 0 when the optimum sits at the boundary), always
// containing b_star and closing with +inf.
std::vector<double> figure2_b_list(const BarrierSolution& sol);

// CSV emission, %.12g throughout, header row first. Skipped sensitivity rows
// leave the numeric columns empty.
void write_h_curve_csv(std::ostream& os, const std::vector<HCurveRow>& rows);
void write_dominance_csv(std::ostream& os, const std::vector<DominanceRow>& rows);
void write_sensitivity_csv(std::ostream& os, const std::vector<SensitivityRow>& rows);

} // namespace pdk
